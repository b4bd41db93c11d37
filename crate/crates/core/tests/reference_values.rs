//! Every published reference value, reproduced to 1e-9.

use hlgf_core::{green, GreenQuery, LatticeModel, QuadConfig, RegimeParams, REFERENCE_VALUES};

#[test]
fn all_reference_values() {
    let params = RegimeParams::default();
    let cfg = QuadConfig::default();
    let mut bad = Vec::new();
    for rv in REFERENCE_VALUES {
        let model = LatticeModel::isotropic(rv.d, 1.0).unwrap();
        let q = GreenQuery::new(model, rv.r.to_vec(), rv.omega).unwrap();
        let g = green(&q, &params, &cfg).unwrap();
        let delta = (g.value - rv.value()).norm();
        if delta > 1e-9 {
            bad.push(format!("{} d={}: got {} delta {delta:.2e}", rv.name(), rv.d, g.value));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn band_edge_values_agree_between_paths() {
    // ω = W is handled as a van Hove point by the in-band machinery and, via
    // the modified-Bessel integral, by the outside-band path
    let params = RegimeParams::default();
    let cfg = QuadConfig::default();
    for rv in REFERENCE_VALUES.iter().filter(|v| v.omega == v.d as f64) {
        let q = GreenQuery::new(LatticeModel::isotropic(rv.d, 1.0).unwrap(), rv.r.to_vec(), rv.omega).unwrap();
        let a = hlgf_core::green_at_van_hove(&q, &params, &cfg).unwrap().value;
        let b = hlgf_core::green_outside_band(&q, &params, &cfg).unwrap().value;
        assert!((a - b).norm() <= 1e-10, "{}: {a} vs {b}", rv.name());
    }
}
