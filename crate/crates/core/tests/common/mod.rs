//! Query grids shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use hlgf_core::contour::nearest_van_hove;
use hlgf_core::specfun::{bessel_i_scaled, bessel_j, hankel, hankel_scaled, HankelKind};
use hlgf_core::{green, Complex64, ContourError, GreenQuery, LatticeModel, QuadConfig, RegimeParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn iso(d: usize, r: &[i32], omega: f64) -> GreenQuery {
    GreenQuery::new(LatticeModel::isotropic(d, 1.0).unwrap(), r.to_vec(), omega).unwrap()
}

pub fn contour(q: &GreenQuery) -> Result<Complex64, ContourError> {
    green(q, &RegimeParams::default(), &QuadConfig::default()).map(|g| g.value)
}

/// (r, ω) pairs for the Helmholtz check: d = 1..4, every regime except van
/// Hove points in d ≤ 2, where G itself diverges.
pub fn helmholtz_grid() -> Vec<GreenQuery> {
    let mut out = Vec::new();
    let sites: [&[i32]; 4] = [&[0, 0, 0, 0], &[1, 0, 0, 0], &[2, 1, 0, 0], &[1, 2, 2, 3]];
    for d in 1..=4usize {
        let w = d as f64;
        let mut omegas = vec![0.3, 0.77 * w, -0.45 * w, w + 0.5, -(w + 1.7)];
        if d >= 3 {
            // van Hove rows and their neighbourhood
            omegas.extend([w, w - 2.0, w - 2.0 - 3e-5, -w]);
        } else {
            omegas.push(w - 0.2);
        }
        for site in sites {
            for &omega in &omegas {
                out.push(iso(d, &site[..d], omega));
            }
        }
    }
    out.push(GreenQuery::new(LatticeModel::new(vec![0.6, 1.3]).unwrap(), vec![1, 2], 0.4).unwrap());
    out.push(GreenQuery::new(LatticeModel::new(vec![0.5, 1.0, 1.5]).unwrap(), vec![2, 0, 1], 1.2).unwrap());
    out.push(GreenQuery::new(LatticeModel::new(vec![0.5, 1.0, 1.5]).unwrap(), vec![0, 0, 0], 2.0).unwrap());
    out
}

/// Reproducible random queries with `d ∈ dims`, `|r_k| ≤ 3`, at least
/// `gap` away from every van Hove frequency and inside the band.
pub fn random_generic(seed: u64, count: usize, dims: std::ops::RangeInclusive<usize>, gap: f64) -> Vec<GreenQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(dims.clone());
        let omegas: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..1.5)).collect();
        let model = LatticeModel::new(omegas).unwrap();
        let w = model.bandwidth();
        let omega = rng.gen_range(-w..w);
        if nearest_van_hove(&model, omega).1 < gap {
            continue;
        }
        let r = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
        out.push(GreenQuery::new(model, r, omega).unwrap());
    }
    out
}

/// One row of the stored 50-digit special-function table.
pub struct OracleRow {
    pub func: String,
    pub order: u32,
    pub z: Complex64,
    pub value: Complex64,
}

pub fn load_oracle() -> Vec<OracleRow> {
    let text = include_str!("../data/specfun_oracle.csv");
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let p = |s: &str| s.parse::<f64>().unwrap();
            OracleRow {
                func: f[0].to_string(),
                order: f[1].parse().unwrap(),
                z: Complex64::new(p(f[2]), p(f[3])),
                value: Complex64::new(p(f[4]), p(f[5])),
            }
        })
        .collect()
}

pub fn evaluate_oracle_row(row: &OracleRow) -> Complex64 {
    let n = row.order;
    let z = row.z;
    match row.func.as_str() {
        "J" => Complex64::new(bessel_j(n, z.re).unwrap(), 0.0),
        "IS" => Complex64::new(bessel_i_scaled(n, z.re).unwrap(), 0.0),
        "HP" => hankel(HankelKind::Plus, n, z).unwrap(),
        "HM" => hankel(HankelKind::Minus, n, z).unwrap(),
        "HPS" => hankel_scaled(HankelKind::Plus, n, z).unwrap(),
        "HMS" => hankel_scaled(HankelKind::Minus, n, z).unwrap(),
        other => panic!("unknown function tag {other}"),
    }
}
