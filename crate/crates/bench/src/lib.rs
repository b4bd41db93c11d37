//! Benchmark problems shared by the criterion targets.

use hlgf_core::{GreenQuery, LatticeModel};

/// d = 4, Ω = 1, ω = 1, r = (1,2,2,3).
pub fn oscillatory_problem() -> GreenQuery {
    GreenQuery::new(LatticeModel::isotropic(4, 1.0).unwrap(), vec![1, 2, 2, 3], 1.0).unwrap()
}

/// The on-site d = 4 integrand at ω = 1.5, used for the Levin demo.
pub fn levin_problem() -> GreenQuery {
    GreenQuery::new(LatticeModel::isotropic(4, 1.0).unwrap(), vec![0; 4], 1.5).unwrap()
}

pub fn cubic(r: [i32; 3], omega: f64) -> GreenQuery {
    GreenQuery::new(LatticeModel::isotropic(3, 1.0).unwrap(), r.to_vec(), omega).unwrap()
}
