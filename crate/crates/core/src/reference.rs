//! Published high-precision values of `G_r(ω)` for the isotropic cubic
//! (`d = 3`) and hypercubic (`d = 4`) lattices with `Ω_k = 1`, stored as
//! decimal strings.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceValue {
    pub d: usize,
    pub r: &'static [i32],
    pub omega: f64,
    pub re: &'static str,
    pub im: &'static str,
}

impl ReferenceValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(
            self.re.parse().expect("reference literal"),
            self.im.parse().expect("reference literal"),
        )
    }

    /// `G_{110}(3)` style label.
    pub fn name(&self) -> String {
        let digits: String = self.r.iter().map(|x| x.to_string()).collect();
        format!("G_{digits}({})", self.omega)
    }
}

const fn rv(d: usize, r: &'static [i32], omega: f64, re: &'static str, im: &'static str) -> ReferenceValue {
    ReferenceValue { d, r, omega, re, im }
}

pub const REFERENCE_VALUES: &[ReferenceValue] = &[
    rv(3, &[0, 0, 0], 3.0, "0.50546201972", "0"),
    rv(3, &[1, 0, 0], 3.0, "-0.17212868638", "0"),
    rv(3, &[1, 1, 0], 3.0, "0.11038286738", "0"),
    rv(3, &[1, 1, 1], 3.0, "-0.08715670880", "0"),
    rv(3, &[2, 0, 0], 3.0, "0.08577862908", "0"),
    rv(3, &[0, 0, 0], 0.0, "0", "-0.89644078878"),
    rv(3, &[1, 0, 0], 0.0, "0.33333333333", "0"),
    rv(3, &[1, 1, 0], 0.0, "0", "0.18578752146"),
    rv(3, &[1, 1, 1], 0.0, "-0.27566444771", "0"),
    rv(3, &[2, 0, 0], 0.0, "0", "0.15329070292"),
    rv(4, &[0, 0, 0, 0], 4.0, "0.309866780462", "0"),
    rv(4, &[1, 0, 0, 0], 4.0, "-0.05986678046", "0"),
    rv(4, &[1, 1, 0, 0], 4.0, "0.02542940754", "0"),
    rv(4, &[1, 1, 1, 0], 4.0, "-0.01546809528", "0"),
    rv(4, &[1, 1, 1, 1], 4.0, "0.01118185767", "0"),
    rv(4, &[2, 0, 0, 0], 4.0, "0.01649101798", "0"),
    rv(4, &[0, 0, 0, 0], 0.0, "0", "-0.90272857832"),
    rv(4, &[1, 0, 0, 0], 0.0, "0.25000000000", "0"),
    rv(4, &[1, 1, 0, 0], 0.0, "0", "0.15098515279"),
    rv(4, &[1, 1, 1, 0], 0.0, "-0.10132118364", "0"),
    rv(4, &[1, 1, 1, 1], 0.0, "0", "-0.20025275758"),
    rv(4, &[2, 0, 0, 0], 0.0, "0", "-0.00318233840"),
    rv(4, &[0, 0, 0, 0], 1.0, "0.3726972107993", "-0.6681496264378"),
    rv(4, &[0, 0, 0, 0], 2.0, "0.5680714850367", "-0.3573566432144"),
    rv(4, &[0, 0, 0, 0], 3.0, "0.4358824699995", "-0.1063899831047"),
];
