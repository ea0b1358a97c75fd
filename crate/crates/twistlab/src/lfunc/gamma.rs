//! Complex gamma function via the Lanczos approximation (g = 7, 9 terms),
//! with the reflection formula for Re(z) < 1/2.
//!
//! Relative accuracy is around 1e-13 on the strips used by the checks here,
//! comfortably inside the 1e-12 budget the ratio identity asks for.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// How close the argument may come to a pole (non-positive integer).
const POLE_MARGIN: f64 = 1e-3;

fn nearest_pole_distance(z: Complex64) -> f64 {
    let n = z.re.round();
    if n > 0.0 {
        return f64::INFINITY;
    }
    (z - Complex64::new(n, 0.0)).norm()
}

/// Gamma(z) for complex z, principal branch, refusing near-pole arguments.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if nearest_pole_distance(z) < POLE_MARGIN {
        return Err(Error::PoleProximity(format!("{z}")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z). The argument
        // 1 - z lands in the half-plane where the series below converges.
        let pi_z = z * PI;
        return PI / (pi_z.sin() * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Both sides of Gamma(s)/Gamma(s-m) = prod_{j=1}^{m} (s - j), plus the
/// relative discrepancy between them.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GammaRatioCheck {
    pub s: Complex64,
    pub m: u32,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_error: f64,
}

pub fn gamma_ratio_check(s: Complex64, m: u32) -> Result<GammaRatioCheck> {
    if m < 1 {
        return Err(Error::Domain("gamma ratio needs m >= 1".into()));
    }
    let lhs = complex_gamma(s)? / complex_gamma(s - m as f64)?;
    let mut rhs = Complex64::new(1.0, 0.0);
    for j in 1..=m {
        rhs *= s - j as f64;
    }
    let relative_error = if rhs.norm() == 0.0 {
        (lhs - rhs).norm()
    } else {
        (lhs - rhs).norm() / rhs.norm()
    };
    Ok(GammaRatioCheck {
        s,
        m,
        lhs,
        rhs,
        relative_error,
    })
}
