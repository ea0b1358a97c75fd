//! Truncated q-expansions with exact rational coefficients.
//!
//! A `QSeries` holds coefficients of q^0 .. q^B for its precision B. Every
//! binary operation truncates to the smaller precision of its operands, so
//! precision only ever shrinks and no operation can fabricate coefficients
//! it does not know. Products of integral series are routed through an
//! adaptive exact convolution (schoolbook for thin operands, multimodular
//! NTT for dense ones); genuinely rational series take the schoolbook path.

mod convolve;
mod eta;

pub use eta::{eisenstein, eta_quotient};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// Series from coefficients of q^0..q^B; precision is len - 1.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least q^0");
        QSeries { coeffs }
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero(precision: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); precision + 1],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); precision + 1];
        coeffs[0] = BigRational::one();
        QSeries { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of q^n. Reading past the precision is a logic error.
    pub fn coeff(&self, n: usize) -> &BigRational {
        assert!(
            n < self.coeffs.len(),
            "coefficient q^{n} beyond precision {}",
            self.precision()
        );
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Drop coefficients above q^precision. Panics if asked to extend.
    pub fn truncate(&self, precision: usize) -> QSeries {
        assert!(
            precision <= self.precision(),
            "cannot extend precision {} to {precision}",
            self.precision()
        );
        QSeries {
            coeffs: self.coeffs[..=precision].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// All denominators 1?
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficient vector, if the series is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if self.is_integral() {
            Some(self.coeffs.iter().map(|c| c.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product truncated to the smaller operand precision.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let out_len = self.coeffs.len().min(other.coeffs.len());
        if let (Some(a), Some(b)) = (self.integer_coeffs(), other.integer_coeffs()) {
            let prod = convolve::mul(&a, &b, out_len);
            return QSeries {
                coeffs: prod.into_iter().map(BigRational::from_integer).collect(),
            };
        }
        let mut out = vec![BigRational::zero(); out_len];
        for (i, ci) in self.coeffs.iter().enumerate().take(out_len) {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in other.coeffs.iter().enumerate().take(out_len - i) {
                if !cj.is_zero() {
                    out[i + j] += ci * cj;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Binary exponentiation; pow(0) is 1 at the same precision.
    pub fn pow(&self, e: u32) -> QSeries {
        let out_len = self.coeffs.len();
        if let Some(a) = self.integer_coeffs() {
            let powed = convolve::pow(&a, e, out_len);
            return QSeries {
                coeffs: powed.into_iter().map(BigRational::from_integer).collect(),
            };
        }
        let mut result = QSeries::one(self.precision());
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        result
    }

    /// Coefficientwise equality up to q^upto (both series must reach it).
    pub fn agrees_to(&self, other: &QSeries, upto: usize) -> bool {
        assert!(upto <= self.precision() && upto <= other.precision());
        self.coeffs[..=upto] == other.coeffs[..=upto]
    }
}

impl std::ops::Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c < &BigRational::zero() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if wrote {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            wrote = true;
            let coeff_part = if mag.is_one() && n != 0 {
                String::new()
            } else {
                mag.to_string()
            };
            match n {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coeff_part}{}q", if coeff_part.is_empty() { "" } else { "*" })?,
                _ => write!(f, "{coeff_part}{}q^{n}", if coeff_part.is_empty() { "" } else { "*" })?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision() + 1)
    }
}
