//! Eta quotients and Eisenstein series as exact truncated q-expansions.
//!
//! An eta quotient prod_d eta(d tau)^{e_d} expands as
//! q^{sum d e_d / 24} * prod_d P(q^d)^{e_d} with P(q) = prod_{n>=1}(1-q^n).
//! Euler's pentagonal number theorem makes each P(q^d) a ±1 series with
//! O(sqrt(B/d)) nonzero terms up to q^B, so the whole product costs
//! O(B sqrt B) coefficient operations instead of the naive O(B^2).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{convolve, QSeries};
use crate::error::{Error, Result};

/// (exponent, sign) pairs of prod_{n>=1}(1 - q^{dn}) up to q^max, in
/// increasing exponent order. Signs follow k(3k-1)/2 -> (-1)^k.
fn pentagonal_terms(d: u64, max: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    let mut k = 1u64;
    loop {
        let g_plus = k * (3 * k - 1) / 2;
        let g_minus = k * (3 * k + 1) / 2;
        let sign = if k % 2 == 1 { -1i64 } else { 1 };
        let e_plus = (d * g_plus) as usize;
        let e_minus = (d * g_minus) as usize;
        if e_plus > max {
            break;
        }
        terms.push((e_plus, sign));
        if e_minus <= max {
            terms.push((e_minus, sign));
        }
        k += 1;
    }
    terms
}

fn pentagonal_dense(d: u64, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (e, s) in pentagonal_terms(d, len - 1) {
        out[e] = BigInt::from(s);
    }
    out
}

/// 1 / prod(1 - q^{dn}) up to index `max`, by the sparse recurrence
/// c_n = -sum_{j>=1} a_j c_{n-j} over the pentagonal terms a.
fn pentagonal_inverse(d: u64, max: usize) -> Vec<BigInt> {
    let terms = pentagonal_terms(d, max);
    let mut c = vec![BigInt::zero(); max + 1];
    c[0] = BigInt::one();
    for n in 1..=max {
        let mut acc = BigInt::zero();
        for &(j, s) in terms.iter().skip(1) {
            if j > n {
                break;
            }
            if s > 0 {
                acc += &c[n - j];
            } else {
                acc -= &c[n - j];
            }
        }
        c[n] = -acc;
    }
    c
}

/// Expansion of prod_d eta(d tau)^{e_d} including the leading q-power,
/// truncated at q^precision.
///
/// The q-power offset sum(d * e_d) / 24 must be a nonnegative integer;
/// anything else is rejected (a fractional power is not a q-series, a
/// negative one is a Laurent series, and neither is supported). Negative
/// exponents are fine: each factor has constant term 1, hence a well-defined
/// inverse.
pub fn eta_quotient(spec: &[(u64, i64)], precision: usize) -> Result<QSeries> {
    use std::collections::BTreeMap;
    let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
    for &(d, e) in spec {
        if d == 0 {
            return Err(Error::EtaQuotient("factor index d must be >= 1".into()));
        }
        *merged.entry(d).or_insert(0) += e;
    }
    let offset24: i128 = merged.iter().map(|(&d, &e)| d as i128 * e as i128).sum();
    if offset24 % 24 != 0 {
        return Err(Error::EtaQuotient(format!(
            "q-power offset {offset24}/24 is not an integer"
        )));
    }
    let t = offset24 / 24;
    if t < 0 {
        return Err(Error::EtaQuotient(format!(
            "leading power q^{t} would make this a Laurent series"
        )));
    }
    let t = t as usize;
    if t > precision {
        // Leading power beyond the truncation: everything visible is zero.
        return Ok(QSeries::zero(precision));
    }
    let w = precision - t;
    let mut acc = vec![BigInt::one()];
    for (&d, &e) in &merged {
        if e == 0 {
            continue;
        }
        let factor = if e > 0 {
            convolve::pow(&pentagonal_dense(d, w + 1), e as u32, w + 1)
        } else {
            convolve::pow(&pentagonal_inverse(d, w), (-e) as u32, w + 1)
        };
        acc = convolve::mul(&acc, &factor, w + 1);
    }
    acc.resize(w + 1, BigInt::zero());
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.resize(t, BigRational::zero());
    coeffs.extend(acc.into_iter().map(BigRational::from_integer));
    Ok(QSeries::new(coeffs))
}

/// Normalized Eisenstein series of weight 4 or 6:
/// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
/// Other weights are deliberately not provided; the classical identities
/// E8 = E4^2, E10 = E4 E6, E14 = E4^2 E6 cover everything this crate needs.
pub fn eisenstein(k: u32, precision: usize) -> Result<QSeries> {
    let (power, scale): (u32, i64) = match k {
        4 => (3, 240),
        6 => (5, -504),
        _ => return Err(Error::EisensteinWeight(k)),
    };
    let sigma = sigma_sieve(power, precision);
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(BigRational::one());
    for s in sigma.into_iter().skip(1) {
        coeffs.push(BigRational::from_integer(BigInt::from(scale) * BigInt::from(s)));
    }
    Ok(QSeries::new(coeffs))
}

/// sigma_power(n) for n = 0..=bound (index 0 unused, set to 0).
/// Time: O(bound log bound) u128 additions.
fn sigma_sieve(power: u32, bound: usize) -> Vec<u128> {
    let mut s = vec![0u128; bound + 1];
    for d in 1..=bound {
        let dp = (d as u128).pow(power);
        let mut m = d;
        while m <= bound {
            s[m] += dp;
            m += d;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn int_coeffs(s: &QSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.to_integer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn pentagonal_terms_small() {
        // 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...
        assert_eq!(
            pentagonal_terms(1, 15),
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]
        );
        assert_eq!(pentagonal_terms(3, 7), vec![(0, 1), (3, -1), (6, -1)]);
    }

    #[test]
    fn pentagonal_inverse_is_partition_function() {
        let p = pentagonal_inverse(1, 10);
        let expect = [1i64, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(p[i], BigInt::from(e), "p({i})");
        }
    }

    #[test]
    fn delta_expansion() {
        let delta = eta_quotient(&[(1, 24)], 10).unwrap();
        assert_eq!(
            int_coeffs(&delta),
            vec![0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
        );
    }

    #[test]
    fn level_eleven_newform_expansion() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 10).unwrap();
        assert_eq!(int_coeffs(&f), vec![0, 1, -2, -1, 2, 1, 2, -2, 0, -2, -2]);
    }

    #[test]
    fn empty_spec_is_one() {
        let one = eta_quotient(&[], 3).unwrap();
        assert_eq!(int_coeffs(&one), vec![1, 0, 0, 0]);
    }

    #[test]
    fn fractional_offset_rejected() {
        assert!(matches!(
            eta_quotient(&[(1, 1)], 5),
            Err(Error::EtaQuotient(_))
        ));
    }

    #[test]
    fn negative_leading_power_rejected() {
        assert!(matches!(
            eta_quotient(&[(1, -24)], 5),
            Err(Error::EtaQuotient(_))
        ));
    }

    #[test]
    fn zero_factor_index_rejected() {
        assert!(eta_quotient(&[(0, 24)], 5).is_err());
    }

    #[test]
    fn offset_beyond_precision_is_zero_series() {
        let s = eta_quotient(&[(48, 1), (24, -1), (1, 1), (23, 1)], 1).unwrap();
        // offset (48 - 24 + 1 + 23)/24 = 2 > precision 1
        assert!(s.coeffs().iter().all(|c| c.is_zero()));
        assert_eq!(s.precision(), 1);
    }

    #[test]
    fn negative_exponents_invert_exactly() {
        // eta(tau)^48 / eta(2 tau)^24 times eta(2 tau)^24 / eta(tau)^24 = delta
        let a = eta_quotient(&[(1, 48), (2, -24)], 40).unwrap();
        let b = eta_quotient(&[(2, 24), (1, -24)], 40).unwrap();
        let delta = eta_quotient(&[(1, 24)], 40).unwrap();
        assert_eq!(a.mul(&b), delta);
    }

    #[test]
    fn eisenstein_small_coefficients() {
        let e4 = eisenstein(4, 3).unwrap();
        assert_eq!(int_coeffs(&e4), vec![1, 240, 2160, 6720]);
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(int_coeffs(&e6), vec![1, -504, -16632]);
    }

    #[test]
    fn eisenstein_rejects_other_weights() {
        assert!(matches!(eisenstein(8, 5), Err(Error::EisensteinWeight(8))));
        assert!(matches!(eisenstein(5, 5), Err(Error::EisensteinWeight(5))));
    }
}
