//! Normalized-trace comparison between coefficient records.
//!
//! The central subtlety: "the normalized eigenvalues agree" is decided
//! without ever forming p^{(k-1)/2}. Sign equality plus the cross-multiplied
//! square identity a_p(f1)^2 p^{k2-1} = a_p(f2)^2 p^{k1-1} is equivalent to
//! it over the rationals, stays in integer arithmetic, and is independent of
//! whether the normalization exponent is read as (k-1)/2 or k/2; the
//! convention switch below only affects displayed values.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modforms::NewformRecord;
use crate::primes::{is_prime, primes_up_to};

/// Which exponent the *display* normalization uses. Exact set membership
/// decisions are identical under both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightConvention {
    /// a_p / p^{(k-1)/2}
    #[default]
    Motivic,
    /// a_p / p^{k/2}
    Statement,
}

impl WeightConvention {
    fn exponent_numerator(self, weight: u32) -> u32 {
        match self {
            WeightConvention::Motivic => weight - 1,
            WeightConvention::Statement => weight,
        }
    }
}

impl std::str::FromStr for WeightConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "motivic" => Ok(WeightConvention::Motivic),
            "statement" => Ok(WeightConvention::Statement),
            other => Err(Error::BadConfig(format!(
                "unknown weight convention {other:?}: expected motivic or statement"
            ))),
        }
    }
}


/// Floating display value of the normalized eigenvalue at a good prime.
pub fn normalized_ap(f: &NewformRecord, p: u64, convention: WeightConvention) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.level().is_multiple_of(p) {
        return Err(Error::Range {
            what: "normalized eigenvalue at a bad prime",
            requested: p,
            available: 0,
        });
    }
    let ap = f.coefficient(p)?;
    let num = bigint_to_f64(ap);
    let half_exp = convention.exponent_numerator(f.weight()) as f64 / 2.0;
    Ok(num / (p as f64).powf(half_exp))
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    // num-bigint converts with correct rounding; display-only path.
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn shared_scan_bound(f1: &NewformRecord, f2: &NewformRecord, x: u64) -> Result<u64> {
    let available = f1.bound().min(f2.bound());
    if x > available {
        return Err(Error::Range {
            what: "prime scan",
            requested: x,
            available,
        });
    }
    Ok(x)
}

/// Exact equality test of normalized traces at one good prime.
fn traces_coincide(f1: &NewformRecord, f2: &NewformRecord, p: u64) -> bool {
    let a1 = f1.coefficient(p).expect("caller checked range");
    let a2 = f2.coefficient(p).expect("caller checked range");
    if a1.sign() != a2.sign() {
        return false;
    }
    let lhs = a1 * a1 * BigInt::from(p).pow(f2.weight() - 1);
    let rhs = a2 * a2 * BigInt::from(p).pow(f1.weight() - 1);
    lhs == rhs
}

/// Primes p <= x, p not dividing either level, where the normalized traces
/// agree exactly. Odd weight difference forces a_p(f1) = a_p(f2) = 0 at any
/// member, which is how the parity argument shows up empirically.
pub fn coincidence_set(f1: &NewformRecord, f2: &NewformRecord, x: u64) -> Result<Vec<u64>> {
    let x = shared_scan_bound(f1, f2, x)?;
    Ok(primes_up_to(x)
        .into_iter()
        .filter(|&p| !f1.level().is_multiple_of(p) && !f2.level().is_multiple_of(p))
        .filter(|&p| traces_coincide(f1, f2, p))
        .collect())
}

/// Good primes p <= x with a_p(f) = 0.
pub fn vanishing_set(f: &NewformRecord, x: u64) -> Result<Vec<u64>> {
    if x > f.bound() {
        return Err(Error::Range {
            what: "vanishing scan",
            requested: x,
            available: f.bound(),
        });
    }
    Ok(primes_up_to(x)
        .into_iter()
        .filter(|&p| !f.level().is_multiple_of(p))
        .filter(|&p| f.coefficient(p).expect("in range").is_zero())
        .collect())
}

/// An exact counting ratio num/den.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn cross(self, other: Ratio) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCheckpoint {
    pub x: u64,
    pub count_in_set: u64,
    pub primes: u64,
    pub ratio: Ratio,
}

/// Counting ratios at geometrically spaced cutoffs, with the upper-density
/// proxy taken as the max ratio over the trailing window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub set_label: String,
    pub checkpoints: Vec<DensityCheckpoint>,
    pub upper_density_estimate: Ratio,
    pub tail_window: usize,
}

impl DensityReport {
    /// Two-column CSV (X, ratio) for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("X,ratio\n");
        for c in &self.checkpoints {
            out.push_str(&format!("{},{}\n", c.x, c.ratio.as_f64()));
        }
        out
    }
}

pub const DEFAULT_CHECKPOINTS: usize = 8;
pub const DEFAULT_TAIL_WINDOW: usize = 3;

/// Build a density report for a set of primes within [2, x].
///
/// Checkpoints sit at x/2^{c-1}, ..., x/2, x; leading checkpoints that
/// contain no primes at all are dropped. The estimate is max over the last
/// `tail_window` surviving checkpoints, compared exactly.
pub fn upper_density(
    label: &str,
    primes_in_set: &[u64],
    x: u64,
    checkpoints: usize,
    tail_window: usize,
) -> Result<DensityReport> {
    if checkpoints < 2 {
        return Err(Error::BadConfig(format!(
            "density estimation needs at least 2 checkpoints, got {checkpoints}"
        )));
    }
    if tail_window == 0 {
        return Err(Error::BadConfig("tail window must be positive".into()));
    }
    if x < 2 {
        return Err(Error::Range {
            what: "density checkpoint range (no primes below)",
            requested: x,
            available: 2,
        });
    }
    let mut set: Vec<u64> = primes_in_set.to_vec();
    set.sort_unstable();
    set.dedup();
    debug_assert!(set.iter().all(|&p| is_prime(p)), "density set must hold primes");

    let all = primes_up_to(x);
    let mut points = Vec::with_capacity(checkpoints);
    for i in (0..checkpoints).rev() {
        let xi = x >> i;
        let primes = all.partition_point(|&p| p <= xi) as u64;
        if primes == 0 {
            continue;
        }
        let count = set.partition_point(|&p| p <= xi) as u64;
        points.push(DensityCheckpoint {
            x: xi,
            count_in_set: count,
            primes,
            ratio: Ratio { num: count, den: primes },
        });
    }
    debug_assert!(!points.is_empty(), "x >= 2 guarantees a populated final checkpoint");

    let window = tail_window.min(points.len());
    let estimate = points[points.len() - window..]
        .iter()
        .map(|c| c.ratio)
        .max_by(|a, b| a.cross(*b))
        .expect("window is nonempty");

    Ok(DensityReport {
        set_label: label.to_string(),
        checkpoints: points,
        upper_density_estimate: estimate,
        tail_window: window,
    })
}

/// Outcome of the parity / twist-power inference on a coincidence set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityStatus {
    /// Even weight difference and every witness satisfied the exact ratio.
    Consistent,
    /// Odd weight difference, or some witness violated the ratio.
    Inconsistent,
    /// No witnesses survive the nonvanishing refinement; nothing to test.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityFinding {
    pub status: ParityStatus,
    /// (k1 - k2)/2, present exactly when status is Consistent.
    pub r: Option<i64>,
    /// Primes where the exact ratio test was applied.
    pub witness_primes: Vec<u64>,
}

impl ParityFinding {
    pub fn is_consistent(&self) -> bool {
        self.status == ParityStatus::Consistent
    }
}

/// Refine S to primes where both traces are nonzero, then test
/// a_p(f1) = a_p(f2) p^r exactly at each survivor, r = (k1 - k2)/2.
pub fn infer_parity_and_r(f1: &NewformRecord, f2: &NewformRecord, s: &[u64]) -> ParityFinding {
    let refined: Vec<u64> = s
        .iter()
        .copied()
        .filter(|&p| {
            let a1 = f1.coefficient(p).map(|a| !a.is_zero()).unwrap_or(false);
            let a2 = f2.coefficient(p).map(|a| !a.is_zero()).unwrap_or(false);
            a1 && a2
        })
        .collect();
    if refined.is_empty() {
        return ParityFinding {
            status: ParityStatus::Inconclusive,
            r: None,
            witness_primes: Vec::new(),
        };
    }
    let diff = f1.weight() as i64 - f2.weight() as i64;
    if diff % 2 != 0 {
        return ParityFinding {
            status: ParityStatus::Inconsistent,
            r: None,
            witness_primes: refined,
        };
    }
    let r = diff / 2;
    let all_pass = refined.iter().all(|&p| {
        let a1 = f1.coefficient(p).expect("refined in range");
        let a2 = f2.coefficient(p).expect("refined in range");
        let power = BigInt::from(p).pow(r.unsigned_abs() as u32);
        if r >= 0 {
            *a1 == a2 * &power
        } else {
            a1 * &power == *a2
        }
    });
    if all_pass {
        ParityFinding {
            status: ParityStatus::Consistent,
            r: Some(r),
            witness_primes: refined,
        }
    } else {
        ParityFinding {
            status: ParityStatus::Inconsistent,
            r: None,
            witness_primes: refined,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::{
        corpus, find_form, multiplicative_closure, synthesize_tate_twist, NewformRecord,
    };
    use num_rational::BigRational;

    fn delta() -> &'static NewformRecord {
        find_form(corpus(), "delta").unwrap()
    }

    /// Twist of a record by the quadratic character mod 4, built directly
    /// from congruence conditions rather than the twist module: an oracle.
    fn mod4_twist(f: &NewformRecord, bound: u64) -> NewformRecord {
        let closed = multiplicative_closure(bound, f.weight(), f.level() * 16, |p| {
            let sign = match p % 4 {
                1 => 1i64,
                3 => -1,
                _ => 0,
            };
            BigRational::from(BigInt::from(sign)) * BigRational::from(f.coefficient(p).unwrap().clone())
        });
        NewformRecord::new(
            format!("{}.x4", f.id()),
            f.weight(),
            f.level() * 16,
            f.is_cm(),
            true,
            None,
            closed.into_iter().map(|c| c.to_integer()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn normalized_display_values() {
        let d = delta();
        let v = normalized_ap(d, 2, WeightConvention::Motivic).unwrap();
        assert!((v - (-0.530330)).abs() < 1e-6);
        let stmt = normalized_ap(d, 2, WeightConvention::Statement).unwrap();
        assert!((stmt - (-0.375)).abs() < 1e-12);

        let eleven = find_form(corpus(), "11.2").unwrap();
        let w = normalized_ap(eleven, 5, WeightConvention::Motivic).unwrap();
        assert!((w - 0.447214).abs() < 1e-6);

        let cm = find_form(corpus(), "27.2cm").unwrap();
        assert_eq!(normalized_ap(cm, 2, WeightConvention::Motivic).unwrap(), 0.0);
    }

    #[test]
    fn normalized_rejects_bad_inputs() {
        let eleven = find_form(corpus(), "11.2").unwrap();
        assert!(normalized_ap(eleven, 11, WeightConvention::Motivic).is_err());
        assert!(normalized_ap(eleven, 6, WeightConvention::Motivic).is_err());
    }

    #[test]
    fn coincidence_is_reflexive() {
        let d = delta();
        let s = coincidence_set(d, d, 100).unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!(s, primes_up_to(100));
    }

    #[test]
    fn coincidence_with_mod4_twist_is_a_congruence_class() {
        let d = delta();
        let tw = mod4_twist(d, 200);
        let s = coincidence_set(d, &tw, 200).unwrap();
        let expected: Vec<u64> = primes_up_to(200)
            .into_iter()
            .filter(|&p| p % 4 == 1)
            .collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn coincidence_is_symmetric() {
        let d = delta();
        let e = find_form(corpus(), "1.16").unwrap();
        assert_eq!(
            coincidence_set(d, e, 2000).unwrap(),
            coincidence_set(e, d, 2000).unwrap()
        );
    }

    #[test]
    fn coincidence_range_error() {
        let d = delta();
        assert!(matches!(
            coincidence_set(d, d, d.bound() + 1),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn odd_weight_gap_empties_the_set() {
        let d = delta();
        let w13 = NewformRecord::new(
            "w13",
            13,
            1,
            false,
            true,
            None,
            d.coefficients().to_vec(),
        )
        .unwrap();
        let s = coincidence_set(d, &w13, d.bound()).unwrap();
        assert!(s.is_empty());
        let finding = infer_parity_and_r(d, &w13, &s);
        assert_eq!(finding.status, ParityStatus::Inconclusive);
        assert_eq!(finding.r, None);
    }

    #[test]
    fn vanishing_sets() {
        let d = delta();
        assert!(vanishing_set(d, d.bound()).unwrap().is_empty());

        let cm = find_form(corpus(), "27.2cm").unwrap();
        assert_eq!(vanishing_set(cm, 20).unwrap(), vec![2, 5, 11, 17]);

        let cm32 = find_form(corpus(), "32.2cm").unwrap();
        let vs = vanishing_set(cm32, cm32.bound()).unwrap();
        assert!(vs.iter().all(|&p| p % 4 == 3));
    }

    #[test]
    fn density_extremes() {
        let all = primes_up_to(1000);
        let full = upper_density("all", &all, 1000, 4, 2).unwrap();
        assert_eq!(full.upper_density_estimate, Ratio { num: 168, den: 168 });

        let empty = upper_density("none", &[], 1000, 4, 2).unwrap();
        assert_eq!(empty.upper_density_estimate.num, 0);
    }

    #[test]
    fn density_of_congruence_class() {
        let class: Vec<u64> = primes_up_to(100_000)
            .into_iter()
            .filter(|&p| p % 3 == 2)
            .collect();
        let report = upper_density("p = 2 mod 3", &class, 100_000, DEFAULT_CHECKPOINTS, DEFAULT_TAIL_WINDOW).unwrap();
        let est = report.upper_density_estimate.as_f64();
        assert!((est - 0.5).abs() < 0.02, "estimate {est}");
        for pair in report.checkpoints.windows(2) {
            assert!(pair[0].count_in_set <= pair[1].count_in_set);
            assert!(pair[0].primes <= pair[1].primes);
        }
        for c in &report.checkpoints {
            assert!(c.count_in_set <= c.primes);
        }
    }

    #[test]
    fn density_input_validation() {
        assert!(upper_density("x", &[], 1000, 1, 3).is_err());
        assert!(upper_density("x", &[], 1000, 4, 0).is_err());
        assert!(upper_density("x", &[], 1, 4, 3).is_err());
    }

    #[test]
    fn density_report_serializes() {
        let report = upper_density("demo", &[2, 3, 5], 100, 3, 2).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: DensityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        let csv = report.to_csv();
        assert!(csv.starts_with("X,ratio\n"));
        assert_eq!(csv.lines().count(), report.checkpoints.len() + 1);
    }

    #[test]
    fn parity_identity_and_tate_cases() {
        let d = delta();
        let s = coincidence_set(d, d, 100).unwrap();
        let finding = infer_parity_and_r(d, d, &s);
        assert_eq!(finding.status, ParityStatus::Consistent);
        assert_eq!(finding.r, Some(0));
        assert!(!finding.witness_primes.is_empty());

        let up = synthesize_tate_twist(d, 1).unwrap();
        let witnesses: Vec<u64> = primes_up_to(31);
        let finding = infer_parity_and_r(&up, d, &witnesses);
        assert_eq!(finding.status, ParityStatus::Consistent);
        assert_eq!(finding.r, Some(1));

        let down = infer_parity_and_r(d, &up, &witnesses);
        assert_eq!(down.status, ParityStatus::Consistent);
        assert_eq!(down.r, Some(-1));
    }

    #[test]
    fn parity_detects_violation() {
        let d = delta();
        let e = find_form(corpus(), "1.16").unwrap();
        // Arbitrary nonvanishing witnesses: the ratio a_p(f1)/a_p(f2) is not
        // p^{-2}, so the finding must be inconsistent.
        let finding = infer_parity_and_r(d, e, &[2, 3, 5]);
        assert_eq!(finding.status, ParityStatus::Inconsistent);
        assert_eq!(finding.r, None);
        assert_eq!(finding.witness_primes, vec![2, 3, 5]);
    }
}
