//! Euler factors, partial L-functions, completed-Lambda consistency checks,
//! and the zero-lattice obstruction argument.
//!
//! Everything here is desk-scale numerics on top of the exact coefficient
//! data: finite Euler products in the absolute-convergence zone, smoothed
//! Dirichlet sums for the functional-equation test, and a structural
//! comparison of zero sets that rules out every positive twist power. No
//! analytic continuation is attempted; the point of the obstruction is that
//! none is needed.

mod gamma;

pub use gamma::{complex_gamma, gamma_ratio_check, GammaRatioCheck};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::modforms::{synthesize_tate_twist, NewformRecord};
use crate::primes::{is_prime, primes_up_to};

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// p^{-s} as a double-precision complex number.
fn prime_power_neg(p: u64, s: Complex64) -> Complex64 {
    (-s * (p as f64).ln()).exp()
}

/// One local factor of the L-series: (1 - lin p^{-s} + quad p^{-2s})^{-1},
/// degree 2 at good primes (quad = p^{k-1}), degree 1 at bad ones (quad = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    p: u64,
    degree: u8,
    lin: BigInt,
    quad: BigInt,
}

impl EulerFactor {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn lin(&self) -> &BigInt {
        &self.lin
    }

    pub fn quad(&self) -> &BigInt {
        &self.quad
    }

    /// The factor value at s, i.e. the reciprocal of the local polynomial.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let x = prime_power_neg(self.p, s);
        let poly = Complex64::one() - to_f64(&self.lin) * x + to_f64(&self.quad) * x * x;
        poly.inv()
    }

    /// Reciprocal roots alpha of the local polynomial, so that it factors
    /// as prod (1 - alpha p^{-s}). Zero roots are dropped: a vanishing a_p
    /// at a bad prime means the factor is constant.
    pub fn reciprocal_roots(&self) -> Vec<Complex64> {
        if self.degree == 1 {
            let a = to_f64(&self.lin);
            if a == 0.0 {
                return Vec::new();
            }
            return vec![Complex64::new(a, 0.0)];
        }
        let a = to_f64(&self.lin);
        let q = to_f64(&self.quad);
        let disc = Complex64::new(a * a - 4.0 * q, 0.0).sqrt();
        let r1 = (Complex64::new(a, 0.0) + disc) / 2.0;
        let r2 = (Complex64::new(a, 0.0) - disc) / 2.0;
        vec![r1, r2]
    }
}

/// Local factor of f at p: degree 2 with quad = p^{k-1} when p is good,
/// degree 1 otherwise.
pub fn euler_factor(f: &NewformRecord, p: u64) -> Result<EulerFactor> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let lin = f.coefficient(p)?.clone();
    if f.eps(p) == 0 {
        Ok(EulerFactor {
            p,
            degree: 1,
            lin,
            quad: BigInt::zero(),
        })
    } else {
        Ok(EulerFactor {
            p,
            degree: 2,
            lin,
            quad: BigInt::from(p).pow(f.weight() - 1),
        })
    }
}

/// Finite partial L-product over primes p <= cutoff with p not dividing m,
/// every factor taken in the generic degree-2 shape (callers normally pass
/// m divisible by the level, which is what makes that shape correct).
///
/// Refuses evaluation outside the absolute-convergence zone
/// Re(s) > (k+1)/2; there the truncated product would silently drift.
pub fn partial_l(f: &NewformRecord, m: u64, s: Complex64, cutoff: u64) -> Result<Complex64> {
    let threshold = (f.weight() as f64 + 1.0) / 2.0;
    if s.re <= threshold {
        return Err(Error::ConvergenceZone {
            s: s.to_string(),
            threshold,
        });
    }
    if cutoff > f.bound() {
        return Err(Error::Range {
            what: "partial L cutoff",
            requested: cutoff,
            available: f.bound(),
        });
    }
    let km1 = f.weight() - 1;
    let mut acc = Complex64::one();
    for p in primes_up_to(cutoff) {
        if m.is_multiple_of(p) {
            continue;
        }
        let a = to_f64(f.coefficient(p)?);
        let x = prime_power_neg(p, s);
        let quad = (p as f64).powi(km1 as i32);
        let poly = Complex64::one() - a * x + quad * x * x;
        acc /= poly;
    }
    Ok(acc)
}

/// One zero of 1 - alpha p^{-s}, with the defect of the defining equation
/// re-evaluated at the point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub n: i64,
    pub s: Complex64,
    pub residual: f64,
}

/// The vertical lattice of zeros of 1 - alpha p^{-s}:
/// s_n = (ln alpha + 2 pi i n) / ln p, principal branch.
pub fn euler_zero_lattice(
    alpha: Complex64,
    p: u64,
    n_range: RangeInclusive<i64>,
) -> Result<Vec<LatticePoint>> {
    if alpha == Complex64::zero() {
        return Err(Error::Domain(
            "alpha = 0: the factor is constant and has no zeros".into(),
        ));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let log_p = (p as f64).ln();
    let log_alpha = alpha.ln();
    Ok(n_range
        .map(|n| {
            let s = (log_alpha + Complex64::new(0.0, 2.0 * std::f64::consts::PI * n as f64))
                / log_p;
            let residual = (Complex64::one() - alpha * prime_power_neg(p, s)).norm();
            LatticePoint { n, s, residual }
        })
        .collect())
}

/// Left side of the twist-power identity: prod_{j=1}^{r} (s - j) over
/// prod_{j=1}^{r} (s - (k1 - j)). Empty products for r = 0.
pub fn obstruction_lhs(k1: u32, r: u32, s: Complex64) -> Complex64 {
    let mut num = Complex64::one();
    let mut den = Complex64::one();
    for j in 1..=r {
        num *= s - j as f64;
        den *= s - (k1 - j) as f64;
    }
    num / den
}

/// One normalized linear term (1 - alpha p^{-s}) appearing on the product
/// side, with a sample of its zero lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeTerm {
    pub p: u64,
    pub alpha: Complex64,
    pub origin: String,
    pub points: Vec<LatticePoint>,
}

/// A lattice zero of the product side together with the size of the
/// rational side at the same point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub point: LatticePoint,
    pub lhs_abs: f64,
    pub lhs_nonzero: bool,
}

/// The concrete nonzero term whose infinite zero lattice contradicts the
/// finitely many zeros of the rational side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcedTerm {
    pub p: u64,
    pub alpha: Complex64,
    pub witnesses: Vec<ObstructionWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub k1: u32,
    pub k2: u32,
    pub r: u32,
    pub lhs_zeros: Vec<u32>,
    pub lhs_poles: Vec<u32>,
    pub no_cancellation: bool,
    pub no_cancellation_inequality: String,
    pub lattice_terms: Vec<LatticeTerm>,
    pub forced_term: Option<ForcedTerm>,
    pub r_admissible: bool,
}

fn normalized_terms(pair: &(EulerFactor, EulerFactor), r: u32, k1: u32, k2: u32) -> Vec<LatticeTerm> {
    let (e1, e2) = pair;
    let p = e1.p();
    let pf = p as f64;
    let mut out = Vec::new();
    let mut push = |alpha: Complex64, origin: &str| {
        if alpha.norm() > 0.0 {
            let points = euler_zero_lattice(alpha, p, -1..=1).expect("alpha nonzero, p prime");
            out.push(LatticeTerm {
                p,
                alpha,
                origin: origin.to_string(),
                points,
            });
        }
    };
    for root in e1.reciprocal_roots() {
        push(root, "factor of f1 at s");
        // At k1 - s the term reads 1 - root p^{s - k1}; normalizing to the
        // p^{-s} shape swaps the root into p^{k1} / root.
        push(Complex64::new(pf.powi(k1 as i32), 0.0) / root, "factor of f1 at k1 - s");
    }
    for root in e2.reciprocal_roots() {
        push(root * pf.powi(r as i32), "factor of f2 at s - r");
        push(
            Complex64::new(pf.powi((k2 + r) as i32), 0.0) / root,
            "factor of f2 at k2 + r - s",
        );
    }
    out
}

/// Zero-set comparison for the hypothetical identity relating weights
/// k1 = k2 + 2r: the rational side has exactly the zeros {1..r} and poles
/// {k1-1..k1-r}, disjoint because k1 - 2r = k2 > 0, while any matching
/// product side would carry a whole vertical lattice of zeros. The report
/// exhibits lattice points where the rational side is numerically far from
/// zero; the verdict is that only r = 0 survives.
pub fn tate_twist_obstruction(
    k1: u32,
    k2: u32,
    r: u32,
    bad_euler_data: &[(EulerFactor, EulerFactor)],
) -> Result<ObstructionReport> {
    if k2 == 0 {
        return Err(Error::Domain("k2 must be positive".into()));
    }
    if k1 != k2 + 2 * r {
        return Err(Error::Domain(format!(
            "weights must satisfy k1 = k2 + 2r; got k1 = {k1}, k2 + 2r = {}",
            k2 + 2 * r
        )));
    }
    for (e1, e2) in bad_euler_data {
        if e1.p() != e2.p() {
            return Err(Error::Domain(format!(
                "euler factor pair mixes primes {} and {}",
                e1.p(),
                e2.p()
            )));
        }
    }

    let lhs_zeros: Vec<u32> = (1..=r).collect();
    let lhs_poles: Vec<u32> = (1..=r).map(|j| k1 - j).collect();
    let no_cancellation = lhs_zeros.iter().all(|z| !lhs_poles.contains(z));
    let no_cancellation_inequality =
        format!("k1 - 2r = {} - {} = {} > 0", k1, 2 * r, k2);

    let lattice_terms: Vec<LatticeTerm> = bad_euler_data
        .iter()
        .flat_map(|pair| normalized_terms(pair, r, k1, k2))
        .collect();

    let forced_term = if r > 0 {
        // The product side must vanish somewhere, forcing a nonzero term
        // 1 - alpha p^{-s}. Any nonzero alpha exhibits the contradiction;
        // alpha = p at the smallest supplied prime (auxiliary prime 2 when
        // no local data is given) keeps the lattice on the line Re(s) = 1.
        let p = bad_euler_data
            .iter()
            .map(|(e1, _)| e1.p())
            .min()
            .unwrap_or(2);
        let alpha = Complex64::new(p as f64, 0.0);
        let witnesses = euler_zero_lattice(alpha, p, -2..=2)?
            .into_iter()
            .map(|point| {
                let lhs_abs = obstruction_lhs(k1, r, point.s).norm();
                ObstructionWitness {
                    point,
                    lhs_abs,
                    lhs_nonzero: lhs_abs > 1e-6,
                }
            })
            .collect();
        Some(ForcedTerm {
            p,
            alpha,
            witnesses,
        })
    } else {
        None
    };

    Ok(ObstructionReport {
        k1,
        k2,
        r,
        lhs_zeros,
        lhs_poles,
        no_cancellation,
        no_cancellation_inequality,
        lattice_terms,
        forced_term,
        r_admissible: r == 0,
    })
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            w,
            "obstruction check: k1 = {}, k2 = {}, r = {}",
            self.k1, self.k2, self.r
        )?;
        writeln!(w, "  rational-side zeros: {:?}", self.lhs_zeros)?;
        writeln!(w, "  rational-side poles: {:?}", self.lhs_poles)?;
        writeln!(
            w,
            "  no cancellation: {} ({})",
            self.no_cancellation, self.no_cancellation_inequality
        )?;
        for term in &self.lattice_terms {
            writeln!(
                w,
                "  product-side term at p = {}, alpha = {:.6} ({})",
                term.p, term.alpha, term.origin
            )?;
            for pt in &term.points {
                writeln!(
                    w,
                    "    n = {:>3}: s = {:.6}, residual = {:.3e}",
                    pt.n, pt.s, pt.residual
                )?;
            }
        }
        if let Some(forced) = &self.forced_term {
            writeln!(
                w,
                "  forced term 1 - {:.1} * {}^(-s), zero lattice vs rational side:",
                forced.alpha.re, forced.p
            )?;
            for wit in &forced.witnesses {
                writeln!(
                    w,
                    "    n = {:>3}: s = {:.6}, residual = {:.3e}, |rational side| = {:.3e}{}",
                    wit.point.n,
                    wit.point.s,
                    wit.point.residual,
                    wit.lhs_abs,
                    if wit.lhs_nonzero { " (nonzero)" } else { "" }
                )?;
            }
        }
        write!(w, "  verdict: r_admissible = {}", self.r_admissible)
    }
}

/// Relative defect of the shift identity L_M(twist, s) = L_M(f, s - r),
/// both sides as finite products over p <= cutoff.
pub fn l_shift_identity_check(
    f: &NewformRecord,
    r: u32,
    m: u64,
    s: Complex64,
    cutoff: u64,
) -> Result<f64> {
    let twisted = synthesize_tate_twist(f, r as i32)?;
    let lhs = partial_l(&twisted, m, s, cutoff)?;
    let rhs = partial_l(f, m, s - r as f64, cutoff)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Smoothed completed-Lambda evaluation:
/// N^{s/2} (2 pi)^{-s} Gamma(s) * sum a_n n^{-s} exp(-(n/T)^2), T = terms/4.
///
/// For cusp forms the Gaussian-smoothed sum converges to the L-value well
/// beyond the abscissa (the smoothing kernel's Mellin transform decays
/// faster than any polynomial and the series has no pole to pick up), but
/// the budget is only validated on the band |Re(s) - k/2| <= 1,
/// |Im(s)| <= 2; anything outside is refused rather than extrapolated.
pub fn completed_lambda(f: &NewformRecord, s: Complex64, terms: u64) -> Result<Complex64> {
    let k = f.weight() as f64;
    if (s.re - k / 2.0).abs() > 1.0 + 1e-12 || s.im.abs() > 2.0 + 1e-12 {
        return Err(Error::OutsideValidatedRegion(format!(
            "s = {s} is outside |Re(s) - {}| <= 1, |Im(s)| <= 2",
            k / 2.0
        )));
    }
    if terms < 16 || terms > f.bound() {
        return Err(Error::Range {
            what: "smoothed sum terms",
            requested: terms,
            available: f.bound(),
        });
    }
    let t = terms as f64 / 4.0;
    let mut dirichlet = Complex64::zero();
    for n in 1..=terms {
        let a = to_f64(f.coefficient(n)?);
        if a == 0.0 {
            continue;
        }
        let nf = n as f64;
        let damp = (-(nf / t) * (nf / t)).exp();
        dirichlet += a * damp * (-s * nf.ln()).exp();
    }
    let arch = ((s / 2.0) * (f.level() as f64).ln()).exp()
        * (-s * (2.0 * std::f64::consts::PI).ln()).exp();
    Ok(arch * complex_gamma(s)? * dirichlet)
}

/// |Lambda(s) - lambda Lambda(k-s)| / |Lambda(s)| with the stored sign.
pub fn functional_equation_residual(f: &NewformRecord, s: Complex64, terms: u64) -> Result<f64> {
    let sign = f
        .fe_sign()
        .ok_or_else(|| Error::MissingSign(f.id().to_string()))? as f64;
    let here = completed_lambda(f, s, terms)?;
    let reflected = completed_lambda(f, Complex64::new(f.weight() as f64, 0.0) - s, terms)?;
    Ok((here - sign * reflected).norm() / here.norm())
}

/// Re-derive the functional-equation sign numerically from the ratio
/// Lambda(s0) / Lambda(k - s0) at s0 = k/2 + 1/2. Used once to populate
/// the stored signs and kept as a cross-check.
pub fn calibrate_sign(f: &NewformRecord, terms: u64) -> Result<i8> {
    let k = f.weight() as f64;
    let s0 = Complex64::new(k / 2.0 + 0.5, 0.0);
    let here = completed_lambda(f, s0, terms)?;
    let reflected = completed_lambda(f, Complex64::new(k, 0.0) - s0, terms)?;
    let ratio = here / reflected;
    if (ratio - Complex64::one()).norm() < 1e-2 {
        Ok(1)
    } else if (ratio + Complex64::one()).norm() < 1e-2 {
        Ok(-1)
    } else {
        Err(Error::Domain(format!(
            "sign calibration for {} did not settle near +1 or -1 (ratio {ratio})",
            f.id()
        )))
    }
}
