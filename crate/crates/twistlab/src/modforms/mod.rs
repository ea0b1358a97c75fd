//! Eigenform records, the level-1 basis machinery, and Hecke operators.
//!
//! Two independent construction routes feed the corpus: level-1 forms come
//! from exact row reduction on Eisenstein monomials, small-level weight-2
//! newforms from eta products. The routes overlap on the weight-12 form,
//! which keeps them honest against each other.

mod corpus;
mod persist;

pub use corpus::{corpus, corpus_with_bound, find_form, DEFAULT_COEFFICIENT_BOUND};
pub use persist::{read_record, read_record_file, write_record, write_record_file};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::{distinct_prime_factors, is_prime, smallest_prime_factors};
use crate::series::{eisenstein, QSeries};

/// Character through which the diamond operators act. The built-in corpus is
/// all trivial-nebentypus; the tag keeps the hypothesis explicit on each
/// record instead of implicit in the arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nebentypus {
    Trivial,
}

/// Field generated by the coefficients. Everything here is rational, which
/// is what makes exact comparison arithmetic possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientField {
    Rational,
}

/// A normalized eigenform (or synthetic twist of one) with exact integer
/// coefficients a_1..a_bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformRecord {
    id: String,
    weight: u32,
    level: u64,
    nebentypus: Nebentypus,
    cm: bool,
    coefficient_field: CoefficientField,
    synthetic: bool,
    fe_sign: Option<i8>,
    coeffs: Vec<BigInt>,
}

impl NewformRecord {
    /// Invariants enforced here: a_1 = 1, nonempty coefficients, weight >= 2,
    /// level >= 1, id free of whitespace (it heads a space-separated file).
    pub fn new(
        id: impl Into<String>,
        weight: u32,
        level: u64,
        cm: bool,
        synthetic: bool,
        fe_sign: Option<i8>,
        coeffs: Vec<BigInt>,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::Record(format!("bad form id {id:?}")));
        }
        if weight < 2 {
            return Err(Error::Record(format!("weight {weight} below 2")));
        }
        if level == 0 {
            return Err(Error::Record("level must be positive".into()));
        }
        if coeffs.is_empty() || !coeffs[0].is_one() {
            return Err(Error::Record(format!(
                "record {id} is not normalized: a_1 must exist and equal 1"
            )));
        }
        if let Some(s) = fe_sign {
            if s != 1 && s != -1 {
                return Err(Error::Record(format!("functional equation sign {s} not in {{-1, 1}}")));
            }
        }
        Ok(NewformRecord {
            id,
            weight,
            level,
            nebentypus: Nebentypus::Trivial,
            cm,
            coefficient_field: CoefficientField::Rational,
            synthetic,
            fe_sign,
            coeffs,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn nebentypus(&self) -> Nebentypus {
        self.nebentypus
    }

    pub fn coefficient_field(&self) -> CoefficientField {
        self.coefficient_field
    }

    pub fn is_cm(&self) -> bool {
        self.cm
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    /// Sign of the completed-L functional equation, when known for this form.
    pub fn fe_sign(&self) -> Option<i8> {
        self.fe_sign
    }

    /// Attach or clear the functional-equation sign. The interchange format
    /// does not transport signs, so callers that rehydrate a built-in form
    /// from disk restore the sign from the corpus table with this.
    pub fn set_fe_sign(&mut self, sign: Option<i8>) {
        self.fe_sign = sign;
    }

    /// Largest n with a_n stored.
    pub fn bound(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// a_n for 1 <= n <= bound.
    pub fn coefficient(&self, n: u64) -> Result<&BigInt> {
        if n == 0 || n > self.bound() {
            return Err(Error::Range {
                what: "coefficient index",
                requested: n,
                available: self.bound(),
            });
        }
        Ok(&self.coeffs[(n - 1) as usize])
    }

    /// All of a_1..a_bound.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Nebentypus value at p, already specialized to the trivial character:
    /// 0 at bad primes, 1 at good ones.
    pub fn eps(&self, p: u64) -> u32 {
        match self.nebentypus {
            Nebentypus::Trivial => u32::from(!self.level.is_multiple_of(p)),
        }
    }

    /// The q-expansion sum a_n q^n as a series of precision bound().
    pub fn q_expansion(&self) -> QSeries {
        let mut all = Vec::with_capacity(self.coeffs.len() + 1);
        all.push(BigInt::zero());
        all.extend(self.coeffs.iter().cloned());
        QSeries::from_integers(all)
    }
}

/// a_p from the record; equal to the T_p eigenvalue by construction.
pub fn eigen_ap(f: &NewformRecord, p: u64) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    f.coefficient(p).cloned()
}

/// dim M_k(SL2(Z)) by the classical weight formula; 0 for odd or negative-like k.
pub fn dim_modular_forms(k: u32) -> u64 {
    if k % 2 == 1 {
        return 0;
    }
    let q = (k / 12) as u64;
    if k % 12 == 2 {
        q
    } else {
        q + 1
    }
}

/// dim S_k(SL2(Z)): one less than the full space once Eisenstein series exist.
pub fn dim_cusp_forms(k: u32) -> u64 {
    if k < 12 || k % 2 == 1 {
        0
    } else {
        dim_modular_forms(k) - 1
    }
}

/// Nonnegative (a, b) with 4a + 6b = m, for even m >= 0, m != 2.
fn eisenstein_exponents(m: u32) -> (u32, u32) {
    debug_assert!(m.is_multiple_of(2) && m != 2);
    let b = if m.is_multiple_of(4) { 0 } else { 1 };
    ((m - 6 * b) / 4, b)
}

/// Basis f_1..f_d of level-1 weight-k cusp forms with a_j(f_i) = delta_ij
/// for i, j <= d = dim S_k. Built from Delta^j E4^a E6^b monomials followed
/// by unipotent row reduction, which keeps every coefficient an integer.
///
/// Delta is produced as (E4^3 - E6^2)/1728 here, deliberately not via the
/// eta product, so the two can be compared as independent routes.
///
/// Odd k or dim 0 gives an empty list. Panics if precision < dim S_k.
pub fn victor_miller_basis(k: u32, precision: usize) -> Vec<QSeries> {
    let d = dim_cusp_forms(k) as usize;
    if d == 0 {
        return Vec::new();
    }
    assert!(
        precision >= d,
        "victor_miller_basis needs precision >= dim S_k = {d}, got {precision}"
    );
    let e4 = eisenstein(4, precision).expect("weight 4 supported");
    let e6 = eisenstein(6, precision).expect("weight 6 supported");
    let discr = {
        let num = &e4.pow(3) - &e6.pow(2);
        num.scale(&BigRational::new(BigInt::one(), BigInt::from(1728)))
    };

    let mut rows: Vec<QSeries> = Vec::with_capacity(d);
    let mut delta_power = discr.clone();
    for j in 1..=d {
        let m = k - 12 * j as u32;
        let (a, b) = eisenstein_exponents(m);
        let mut g = delta_power.clone();
        if a > 0 {
            g = &g * &e4.pow(a);
        }
        if b > 0 {
            g = &g * &e6.pow(b);
        }
        rows.push(g);
        if j < d {
            delta_power = &delta_power * &discr;
        }
    }

    // rows[j-1] = q^j + O(q^{j+1}); clear column i from all earlier rows.
    for i in 2..=d {
        let pivot = rows[i - 1].clone();
        for row in rows.iter_mut().take(i - 1) {
            let c = row.coeff(i).clone();
            if !c.is_zero() {
                *row = &*row - &pivot.scale(&c);
            }
        }
    }
    rows
}

/// The Hecke operator T_p on q-expansions:
/// a_n(T_p f) = a_{np} + eps(p) p^{k-1} a_{n/p}, second term only when p | n.
/// Output precision floor(precision / p).
pub fn hecke_tp(f: &QSeries, weight: u32, level: u64, p: u64) -> Result<QSeries> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pu = p as usize;
    let out_prec = f.precision() / pu;
    let good = !level.is_multiple_of(p);
    let scale = BigRational::from(BigInt::from(p).pow(weight - 1));
    let coeffs = (0..=out_prec)
        .map(|n| {
            let mut c = f.coeff(n * pu).clone();
            if good && n % pu == 0 {
                c += &scale * f.coeff(n / pu);
            }
            c
        })
        .collect();
    Ok(QSeries::new(coeffs))
}

/// Sturm bound for weight k level N: coefficient agreement up to this index
/// forces equality of the forms. Degenerate inputs are clamped to 1 so the
/// bound is always usable as a loop limit.
pub fn sturm_bound(weight: u32, level: u64) -> u64 {
    // Index of Gamma_0(N): N * prod_{p | N} (1 + 1/p), an exact integer.
    let mut index = level as u128;
    for p in distinct_prime_factors(level) {
        index = index / p as u128 * (p as u128 + 1);
    }
    let raw = (weight as u128 * index / 12) as u64;
    raw.max(1)
}

/// Multiplicative closure: the unique sequence a_1..a_bound with a_1 = 1,
/// a_{mn} = a_m a_n for coprime m, n, prescribed values at primes, and the
/// weight-k Hecke recursion a_{p^{j+1}} = a_p a_{p^j} - eps(p) p^{k-1} a_{p^{j-1}}
/// at prime powers (eps trivial away from the level).
pub fn multiplicative_closure(
    bound: u64,
    weight: u32,
    level: u64,
    ap: impl Fn(u64) -> BigRational,
) -> Vec<BigRational> {
    let n = bound as usize;
    let spf = smallest_prime_factors(n);
    // values[i] holds a_{i+1}.
    let mut values = vec![BigRational::zero(); n];
    if n >= 1 {
        values[0] = BigRational::one();
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut pe = p;
        while pe * p <= m && m % (pe * p) == 0 {
            pe *= p;
        }
        let cof = m / pe;
        let v = if cof > 1 {
            // coprime split m = p^e * cof
            &values[pe - 1] * &values[cof - 1]
        } else if pe == p {
            ap(p as u64)
        } else {
            // prime power recursion
            let prev = &values[pe / p - 1];
            let mut v = &values[p - 1] * prev;
            if !level.is_multiple_of(p as u64) {
                let pk = BigRational::from(BigInt::from(p as u64).pow(weight - 1));
                v -= &pk * &values[pe / (p * p) - 1];
            }
            v
        };
        values[m - 1] = v;
    }
    values
}

/// Coefficient data of f twisted by the r-th power of the cyclotomic action:
/// a_p goes to p^r a_p, the weight to k + 2r. The closure works out to
/// a_n -> n^r a_n exactly, so the result is synthetic but fully multiplicative.
///
/// Errors when the target weight drops below 2 or (for negative r) when some
/// coefficient leaves the integers.
pub fn synthesize_tate_twist(f: &NewformRecord, r: i32) -> Result<NewformRecord> {
    let target = f.weight() as i64 + 2 * r as i64;
    if target < 2 {
        return Err(Error::InvalidTwist(format!(
            "twisting weight {} by omega^{r} gives weight {target}, below 2",
            f.weight()
        )));
    }
    let new_weight = target as u32;
    let scaled = multiplicative_closure(f.bound(), new_weight, f.level(), |p| {
        let base = BigRational::from(f.coefficient(p).expect("p <= bound").clone());
        &base * &rational_power(p, r)
    });
    let mut coeffs = Vec::with_capacity(scaled.len());
    for (i, c) in scaled.iter().enumerate() {
        if !c.is_integer() {
            return Err(Error::InvalidTwist(format!(
                "omega^{r} twist of {} leaves the integers at a_{} = {c}",
                f.id(),
                i + 1
            )));
        }
        coeffs.push(c.to_integer());
    }
    NewformRecord::new(
        format!("{}.tate{r}", f.id()),
        new_weight,
        f.level(),
        f.is_cm(),
        true,
        None,
        coeffs,
    )
}

fn rational_power(p: u64, r: i32) -> BigRational {
    let mag = BigInt::from(p).pow(r.unsigned_abs());
    if r >= 0 {
        BigRational::from(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eta_quotient;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from(int(x))
    }

    #[test]
    fn sturm_bound_examples() {
        assert_eq!(sturm_bound(12, 1), 1);
        assert_eq!(sturm_bound(2, 11), 2);
        assert_eq!(sturm_bound(2, 1), 1); // clamped degenerate case
        assert_eq!(sturm_bound(2, 27), 6);
        assert_eq!(sturm_bound(4, 12), 8);
    }

    #[test]
    fn dimension_formulas() {
        let expected = [
            (0, 1, 0),
            (2, 0, 0),
            (4, 1, 0),
            (10, 1, 0),
            (12, 2, 1),
            (14, 1, 0),
            (16, 2, 1),
            (24, 3, 2),
            (26, 2, 1),
            (36, 4, 3),
            (38, 3, 2),
        ];
        for (k, m, s) in expected {
            assert_eq!(dim_modular_forms(k), m, "M_{k}");
            assert_eq!(dim_cusp_forms(k), s, "S_{k}");
        }
        assert_eq!(dim_modular_forms(13), 0);
    }

    #[test]
    fn basis_weight_12_is_delta() {
        let basis = victor_miller_basis(12, 5);
        assert_eq!(basis.len(), 1);
        let want = [0i64, 1, -24, 252, -1472, 4830];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(basis[0].coeff(n), &rat(*w), "n = {n}");
        }
    }

    #[test]
    fn basis_empty_below_twelve() {
        assert!(victor_miller_basis(4, 5).is_empty());
        assert!(victor_miller_basis(11, 5).is_empty());
        assert!(victor_miller_basis(14, 5).is_empty());
    }

    #[test]
    fn basis_is_echelon_normalized() {
        for k in [24u32, 28, 36, 40] {
            let d = dim_cusp_forms(k) as usize;
            let basis = victor_miller_basis(k, d + 6);
            assert_eq!(basis.len(), d, "k = {k}");
            for (i, f) in basis.iter().enumerate() {
                assert!(f.coeff(0).is_zero());
                for j in 1..=d {
                    let want = if j == i + 1 { rat(1) } else { rat(0) };
                    assert_eq!(f.coeff(j), &want, "k = {k}, form {i}, coeff {j}");
                }
            }
        }
    }

    #[test]
    fn basis_dimension_matches_formula_through_40() {
        for k in 1..=40u32 {
            let d = dim_cusp_forms(k) as usize;
            assert_eq!(victor_miller_basis(k, d.max(1) + 4).len(), d, "k = {k}");
        }
    }

    #[test]
    fn basis_delta_agrees_with_eta_route() {
        let vm = &victor_miller_basis(12, 50)[0];
        let eta = eta_quotient(&[(1, 24)], 50).expect("eta route");
        assert_eq!(vm, &eta);
    }

    #[test]
    fn hecke_t2_on_delta() {
        let delta = eta_quotient(&[(1, 24)], 40).expect("delta");
        let t2 = hecke_tp(&delta, 12, 1, 2).expect("prime");
        let scaled = delta.truncate(t2.precision()).scale(&rat(-24));
        assert_eq!(t2, scaled);
    }

    #[test]
    fn hecke_t3_on_level_eleven() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 60).expect("11.2");
        let t3 = hecke_tp(&f, 2, 11, 3).expect("prime");
        let scaled = f.truncate(t3.precision()).scale(&rat(-1));
        assert_eq!(t3, scaled);
    }

    #[test]
    fn hecke_on_zero_series_is_zero() {
        let z = QSeries::zero(30);
        let t2 = hecke_tp(&z, 12, 1, 2).expect("prime");
        assert!(t2.is_zero());
        assert_eq!(t2.precision(), 15);
    }

    #[test]
    fn hecke_rejects_composite_index() {
        let z = QSeries::zero(10);
        assert!(matches!(hecke_tp(&z, 12, 1, 6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn hecke_bad_prime_drops_lower_term() {
        // At p | N the formula is a_n(T_p f) = a_{np} alone. Feed a series
        // where the difference is visible.
        let f = QSeries::from_integers((0..=20).map(int).collect());
        let tp = hecke_tp(&f, 2, 10, 5).expect("prime");
        for n in 0..=4usize {
            assert_eq!(tp.coeff(n), &rat(5 * n as i64), "n = {n}");
        }
    }

    #[test]
    fn record_validation() {
        assert!(NewformRecord::new("x", 12, 1, false, false, None, vec![int(1)]).is_ok());
        assert!(NewformRecord::new("x", 12, 1, false, false, None, vec![int(2)]).is_err());
        assert!(NewformRecord::new("x", 12, 1, false, false, None, vec![]).is_err());
        assert!(NewformRecord::new("bad id", 12, 1, false, false, None, vec![int(1)]).is_err());
        assert!(NewformRecord::new("x", 1, 1, false, false, None, vec![int(1)]).is_err());
        assert!(NewformRecord::new("x", 12, 0, false, false, None, vec![int(1)]).is_err());
        assert!(NewformRecord::new("x", 12, 1, false, false, Some(2), vec![int(1)]).is_err());
    }

    #[test]
    fn closure_reproduces_delta_from_prime_data() {
        let delta = eta_quotient(&[(1, 24)], 200).expect("delta");
        let closed = multiplicative_closure(200, 12, 1, |p| delta.coeff(p as usize).clone());
        for n in 1..=200usize {
            assert_eq!(&closed[n - 1], delta.coeff(n), "n = {n}");
        }
    }

    #[test]
    fn closure_respects_bad_primes() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 200).expect("11.2");
        let closed = multiplicative_closure(200, 2, 11, |p| f.coeff(p as usize).clone());
        for n in 1..=200usize {
            assert_eq!(&closed[n - 1], f.coeff(n), "n = {n}");
        }
    }

    #[test]
    fn tate_twist_matches_direct_scaling() {
        let delta = eta_quotient(&[(1, 24)], 300).expect("delta");
        let coeffs: Vec<BigInt> = (1..=300)
            .map(|n| delta.coeff(n).to_integer())
            .collect();
        let rec = NewformRecord::new("w12", 12, 1, false, false, Some(1), coeffs).unwrap();
        let tw = synthesize_tate_twist(&rec, 1).expect("positive twist");
        assert_eq!(tw.weight(), 14);
        assert!(tw.is_synthetic());
        assert_eq!(tw.fe_sign(), None);
        for n in 1..=300u64 {
            let want = rec.coefficient(n).unwrap() * int(n as i64);
            assert_eq!(tw.coefficient(n).unwrap(), &want, "n = {n}");
        }
    }

    #[test]
    fn tate_twist_examples() {
        let delta = eta_quotient(&[(1, 24)], 20).expect("delta");
        let rec = NewformRecord::new(
            "w12",
            12,
            1,
            false,
            false,
            Some(1),
            (1..=20).map(|n| delta.coeff(n).to_integer()).collect(),
        )
        .unwrap();
        let up = synthesize_tate_twist(&rec, 1).unwrap();
        assert_eq!(up.coefficient(2).unwrap(), &int(-48));
        let same = synthesize_tate_twist(&rec, 0).unwrap();
        assert_eq!(same.coefficients(), rec.coefficients());
        assert!(same.is_synthetic());

        let eleven = eta_quotient(&[(1, 2), (11, 2)], 20).expect("11.2");
        let rec11 = NewformRecord::new(
            "w2",
            2,
            11,
            false,
            false,
            Some(1),
            (1..=20).map(|n| eleven.coeff(n).to_integer()).collect(),
        )
        .unwrap();
        let tw = synthesize_tate_twist(&rec11, 2).unwrap();
        assert_eq!(tw.weight(), 6);
        assert_eq!(tw.coefficient(3).unwrap(), &int(-9));
    }

    #[test]
    fn tate_twist_rejects_weight_collapse_and_nonintegrality() {
        let rec = NewformRecord::new("x", 2, 11, false, false, None, vec![int(1), int(-2)]).unwrap();
        assert!(synthesize_tate_twist(&rec, -1).is_err());

        let delta = eta_quotient(&[(1, 24)], 50).expect("delta");
        let rec12 = NewformRecord::new(
            "w12",
            12,
            1,
            false,
            false,
            None,
            (1..=50).map(|n| delta.coeff(n).to_integer()).collect(),
        )
        .unwrap();
        // tau(11) is not divisible by 11, so omega^{-1} leaves Z.
        let err = synthesize_tate_twist(&rec12, -1);
        assert!(matches!(err, Err(Error::InvalidTwist(_))));
    }

    #[test]
    fn eigen_ap_requires_prime_in_range() {
        let rec = NewformRecord::new("x", 12, 1, false, false, None, vec![int(1), int(-24), int(252)]).unwrap();
        assert_eq!(eigen_ap(&rec, 2).unwrap(), int(-24));
        assert!(matches!(eigen_ap(&rec, 4), Err(Error::NotPrime(4))));
        assert!(matches!(eigen_ap(&rec, 5), Err(Error::Range { .. })));
    }
}
