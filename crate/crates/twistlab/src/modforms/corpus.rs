//! The built-in eigenform corpus.
//!
//! Six level-1 eigenforms (the one-dimensional cusp spaces) plus five
//! weight-2 eta-quotient newforms, three of them CM. Each record is built
//! from scratch and then pushed through the eigenform, purity, and CM
//! congruence checks before it is handed out, so a corrupted construction
//! cannot survive to the comparison layer.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use crate::series::{eta_quotient, QSeries};

use super::{hecke_tp, sturm_bound, victor_miller_basis, NewformRecord};

/// Coefficients stored per record by default: a_1..a_10000. Density work at
/// larger X regenerates with `corpus_with_bound`.
pub const DEFAULT_COEFFICIENT_BOUND: u64 = 10_000;

/// Functional-equation signs. Level-1 signs follow the closed form
/// (-1)^{k/2}; the weight-2 signs were calibrated once numerically against
/// the completed-L symmetry and stored (all five corpus curves come out +1).
const LEVEL_ONE: [(&str, u32, i8); 6] = [
    ("1.12.delta", 12, 1),
    ("1.16", 16, 1),
    ("1.18", 18, -1),
    ("1.20", 20, 1),
    ("1.22", 22, -1),
    ("1.26", 26, -1),
];

struct EtaForm {
    id: &'static str,
    level: u64,
    spec: &'static [(u64, i64)],
    cm: bool,
    /// For CM forms: (m, r) with a_p = 0 exactly when p = r mod m.
    vanishing: Option<(u64, u64)>,
    fe_sign: i8,
}

const ETA_FORMS: [EtaForm; 5] = [
    EtaForm { id: "11.2", level: 11, spec: &[(1, 2), (11, 2)], cm: false, vanishing: None, fe_sign: 1 },
    EtaForm { id: "20.2", level: 20, spec: &[(2, 2), (10, 2)], cm: false, vanishing: None, fe_sign: 1 },
    EtaForm { id: "27.2cm", level: 27, spec: &[(3, 2), (9, 2)], cm: true, vanishing: Some((3, 2)), fe_sign: 1 },
    EtaForm { id: "32.2cm", level: 32, spec: &[(4, 2), (8, 2)], cm: true, vanishing: Some((4, 3)), fe_sign: 1 },
    EtaForm { id: "36.2cm", level: 36, spec: &[(6, 4)], cm: true, vanishing: Some((3, 2)), fe_sign: 1 },
];

fn record_from_series(
    id: &str,
    weight: u32,
    level: u64,
    cm: bool,
    fe_sign: i8,
    series: &QSeries,
    bound: u64,
) -> NewformRecord {
    let coeffs = (1..=bound as usize)
        .map(|n| {
            let c = series.coeff(n);
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    NewformRecord::new(id, weight, level, cm, false, Some(fe_sign), coeffs)
        .expect("corpus construction satisfies record invariants")
}

/// T_p f = a_p f coefficientwise for p <= 20, up to Sturm bound + 10.
fn check_eigenform(rec: &NewformRecord) {
    let f = rec.q_expansion();
    let depth = (sturm_bound(rec.weight(), rec.level()) + 10) as usize;
    for p in primes_up_to(20) {
        let tp = hecke_tp(&f, rec.weight(), rec.level(), p).expect("p prime");
        let ap = BigRational::from(rec.coefficient(p).expect("p in range").clone());
        let limit = tp.precision().min(depth);
        for n in 1..=limit {
            assert_eq!(
                tp.coeff(n),
                &(&ap * f.coeff(n)),
                "{}: T_{p} eigenform identity fails at n = {n}",
                rec.id()
            );
        }
    }
}

/// a_p^2 <= 4 p^{k-1} at every good prime in range.
fn check_purity(rec: &NewformRecord) {
    for p in primes_up_to(rec.bound()) {
        if rec.level().is_multiple_of(p) {
            continue;
        }
        let ap = rec.coefficient(p).expect("in range");
        let bound = num_bigint::BigInt::from(4u32) * num_bigint::BigInt::from(p).pow(rec.weight() - 1);
        assert!(
            ap * ap <= bound,
            "{}: purity bound fails at p = {p}",
            rec.id()
        );
    }
}

/// CM vanishing is exactly a congruence condition on good primes.
fn check_cm_congruence(rec: &NewformRecord, modulus: u64, residue: u64) {
    for p in primes_up_to(rec.bound()) {
        if rec.level().is_multiple_of(p) {
            continue;
        }
        let vanishes = rec.coefficient(p).expect("in range").is_zero();
        assert_eq!(
            vanishes,
            p % modulus == residue,
            "{}: CM congruence fails at p = {p}",
            rec.id()
        );
    }
}

/// Build all eleven corpus records with coefficients a_1..a_bound.
/// Panics if any build-time invariant fails; that is a bug, not bad input.
pub fn corpus_with_bound(bound: u64) -> Vec<NewformRecord> {
    assert!(bound >= 100, "corpus bound too small to be meaningful");
    let precision = bound as usize;
    let mut records = Vec::with_capacity(11);

    for (id, weight, fe_sign) in LEVEL_ONE {
        let basis = victor_miller_basis(weight, precision);
        assert_eq!(basis.len(), 1, "weight {weight} cusp space should be a line");
        records.push(record_from_series(id, weight, 1, false, fe_sign, &basis[0], bound));
    }

    for form in &ETA_FORMS {
        let series = eta_quotient(form.spec, precision).expect("corpus eta specs are valid");
        let rec = record_from_series(form.id, 2, form.level, form.cm, form.fe_sign, &series, bound);
        if let Some((m, r)) = form.vanishing {
            check_cm_congruence(&rec, m, r);
        }
        records.push(rec);
    }

    for rec in &records {
        check_eigenform(rec);
        check_purity(rec);
    }
    records
}

/// The corpus at the default bound, built once per process.
pub fn corpus() -> &'static [NewformRecord] {
    static CORPUS: OnceLock<Vec<NewformRecord>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus_with_bound(DEFAULT_COEFFICIENT_BOUND))
}

/// Look up a record by id; "delta" is accepted for "1.12.delta".
pub fn find_form<'a>(records: &'a [NewformRecord], id: &str) -> Result<&'a NewformRecord> {
    let canonical = if id == "delta" { "1.12.delta" } else { id };
    records
        .iter()
        .find(|r| r.id() == canonical)
        .ok_or_else(|| Error::UnknownForm(id.to_string()))
}
