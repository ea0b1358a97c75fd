//! Twist certificates: detecting and verifying the relation
//! a_p(f1) = chi(p) a_p(f2) p^r across good primes.
//!
//! The search inverts what the comparison layer observes. Parity inference
//! fixes r from the weights, character candidates are enumerated up to a
//! modulus bound, and every candidate is tested by exact arithmetic at every
//! usable prime. Certificates are canonical: all candidates are collected
//! first, then the smallest conductor wins, ties broken by enumeration
//! order, so reruns and parallel deployments produce the identical result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::characters::{enumerate_characters, CyclotomicNumber, DirichletCharacter};
use crate::comparator::{coincidence_set, infer_parity_and_r, ParityStatus};
use crate::error::{Error, Result};
use crate::modforms::{multiplicative_closure, sturm_bound, NewformRecord};
use crate::primes::{distinct_prime_factors, primes_up_to};

/// A verified twist relation between two records.
///
/// The defining identity reads a_p(f1) = chi(p) a_p(f2) p^r at every good
/// prime (those not dividing `exceptional_primes` entries' product). The
/// same equivalence read with the roles of f1 and f2 swapped negates r;
/// `reversed_orientation_r` records that value so consumers need not know
/// which orientation convention this crate fixed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TwistCertificate {
    pub f1: String,
    pub f2: String,
    pub r: i64,
    pub reversed_orientation_r: i64,
    pub chi: DirichletCharacter,
    pub verified_up_to: u64,
    pub sturm_target: u64,
    pub exceptional_primes: Vec<u64>,
}

/// Why a search returned no certificate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum NoTwistReason {
    /// No witness primes survive the nonvanishing refinement.
    ParityInconclusive,
    /// Odd weight gap or a witness violating the exact power ratio.
    ParityInconsistent,
    /// Parity fine, but no character within the modulus bound matches.
    NoCharacterMatched,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TwistSearchOutcome {
    /// Identity verified at least up to the Sturm target: rigorous.
    Certified { certificate: TwistCertificate },
    /// Identity holds as far as checked, but the data ran out before the
    /// Sturm target; not a proof of equality.
    WeakMatch { certificate: TwistCertificate },
    NotFound { reason: NoTwistReason },
}

impl TwistSearchOutcome {
    pub fn certificate(&self) -> Option<&TwistCertificate> {
        match self {
            TwistSearchOutcome::Certified { certificate }
            | TwistSearchOutcome::WeakMatch { certificate } => Some(certificate),
            TwistSearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, TwistSearchOutcome::Certified { .. })
    }
}

/// The identity a1 = chi_p * a2 * p^r with rational chi_p, decided exactly.
/// Negative r cross-multiplies rather than leaving the integers.
fn identity_holds_rational(a1: &BigInt, a2: &BigInt, p: u64, r: i64, chi_p: &BigRational) -> bool {
    let power = BigInt::from(p).pow(r.unsigned_abs() as u32);
    let (lhs, rhs_base) = if r >= 0 {
        (BigRational::from(a1.clone()), BigRational::from(a2 * &power))
    } else {
        (BigRational::from(a1 * &power), BigRational::from(a2.clone()))
    };
    lhs == chi_p * rhs_base
}

/// Same identity when chi(p) may be irrational: a rational left side can
/// only match an irrational multiple when both sides vanish.
fn identity_holds(a1: &BigInt, a2: &BigInt, p: u64, r: i64, chi: &DirichletCharacter) -> bool {
    match chi.rational_value(p) {
        Some(v) => identity_holds_rational(a1, a2, p, r, &v),
        None => a1.is_zero() && a2.is_zero(),
    }
}

fn scan_bound(f1: &NewformRecord, f2: &NewformRecord, x: u64) -> Result<u64> {
    let available = f1.bound().min(f2.bound());
    if x > available {
        return Err(Error::Range {
            what: "twist search",
            requested: x,
            available,
        });
    }
    Ok(x)
}

fn sturm_target_for(f1: &NewformRecord, f2: &NewformRecord, chi_modulus: u64) -> u64 {
    let level = f1.level().lcm(&(f2.level() * chi_modulus * chi_modulus));
    sturm_bound(f1.weight(), level)
}

fn exceptional_primes_for(f1: &NewformRecord, f2: &NewformRecord, q: u64) -> Vec<u64> {
    let mut out = distinct_prime_factors(q.max(1));
    out.extend(distinct_prime_factors(f1.level()));
    out.extend(distinct_prime_factors(f2.level()));
    out.sort_unstable();
    out.dedup();
    out
}

/// Search for (r, chi) with a_p(f1) = chi(p) a_p(f2) p^r at all good p <= x.
///
/// r comes from parity inference on the exact coincidence set and the
/// search fails fast when that is inconsistent or inconclusive. Characters
/// of modulus up to `modulus_bound` are then tested exhaustively.
pub fn detect_twist(
    f1: &NewformRecord,
    f2: &NewformRecord,
    modulus_bound: u64,
    x: u64,
) -> Result<TwistSearchOutcome> {
    let x = scan_bound(f1, f2, x)?;
    if modulus_bound < 1 {
        return Err(Error::BadConfig("modulus bound must be at least 1".into()));
    }

    let coincidences = coincidence_set(f1, f2, x)?;
    let finding = infer_parity_and_r(f1, f2, &coincidences);
    let r = match finding.status {
        ParityStatus::Inconclusive => {
            return Ok(TwistSearchOutcome::NotFound {
                reason: NoTwistReason::ParityInconclusive,
            })
        }
        ParityStatus::Inconsistent => {
            return Ok(TwistSearchOutcome::NotFound {
                reason: NoTwistReason::ParityInconsistent,
            })
        }
        ParityStatus::Consistent => finding.r.expect("consistent finding carries r"),
    };

    let primes = primes_up_to(x);
    let mut survivors: Vec<DirichletCharacter> = Vec::new();
    for q in 1..=modulus_bound {
        for chi in enumerate_characters(q) {
            let excluded = q * f1.level() * f2.level();
            let ok = primes
                .iter()
                .copied()
                .filter(|&p| !excluded.is_multiple_of(p))
                .all(|p| {
                    let a1 = f1.coefficient(p).expect("p <= x <= bound");
                    let a2 = f2.coefficient(p).expect("p <= x <= bound");
                    identity_holds(a1, a2, p, r, &chi)
                });
            if ok {
                survivors.push(chi);
            }
        }
    }

    // Canonical winner: smallest conductor, then enumeration order. The
    // enumeration above is already ordered, so a strict < keeps the earliest.
    let winner = survivors.into_iter().reduce(|best, cand| {
        if cand.conductor() < best.conductor() {
            cand
        } else {
            best
        }
    });
    let Some(chi) = winner else {
        return Ok(TwistSearchOutcome::NotFound {
            reason: NoTwistReason::NoCharacterMatched,
        });
    };

    let sturm_target = sturm_target_for(f1, f2, chi.modulus());
    let exceptional = exceptional_primes_for(f1, f2, chi.modulus());
    let certificate = TwistCertificate {
        f1: f1.id().to_string(),
        f2: f2.id().to_string(),
        r,
        reversed_orientation_r: -r,
        chi,
        verified_up_to: x,
        sturm_target,
        exceptional_primes: exceptional,
    };
    if x >= sturm_target {
        Ok(TwistSearchOutcome::Certified { certificate })
    } else {
        Ok(TwistSearchOutcome::WeakMatch { certificate })
    }
}

/// Result of independently re-checking a certificate.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateCheck {
    pub pass: bool,
    pub failing_primes: Vec<u64>,
}

/// Re-test the defining identity at every good prime up to x.
///
/// Deliberately does not share the search's fast path: values are taken as
/// exact cyclotomic numbers and the identity is compared in Q(zeta), so this
/// routine cross-checks both the certificate and the rational shortcut.
pub fn verify_certificate(
    cert: &TwistCertificate,
    f1: &NewformRecord,
    f2: &NewformRecord,
    x: u64,
) -> Result<CertificateCheck> {
    let x = scan_bound(f1, f2, x)?;
    let q = cert.chi.modulus();
    let mut failing = Vec::new();
    for p in primes_up_to(x) {
        if q.is_multiple_of(p) || f1.level().is_multiple_of(p) || f2.level().is_multiple_of(p) {
            continue;
        }
        let a1 = BigRational::from(f1.coefficient(p)?.clone());
        let a2 = BigRational::from(f2.coefficient(p)?.clone());
        let power = BigInt::from(p).pow(cert.r.unsigned_abs() as u32);
        let (lhs_rat, rhs_rat) = if cert.r >= 0 {
            (a1, a2 * BigRational::from(power))
        } else {
            (a1 * BigRational::from(power), a2)
        };
        let order = cert.chi.order();
        let lhs = CyclotomicNumber::from_rational(order, lhs_rat);
        let rhs = &cert.chi.value(p) * &CyclotomicNumber::from_rational(order, rhs_rat);
        if lhs != rhs {
            failing.push(p);
        }
    }
    let weights_consistent = f1.weight() as i64 - f2.weight() as i64 == 2 * cert.r;
    Ok(CertificateCheck {
        pass: failing.is_empty() && weights_consistent,
        failing_primes: failing,
    })
}

/// Synthetic record with a_p replaced by chi(p) a_p; weight unchanged,
/// level multiplied by the square of the character modulus.
///
/// Only real characters keep a rational-coefficient corpus rational, so
/// others are rejected.
pub fn twist_record(f: &NewformRecord, chi: &DirichletCharacter) -> Result<NewformRecord> {
    if !chi.is_real() {
        return Err(Error::Character(format!(
            "twisting rational coefficients needs a real character; this one has order {}",
            chi.order()
        )));
    }
    let q = chi.modulus();
    let new_level = f.level() * q * q;
    let closed = multiplicative_closure(f.bound(), f.weight(), new_level, |p| {
        let v = chi
            .rational_value(p)
            .expect("real characters take rational values");
        v * BigRational::from(f.coefficient(p).expect("p <= bound").clone())
    });
    let coeffs: Vec<BigInt> = closed
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    let exps = chi
        .generator_exponents()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join("-");
    let id = if exps.is_empty() {
        format!("{}.chi{q}", f.id())
    } else {
        format!("{}.chi{q}e{exps}", f.id())
    };
    NewformRecord::new(id, f.weight(), new_level, f.is_cm(), true, None, coeffs)
}

/// The quadratic character of smallest conductor for a given modulus, used
/// all over the tests and examples; None when the group has odd order.
pub fn quadratic_character(q: u64) -> Option<DirichletCharacter> {
    enumerate_characters(q)
        .into_iter()
        .filter(|c| c.is_quadratic())
        .min_by_key(|c| c.conductor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use crate::modforms::{corpus, corpus_with_bound, find_form, synthesize_tate_twist};

    fn delta() -> &'static NewformRecord {
        find_form(corpus(), "delta").unwrap()
    }

    fn trivial_chi() -> DirichletCharacter {
        DirichletCharacter::trivial(1)
    }

    #[test]
    fn twist_by_trivial_preserves_coefficients() {
        let d = delta();
        let t = twist_record(d, &trivial_chi()).unwrap();
        assert_eq!(t.coefficients(), d.coefficients());
        assert_eq!(t.level(), 1);
        assert!(t.is_synthetic());
    }

    #[test]
    fn twist_examples() {
        let d = delta();
        let chi4 = quadratic_character(4).unwrap();
        let t = twist_record(d, &chi4).unwrap();
        assert_eq!(t.coefficient(3).unwrap(), &BigInt::from(-252));
        assert_eq!(t.coefficient(2).unwrap(), &BigInt::from(0));
        assert_eq!(t.level(), 16);

        let eleven = find_form(corpus(), "11.2").unwrap();
        let chi3 = quadratic_character(3).unwrap();
        let t = twist_record(eleven, &chi3).unwrap();
        assert_eq!(t.coefficient(2).unwrap(), &BigInt::from(2));
    }

    #[test]
    fn twist_rejects_complex_characters() {
        let d = delta();
        let order4 = enumerate_characters(5)
            .into_iter()
            .find(|c| c.order() == 4)
            .unwrap();
        assert!(matches!(
            twist_record(d, &order4),
            Err(Error::Character(_))
        ));
    }

    #[test]
    fn self_comparison_gives_trivial_certificate() {
        let d = delta();
        let out = detect_twist(d, d, 8, 2000).unwrap();
        let cert = out.certificate().expect("identity twist certifies");
        assert!(out.is_certified());
        assert_eq!(cert.r, 0);
        assert_eq!(cert.reversed_orientation_r, 0);
        assert!(cert.chi.is_trivial());
        assert_eq!(cert.chi.modulus(), 1);
        assert_eq!(cert.sturm_target, 1);
    }

    #[test]
    fn mod4_twist_detected_with_conductor_four() {
        let d = delta();
        let chi4 = quadratic_character(4).unwrap();
        let twisted = twist_record(d, &chi4).unwrap();
        let out = detect_twist(&twisted, d, 8, 5000).unwrap();
        let cert = out.certificate().expect("twist must be found");
        assert!(out.is_certified());
        assert_eq!(cert.r, 0);
        assert_eq!(cert.chi.conductor(), 4);
        assert_eq!(cert.chi.modulus(), 4);
        assert_eq!(cert.exceptional_primes, vec![2]);

        let check = verify_certificate(cert, &twisted, d, 5000).unwrap();
        assert!(check.pass);
        assert!(check.failing_primes.is_empty());
    }

    #[test]
    fn tate_twist_detected_with_trivial_character() {
        let eleven = find_form(corpus(), "11.2").unwrap();
        let up = synthesize_tate_twist(eleven, 1).unwrap();
        let out = detect_twist(&up, eleven, 8, 3000).unwrap();
        let cert = out.certificate().expect("tate twist certifies");
        assert!(out.is_certified());
        assert_eq!(cert.r, 1);
        assert_eq!(cert.reversed_orientation_r, -1);
        assert!(cert.chi.is_trivial());
    }

    #[test]
    fn round_trip_small_matrix() {
        // Subset of the full acceptance sweep, kept light: the detected pair
        // (r, chi') must reproduce the construction at nonvanishing primes.
        let forms = ["delta", "27.2cm"];
        for form in forms {
            let f = find_form(corpus(), form).unwrap();
            for q in [3u64, 4] {
                let chi = quadratic_character(q).unwrap();
                for r in [0i32, 1] {
                    let shifted = synthesize_tate_twist(f, r).unwrap();
                    let twisted = twist_record(&shifted, &chi).unwrap();
                    let out = detect_twist(&twisted, f, 8, 4000).unwrap();
                    let cert = out
                        .certificate()
                        .unwrap_or_else(|| panic!("{form} q={q} r={r}: no certificate"));
                    assert_eq!(cert.r, r as i64, "{form} q={q} r={r}");
                    for p in primes_up_to(200) {
                        if (q * cert.chi.modulus() * f.level()).is_multiple_of(p) {
                            continue;
                        }
                        if f.coefficient(p).unwrap().is_zero() {
                            continue;
                        }
                        assert_eq!(
                            cert.chi.rational_value(p),
                            chi.rational_value(p),
                            "{form} q={q} r={r} at p={p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cm_self_twist_certifies_trivially() {
        // Twisting a CM form by its own CM character fixes the coefficients,
        // so the canonical (smallest-conductor) answer is the trivial
        // character, not the CM character.
        let cm = find_form(corpus(), "27.2cm").unwrap();
        let chi3 = quadratic_character(3).unwrap();
        let twisted = twist_record(cm, &chi3).unwrap();
        assert_eq!(
            twisted.coefficients(),
            cm.coefficients(),
            "CM character fixes its own form"
        );
        let out = detect_twist(&twisted, cm, 8, 4000).unwrap();
        let cert = out.certificate().unwrap();
        assert!(cert.chi.is_trivial());
    }

    #[test]
    fn negative_control_yields_nothing() {
        // Unrelated forms of different weight: the sparse accidental
        // coincidences (if any) never survive the nonvanishing refinement,
        // so the search dies at the parity gate.
        let d = delta();
        let eleven = find_form(corpus(), "11.2").unwrap();
        let out = detect_twist(d, eleven, 8, d.bound().min(eleven.bound())).unwrap();
        assert!(out.certificate().is_none());
        assert_eq!(
            out,
            TwistSearchOutcome::NotFound {
                reason: NoTwistReason::ParityInconclusive
            }
        );
    }

    #[test]
    fn odd_weight_gap_fails_parity_gate() {
        let d = delta();
        let w13 = NewformRecord::new("w13", 13, 1, false, true, None, d.coefficients().to_vec())
            .unwrap();
        let out = detect_twist(d, &w13, 8, 4000).unwrap();
        assert_eq!(
            out,
            TwistSearchOutcome::NotFound {
                reason: NoTwistReason::ParityInconclusive
            }
        );
    }

    #[test]
    fn shallow_scan_degrades_to_weak_match() {
        let shallow = corpus_with_bound(600);
        let cm = find_form(&shallow, "36.2cm").unwrap();
        let chi8 = quadratic_character(8).unwrap();
        let twisted = twist_record(cm, &chi8).unwrap();
        let out = detect_twist(&twisted, cm, 8, 600).unwrap();
        match out {
            TwistSearchOutcome::WeakMatch { certificate } => {
                assert!(certificate.verified_up_to < certificate.sturm_target);
            }
            other => panic!("expected weak match, got {other:?}"),
        }
    }

    #[test]
    fn verify_rejects_wrong_r_at_first_good_prime() {
        let d = delta();
        let up = synthesize_tate_twist(d, 1).unwrap();
        let out = detect_twist(&up, d, 8, 2000).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        cert.r += 1;
        let check = verify_certificate(&cert, &up, d, 2000).unwrap();
        assert!(!check.pass);
        assert_eq!(check.failing_primes.first(), Some(&2));
    }

    #[test]
    fn verify_rejects_wrong_parity_class() {
        let d = delta();
        let chi4 = quadratic_character(4).unwrap();
        let twisted = twist_record(d, &chi4).unwrap();
        let out = detect_twist(&twisted, d, 8, 2000).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        cert.chi = trivial_chi();
        let check = verify_certificate(&cert, &twisted, d, 2000).unwrap();
        assert!(!check.pass);
        assert!(check.failing_primes.iter().all(|&p| p % 4 == 3));
        assert!(!check.failing_primes.is_empty());
    }

    #[test]
    fn certificate_serde_round_trip() {
        let d = delta();
        let chi4 = quadratic_character(4).unwrap();
        let twisted = twist_record(d, &chi4).unwrap();
        let out = detect_twist(&twisted, d, 8, 2000).unwrap();
        let json = serde_json::to_string(&out).unwrap();
        let back: TwistSearchOutcome = serde_json::from_str(&json).unwrap();
        assert_eq!(out, back);
        assert!(json.contains("\"outcome\""));
    }

    #[test]
    fn search_range_error() {
        let d = delta();
        assert!(matches!(
            detect_twist(d, d, 8, d.bound() + 1),
            Err(Error::Range { .. })
        ));
    }
}
