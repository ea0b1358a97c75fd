//! Command bodies. Each returns a `CommandOutput` holding all three
//! renderings (text, JSON value with `schema: 1`, optional CSV) plus the
//! process exit code, so the front end stays a thin switch.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

use crate::cli::cache::{atomic_write, resolve_form, user_records, user_records_dir};
use crate::cli::config::RunConfig;
use crate::comparator::{
    coincidence_set, infer_parity_and_r, normalized_ap, upper_density, vanishing_set,
    DensityReport, ParityFinding, ParityStatus, DEFAULT_CHECKPOINTS,
};
use crate::error::{Error, Result};
use crate::lfunc::{
    euler_factor, euler_zero_lattice, functional_equation_residual, gamma_ratio_check,
    l_shift_identity_check, tate_twist_obstruction, EulerFactor,
};
use crate::modforms::{corpus, find_form, write_record, NewformRecord};
use crate::primes::distinct_prime_factors;
use crate::twist::{detect_twist, verify_certificate, TwistSearchOutcome};

pub struct CommandOutput {
    pub text: String,
    pub json: serde_json::Value,
    pub csv: Option<String>,
    pub exit_code: i32,
}

impl CommandOutput {
    fn new(command: &str, text: String, report: serde_json::Value) -> Self {
        CommandOutput {
            text,
            json: json!({"schema": 1, "command": command, "report": report}),
            csv: None,
            exit_code: 0,
        }
    }
}

/// "re" or "re,im".
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::BadConfig(format!("bad complex number {text:?}: expected RE or RE,IM"));
    match text.split_once(',') {
        None => Ok(Complex64::new(text.trim().parse().map_err(|_| bad())?, 0.0)),
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
    }
}

#[derive(Serialize)]
struct FormRow {
    id: String,
    weight: u32,
    level: u64,
    cm: bool,
    synthetic: bool,
    fe_sign: Option<i8>,
    bound: u64,
    source: &'static str,
}

impl FormRow {
    fn from(f: &NewformRecord, source: &'static str) -> Self {
        FormRow {
            id: f.id().to_string(),
            weight: f.weight(),
            level: f.level(),
            cm: f.is_cm(),
            synthetic: f.is_synthetic(),
            fe_sign: f.fe_sign(),
            bound: f.bound(),
            source,
        }
    }
}

pub fn corpus_list() -> Result<CommandOutput> {
    let mut rows: Vec<FormRow> = corpus()
        .iter()
        .map(|f| FormRow::from(f, "built-in"))
        .collect();
    for user in user_records()? {
        rows.push(FormRow::from(&user, "user"));
    }

    let id_width = rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let mut text = format!(
        "{:<id_width$}  {:>6}  {:>6}  {:<3}  {:<9}  {:>4}  {:>7}  source\n",
        "id", "weight", "level", "cm", "synthetic", "sign", "bound"
    );
    for r in &rows {
        let sign = r.fe_sign.map_or("-".to_string(), |s| format!("{s:+}"));
        let _ = writeln!(
            text,
            "{:<id_width$}  {:>6}  {:>6}  {:<3}  {:<9}  {:>4}  {:>7}  {}",
            r.id,
            r.weight,
            r.level,
            if r.cm { "yes" } else { "no" },
            if r.synthetic { "yes" } else { "no" },
            sign,
            r.bound,
            r.source
        );
    }
    Ok(CommandOutput::new(
        "corpus list",
        text,
        serde_json::to_value(&rows)?,
    ))
}

pub fn corpus_export(config: &RunConfig, form: &str, out: &Path, bound: Option<u64>) -> Result<CommandOutput> {
    let bound = bound.unwrap_or(config.coefficient_bound);
    let record = resolve_form(form, bound)?;
    let mut body = Vec::new();
    write_record(&record, &mut body)?;
    atomic_write(out, &body)?;
    let text = format!(
        "wrote {} ({} coefficients) to {}\n",
        record.id(),
        record.bound(),
        out.display()
    );
    Ok(CommandOutput::new(
        "corpus export",
        text,
        json!({"id": record.id(), "bound": record.bound(), "path": out.display().to_string()}),
    ))
}

pub fn corpus_import(file: &Path) -> Result<CommandOutput> {
    let record = crate::modforms::read_record_file(file)?;
    if find_form(corpus(), record.id()).is_ok() {
        return Err(Error::Record(format!(
            "id {:?} collides with a built-in form",
            record.id()
        )));
    }
    if user_records()?.iter().any(|u| u.id() == record.id()) {
        return Err(Error::Record(format!(
            "id {:?} is already imported",
            record.id()
        )));
    }
    let mut body = Vec::new();
    write_record(&record, &mut body)?;
    let dest = user_records_dir().join(format!("{}.qexp", record.id()));
    atomic_write(&dest, &body)?;
    let text = format!(
        "imported {} (weight {}, level {}, {} coefficients) to {}\n",
        record.id(),
        record.weight(),
        record.level(),
        record.bound(),
        dest.display()
    );
    Ok(CommandOutput::new(
        "corpus import",
        text,
        serde_json::to_value(FormRow::from(&record, "user"))?,
    ))
}

#[derive(Serialize)]
struct CompareReport {
    f1: String,
    f2: String,
    x: u64,
    weight_convention: crate::comparator::WeightConvention,
    coincidence_count: usize,
    sample: Vec<SampleRow>,
    density: DensityReport,
    parity: ParityFinding,
}

#[derive(Serialize)]
struct SampleRow {
    p: u64,
    normalized_f1: f64,
    normalized_f2: f64,
}

fn render_parity(parity: &ParityFinding) -> String {
    match parity.status {
        ParityStatus::Consistent => format!(
            "parity: consistent, r = {} ({} witness primes)",
            parity.r.unwrap(),
            parity.witness_primes.len()
        ),
        ParityStatus::Inconclusive => {
            "parity: inconclusive (no usable witness primes)".to_string()
        }
        ParityStatus::Inconsistent => format!(
            "parity: inconsistent ({} witness primes)",
            parity.witness_primes.len()
        ),
    }
}

fn render_density(d: &DensityReport) -> String {
    let mut text = format!("{} density checkpoints:\n", d.set_label);
    for c in &d.checkpoints {
        let _ = writeln!(
            text,
            "  X = {:>8}: {:>6} of {:>6} primes, ratio {:.6}",
            c.x,
            c.count_in_set,
            c.primes,
            c.ratio.as_f64()
        );
    }
    let _ = writeln!(
        text,
        "upper-density estimate (max over last {} checkpoints): {}/{} = {:.6}",
        d.tail_window,
        d.upper_density_estimate.num,
        d.upper_density_estimate.den,
        d.upper_density_estimate.as_f64()
    );
    text
}

pub fn compare(config: &RunConfig, f1_id: &str, f2_id: &str, x: Option<u64>) -> Result<CommandOutput> {
    let x = x.unwrap_or(config.density_x);
    let f1 = resolve_form(f1_id, x)?;
    let f2 = resolve_form(f2_id, x)?;
    let coincidences = coincidence_set(&f1, &f2, x)?;
    let density = upper_density(
        "coincidence",
        &coincidences,
        x,
        DEFAULT_CHECKPOINTS,
        config.tail_window,
    )?;
    let parity = infer_parity_and_r(&f1, &f2, &coincidences);
    let sample = coincidences
        .iter()
        .take(5)
        .map(|&p| {
            Ok(SampleRow {
                p,
                normalized_f1: normalized_ap(&f1, p, config.weight_convention)?,
                normalized_f2: normalized_ap(&f2, p, config.weight_convention)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut text = format!(
        "compare {} vs {} up to X = {x}\ncoinciding normalized traces at {} of the shared good primes\n",
        f1.id(),
        f2.id(),
        coincidences.len()
    );
    for row in &sample {
        let _ = writeln!(
            text,
            "  p = {:>6}: {:.6} vs {:.6}",
            row.p, row.normalized_f1, row.normalized_f2
        );
    }
    text.push_str(&render_density(&density));
    text.push_str(&render_parity(&parity));
    text.push('\n');

    let report = CompareReport {
        f1: f1.id().to_string(),
        f2: f2.id().to_string(),
        x,
        weight_convention: config.weight_convention,
        coincidence_count: coincidences.len(),
        sample,
        density,
        parity,
    };
    let csv = report.density.to_csv();
    let mut out = CommandOutput::new("compare", text, serde_json::to_value(&report)?);
    out.csv = Some(csv);
    Ok(out)
}

pub fn density(config: &RunConfig, form: &str, x: Option<u64>) -> Result<CommandOutput> {
    let x = x.unwrap_or(config.density_x);
    let record = resolve_form(form, x)?;
    let vanishing = vanishing_set(&record, x)?;
    let report = upper_density(
        "vanishing",
        &vanishing,
        x,
        DEFAULT_CHECKPOINTS,
        config.tail_window,
    )?;
    let text = format!(
        "vanishing density for {} up to X = {x}\n{}",
        record.id(),
        render_density(&report)
    );
    let csv = report.to_csv();
    let mut out = CommandOutput::new(
        "density",
        text,
        json!({"form": record.id(), "x": x, "density": serde_json::to_value(&report)?}),
    );
    out.csv = Some(csv);
    Ok(out)
}

pub fn detect_twist_cmd(
    config: &RunConfig,
    f1_id: &str,
    f2_id: &str,
    x: Option<u64>,
    modulus_bound: Option<u64>,
) -> Result<CommandOutput> {
    let x = x.unwrap_or(config.coefficient_bound);
    let modulus_bound = modulus_bound.unwrap_or(config.modulus_bound);
    let f1 = resolve_form(f1_id, x)?;
    let f2 = resolve_form(f2_id, x)?;
    let outcome = detect_twist(&f1, &f2, modulus_bound, x)?;

    let (text, verification, exit_code) = match &outcome {
        TwistSearchOutcome::Certified { certificate } => {
            let check = verify_certificate(certificate, &f1, &f2, x)?;
            let mut text = format!(
                "certificate: a_p({}) = chi(p) a_p({}) p^{} at good p\n",
                certificate.f1, certificate.f2, certificate.r
            );
            let _ = writeln!(
                text,
                "  chi: modulus {}, conductor {}, exponents {:?}",
                certificate.chi.modulus(),
                certificate.chi.conductor(),
                certificate.chi.generator_exponents()
            );
            let _ = writeln!(
                text,
                "  verified up to {} (sturm target {}), exceptional primes {:?}",
                certificate.verified_up_to, certificate.sturm_target, certificate.exceptional_primes
            );
            let _ = writeln!(
                text,
                "  independent re-check: {}",
                if check.pass { "pass" } else { "FAIL" }
            );
            let code = if check.pass { 0 } else { 2 };
            (text, Some(check), code)
        }
        TwistSearchOutcome::WeakMatch { certificate } => {
            let text = format!(
                "weak match only: identity holds to {} but the sturm target is {}; not a certificate\n",
                certificate.verified_up_to, certificate.sturm_target
            );
            (text, None, 3)
        }
        TwistSearchOutcome::NotFound { reason } => {
            let text = format!("no twist relation found ({reason:?})\n");
            (text, None, 3)
        }
    };

    let report = json!({
        "f1": f1.id(),
        "f2": f2.id(),
        "x": x,
        "modulus_bound": modulus_bound,
        "outcome": serde_json::to_value(&outcome)?,
        "verification": verification.as_ref().map(serde_json::to_value).transpose()?,
    });
    let mut out = CommandOutput::new("detect-twist", text, report);
    out.exit_code = exit_code;
    Ok(out)
}

pub fn lfunc_gamma(s: &str, m: u32) -> Result<CommandOutput> {
    let check = gamma_ratio_check(parse_complex(s)?, m)?;
    let text = format!(
        "Gamma(s)/Gamma(s-m) = {:.9}\nproduct (s-1)...(s-m) = {:.9}\nrelative error = {:.3e}\n",
        check.lhs, check.rhs, check.relative_error
    );
    Ok(CommandOutput::new(
        "lfunc gamma",
        text,
        serde_json::to_value(check)?,
    ))
}

pub fn lfunc_lattice(alpha: &str, p: u64, n_min: i64, n_max: i64) -> Result<CommandOutput> {
    if n_min > n_max {
        return Err(Error::BadConfig(format!(
            "empty lattice range {n_min}..={n_max}"
        )));
    }
    let alpha = parse_complex(alpha)?;
    let points = euler_zero_lattice(alpha, p, n_min..=n_max)?;
    let mut text = format!("zeros of 1 - alpha p^(-s), alpha = {alpha}, p = {p}\n");
    for pt in &points {
        let _ = writeln!(
            text,
            "  n = {:>4}: s = {:.9}, residual = {:.3e}",
            pt.n, pt.s, pt.residual
        );
    }
    Ok(CommandOutput::new(
        "lfunc lattice",
        text,
        json!({"alpha": alpha, "p": p, "points": serde_json::to_value(&points)?}),
    ))
}

pub fn lfunc_shift(
    config: &RunConfig,
    form: &str,
    r: u32,
    s: &str,
    m: Option<u64>,
    cutoff: Option<u64>,
) -> Result<CommandOutput> {
    let s = parse_complex(s)?;
    let record = resolve_form(form, config.coefficient_bound)?;
    let m = m.unwrap_or(record.level());
    let cutoff = cutoff.unwrap_or(record.bound());
    let err = l_shift_identity_check(&record, r, m, s, cutoff)?;
    let text = format!(
        "shift identity for {} with r = {r}, M = {m}, cutoff {cutoff}\nrelative error at s = {s}: {err:.3e}\n",
        record.id()
    );
    Ok(CommandOutput::new(
        "lfunc shift",
        text,
        json!({"form": record.id(), "r": r, "m": m, "s": s, "cutoff": cutoff, "relative_error": err}),
    ))
}

pub fn lfunc_obstruction(
    config: &RunConfig,
    k1: u32,
    k2: u32,
    r: Option<u32>,
    f1: Option<&str>,
    f2: Option<&str>,
) -> Result<CommandOutput> {
    let r = match r {
        Some(r) => r,
        None => {
            if k1 < k2 || !(k1 - k2).is_multiple_of(2) {
                return Err(Error::Domain(format!(
                    "weights {k1}, {k2} admit no twist power: need k1 = k2 + 2r, r >= 0"
                )));
            }
            (k1 - k2) / 2
        }
    };

    let pairs: Vec<(EulerFactor, EulerFactor)> = match (f1, f2) {
        (Some(id1), Some(id2)) => {
            let r1 = resolve_form(id1, config.coefficient_bound)?;
            let r2 = resolve_form(id2, config.coefficient_bound)?;
            if r1.weight() != k1 || r2.weight() != k2 {
                return Err(Error::Domain(format!(
                    "form weights ({}, {}) do not match --k1/--k2 ({k1}, {k2})",
                    r1.weight(),
                    r2.weight()
                )));
            }
            // Local data at the primes of 2 N1 N2 (auxiliary prime 2 keeps
            // the list nonempty for level-one pairs).
            distinct_prime_factors(2 * r1.level() * r2.level())
                .into_iter()
                .map(|p| Ok((euler_factor(&r1, p)?, euler_factor(&r2, p)?)))
                .collect::<Result<Vec<_>>>()?
        }
        (None, None) => Vec::new(),
        _ => {
            return Err(Error::BadConfig(
                "--f1 and --f2 must be given together".into(),
            ))
        }
    };

    let report = tate_twist_obstruction(k1, k2, r, &pairs)?;
    let text = format!("{report}\n");
    Ok(CommandOutput::new(
        "lfunc obstruction",
        text,
        serde_json::to_value(&report)?,
    ))
}

pub fn lfunc_feq(config: &RunConfig, form: &str, s: &str, terms: Option<u64>) -> Result<CommandOutput> {
    let s = parse_complex(s)?;
    let record = resolve_form(form, config.coefficient_bound)?;
    let terms = terms.unwrap_or(1000);
    let residual = functional_equation_residual(&record, s, terms)?;
    // At s = k - s both Lambda evaluations are the same computation, so the
    // relative residual is |1 - sign| by construction and says nothing.
    let central = (s - (Complex64::new(record.weight() as f64, 0.0) - s)).norm() < 1e-12;
    let mut text = format!(
        "functional-equation residual for {} at s = {s} with {terms} smoothed terms\nsign {:+}, residual {residual:.6e}\n",
        record.id(),
        record.fe_sign().unwrap_or(0)
    );
    if central {
        text.push_str("note: s is the central point, where the check is vacuous; probe an off-center s\n");
    }
    Ok(CommandOutput::new(
        "lfunc feq",
        text,
        json!({"form": record.id(), "s": s, "terms": terms, "sign": record.fe_sign(), "residual": residual, "central_point": central}),
    ))
}
