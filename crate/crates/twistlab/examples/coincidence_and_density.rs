//! Where do two eigenforms carry the same normalized trace, and how
//! often? A twisted copy coincides everywhere; unrelated forms coincide
//! almost nowhere; a weight mismatch of odd parity shows up immediately.

use twistlab::comparator::{
    coincidence_set, infer_parity_and_r, upper_density, ParityStatus, DEFAULT_CHECKPOINTS,
    DEFAULT_TAIL_WINDOW,
};
use twistlab::modforms::{corpus, find_form, synthesize_tate_twist};

fn report(label: &str, f1: &twistlab::modforms::NewformRecord, f2: &twistlab::modforms::NewformRecord, x: u64) -> twistlab::Result<()> {
    let coincidences = coincidence_set(f1, f2, x)?;
    let density = upper_density(
        "coincidence",
        &coincidences,
        x,
        DEFAULT_CHECKPOINTS,
        DEFAULT_TAIL_WINDOW,
    )?;
    let parity = infer_parity_and_r(f1, f2, &coincidences);
    println!("{label}: {} vs {} up to {x}", f1.id(), f2.id());
    println!(
        "  coinciding at {} primes, upper density {:.4}",
        coincidences.len(),
        density.upper_density_estimate.as_f64()
    );
    match parity.status {
        ParityStatus::Consistent => println!(
            "  twist power consistent: r = {} from {} witnesses",
            parity.r.unwrap(),
            parity.witness_primes.len()
        ),
        ParityStatus::Inconsistent => println!("  no single twist power fits the witnesses"),
        ParityStatus::Inconclusive => println!("  no witness primes with both traces nonzero"),
    }
    Ok(())
}

fn main() -> twistlab::Result<()> {
    let delta = find_form(corpus(), "delta")?;
    let w16 = find_form(corpus(), "1.16")?;
    let x = 10_000;

    // A weight-14 copy of delta with a_p -> p a_p: every normalized
    // trace matches, and the inferred power recovers r = 1.
    let shifted = synthesize_tate_twist(delta, 1)?;
    report("tate twist", &shifted, delta, x)?;

    // Unrelated forms of the same level: the coincidence set thins out.
    report("\nunrelated", delta, w16, x)?;

    // Checkpoint table for the unrelated pair, the same rows the
    // `compare` command prints.
    let coincidences = coincidence_set(delta, w16, x)?;
    let density = upper_density(
        "coincidence",
        &coincidences,
        x,
        DEFAULT_CHECKPOINTS,
        DEFAULT_TAIL_WINDOW,
    )?;
    println!("\n{}", density.to_csv());
    Ok(())
}
