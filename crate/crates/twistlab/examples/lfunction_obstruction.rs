//! Why the twist power must be zero: for r > 0 the ratio of completed
//! L-functions has rational zeros and poles that no Euler factor on the
//! other side can cancel, because Euler zeros live on vertical lattices.

use twistlab::lfunc::{euler_factor, euler_zero_lattice, tate_twist_obstruction};
use twistlab::modforms::{corpus, find_form, synthesize_tate_twist};

fn main() -> twistlab::Result<()> {
    // An Euler factor's zeros: vertical lattice over ln alpha / ln p.
    let delta = find_form(corpus(), "delta")?;
    let at_two = euler_factor(delta, 2)?;
    println!(
        "local factor of delta at p = 2: 1 - ({}) 2^-s + {} 4^-s",
        at_two.lin(),
        at_two.quad()
    );
    for alpha in at_two.reciprocal_roots() {
        let points = euler_zero_lattice(alpha, 2, 0..=1)?;
        println!("  root {alpha:.4}: zeros at s = {:.4}, then steps of 2 pi i / ln 2", points[0].s);
        assert!(points.iter().all(|pt| pt.residual < 1e-9));
    }

    // The full bookkeeping for a weight drop 14 -> 12 (so r = 1), with
    // local data from an actual pair related by that twist.
    let heavier = synthesize_tate_twist(delta, 1)?;
    let pair = vec![(euler_factor(&heavier, 2)?, euler_factor(delta, 2)?)];
    let report = tate_twist_obstruction(14, 12, 1, &pair)?;
    println!("\n{report}");
    assert!(!report.r_admissible);

    // Strong witnesses: lattice zeros where the rational side is far
    // from zero, so nothing on the Euler side can supply the zero.
    let forced = report.forced_term.as_ref().expect("r > 0 forces a term");
    let strong = forced.witnesses.iter().filter(|w| w.lhs_nonzero).count();
    println!("{strong} lattice zeros meet |rational side| > 1e-6");

    // Sweep the corpus weights: the verdict flips exactly at r = 0.
    println!("\nadmissibility across weight gaps:");
    for (k1, k2) in [(12u32, 12u32), (14, 12), (16, 12), (18, 16), (22, 22)] {
        let r = (k1 - k2) / 2;
        let verdict = tate_twist_obstruction(k1, k2, r, &[])?;
        println!(
            "  k1 = {k1}, k2 = {k2}, r = {r}: r_admissible = {}",
            verdict.r_admissible
        );
        assert_eq!(verdict.r_admissible, r == 0);
    }
    Ok(())
}
