//! Numerics around the completed L-function: the gamma-factor ratio,
//! the shift identity relating a twist to a translate, and the
//! functional equation Lambda(s) = sign * Lambda(k - s).

use num_complex::Complex64;
use twistlab::lfunc::{
    calibrate_sign, functional_equation_residual, gamma_ratio_check, l_shift_identity_check,
};
use twistlab::modforms::{corpus, find_form};

fn main() -> twistlab::Result<()> {
    // Gamma(s) / Gamma(s - m) equals the falling factorial; this is the
    // identity that collapses the archimedean factors of a Tate twist.
    let check = gamma_ratio_check(Complex64::new(3.7, 1.2), 4)?;
    println!(
        "Gamma ratio at s = {}: relative error {:.2e}",
        check.s, check.relative_error
    );

    // The Dirichlet-series side of the same collapse: twisting the
    // coefficients by n^r just translates the argument.
    let delta = find_form(corpus(), "delta")?;
    for r in [0u32, 1, 2] {
        let s = Complex64::new(10.0 + f64::from(r), 0.75);
        let err = l_shift_identity_check(delta, r, 1, s, 5_000)?;
        println!("shift identity, r = {r}: relative error {err:.2e}");
    }

    // Functional equation at and near the center, smoothed sum on both
    // sides. The center for weight 12 is s = 6.
    for (s, terms) in [(6.0, 1_000u64), (6.5, 1_000), (5.5, 1_000)] {
        let residual = functional_equation_residual(delta, Complex64::new(s, 0.0), terms)?;
        println!(
            "|Lambda(s) - sign Lambda(12 - s)| / max(...) at s = {s}: {residual:.2e}"
        );
    }

    // The stored signs are reproducible from the numerics alone.
    println!("\nfunctional-equation signs, recomputed vs stored:");
    for f in corpus() {
        let computed = calibrate_sign(f, 2_000)?;
        let stored = f.fe_sign().expect("corpus forms carry signs");
        println!(
            "  {:<12} computed {computed:+}, stored {stored:+}",
            f.id()
        );
        assert_eq!(computed, stored);
    }

    // Feeding the wrong sign leaves a residual of order one. The check
    // genuinely distinguishes the two.
    let odd = find_form(corpus(), "1.18")?;
    let mut flipped = odd.clone();
    flipped.set_fe_sign(Some(1));
    let honest = functional_equation_residual(odd, Complex64::new(9.5, 0.0), 4_000)?;
    let wrong = functional_equation_residual(&flipped, Complex64::new(9.5, 0.0), 4_000)?;
    println!("\n1.18 off center: residual {honest:.2e} with its sign, {wrong:.2e} with the sign flipped");
    assert!(honest < 1e-4 && wrong > 1.0);
    Ok(())
}
