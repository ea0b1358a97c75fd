//! Three independent routes to the same Hecke eigenvalues: an eta
//! product, the echelonized weight-12 basis, and multiplicative closure
//! from the prime values alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use twistlab::modforms::{
    corpus, find_form, hecke_tp, multiplicative_closure, sturm_bound, victor_miller_basis,
};
use twistlab::series::eta_quotient;

fn main() -> twistlab::Result<()> {
    let precision = 60;

    // Route 1: eta(q)^24 expanded by the pentagonal-number recurrence.
    let from_eta = eta_quotient(&[(1, 24)], precision)?;

    // Route 2: the unique normalized cusp form of weight 12, assembled
    // from (E4^3 - E6^2)/1728 by the echelon-basis construction.
    let from_basis = victor_miller_basis(12, precision)[0].clone();
    assert!(from_eta.agrees_to(&from_basis, precision - 1));
    println!("eta^24 and the echelon basis agree to q^{}", precision - 1);
    println!("  {}", from_eta.truncate(10));

    // Both routes are eigenvectors: T_p f = a_p f, checked coefficientwise.
    let delta = find_form(corpus(), "delta")?;
    for p in [2u64, 3, 5, 7] {
        let image = hecke_tp(&from_eta, 12, 1, p)?;
        let ap = BigRational::from(delta.coefficient(p)?.clone());
        let scaled = from_eta.scale(&ap);
        assert!(image.agrees_to(&scaled, image.precision()));
        println!("T_{p} f = {ap} f  (checked to q^{})", image.precision());
    }

    // A sturm bound's worth of agreement pins the form down; echoes the
    // cutoff the twist search uses.
    println!("sturm bound for weight 12, level 1: {}", sturm_bound(12, 1));

    // Route 3: the recurrences a_{mn} = a_m a_n (coprime) and
    // a_{p^{j+1}} = a_p a_{p^j} - p^{k-1} a_{p^{j-1}} rebuild every
    // coefficient from the primes.
    let closed = multiplicative_closure(delta.bound(), delta.weight(), delta.level(), |p| {
        BigRational::from(delta.coefficient(p).unwrap().clone())
    });
    let rebuilt: Vec<BigInt> = closed.iter().map(|c| c.to_integer()).collect();
    assert_eq!(rebuilt, delta.coefficients());
    println!(
        "multiplicative closure rebuilds all {} stored coefficients",
        delta.bound()
    );

    // Spot check against an independent identity: a_2 a_3 = a_6.
    let product = delta.coefficient(2)?.clone() * delta.coefficient(3)?;
    assert_eq!(&product, delta.coefficient(6)?);
    println!("a_2 a_3 = a_6 = {product}");
    Ok(())
}
