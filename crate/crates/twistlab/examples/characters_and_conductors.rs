//! Dirichlet characters as the detector sees them: enumeration by
//! generator exponents, conductors, value tables in a cyclotomic field,
//! and the rational fast path for real characters.

use twistlab::characters::{enumerate_characters, DirichletCharacter};

fn value_row(chi: &DirichletCharacter) -> String {
    (1..=chi.modulus())
        .map(|n| match chi.rational_value(n) {
            Some(v) => format!("{v:>3}"),
            None => format!("{:>3}", "*"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    // All characters mod 12, in enumeration order. Stars mark values
    // outside Q; columns n with gcd(n, 12) > 1 print 0.
    println!("characters mod 12 (values at n = 1..12):");
    for chi in enumerate_characters(12) {
        println!(
            "  exps {:?}: order {}, conductor {:>2}, primitive {:<5}  {}",
            chi.generator_exponents(),
            chi.order(),
            chi.conductor(),
            chi.is_primitive(),
            value_row(&chi)
        );
    }

    // Conductor = modulus of the primitive character inducing chi. The
    // trivial character mod 12 is induced from modulus 1.
    let trivial = DirichletCharacter::trivial(12);
    assert_eq!(trivial.conductor(), 1);

    // Higher-order values live in Q(zeta): a character mod 5 of order 4
    // takes values in the fourth cyclotomic field.
    let mod5 = enumerate_characters(5);
    let quartic = mod5.iter().find(|chi| chi.order() == 4).unwrap();
    println!("\norder-4 character mod 5, values in Q(zeta_4):");
    for n in 1..5 {
        println!("  chi({n}) = {}", quartic.value(n));
    }
    assert!(!quartic.is_real());
    assert!(quartic.rational_value(2).is_none());

    // Counting: the group mod q has phi(q) characters, always.
    for q in [1u64, 4, 8, 9, 15, 16, 24] {
        let count = enumerate_characters(q).len() as u64;
        assert_eq!(count, twistlab::primes::euler_phi(q));
        println!("mod {q:>2}: {count} characters");
    }
}
