//! Vanishing of Hecke eigenvalues over primes. For the CM forms the
//! zeros fill an exact congruence class (density one half); for the
//! others they stay rare.

use twistlab::comparator::{upper_density, vanishing_set, DEFAULT_CHECKPOINTS, DEFAULT_TAIL_WINDOW};
use twistlab::modforms::{corpus, find_form};

fn main() -> twistlab::Result<()> {
    let x = 10_000;

    println!("density of primes p <= {x} with a_p = 0:");
    for id in ["1.12.delta", "11.2", "20.2", "27.2cm", "32.2cm", "36.2cm"] {
        let f = find_form(corpus(), id)?;
        let zeros = vanishing_set(f, x)?;
        let density = upper_density(
            "vanishing",
            &zeros,
            x,
            DEFAULT_CHECKPOINTS,
            DEFAULT_TAIL_WINDOW,
        )?;
        println!(
            "  {:<12} {:>4} zeros, upper density {:.4}",
            f.id(),
            zeros.len(),
            density.upper_density_estimate.as_f64()
        );
    }

    // The CM zeros are not just frequent, they are exactly the inert
    // congruence class of the CM field.
    let checks: [(&str, u64, u64); 3] = [("27.2cm", 3, 2), ("32.2cm", 4, 3), ("36.2cm", 3, 2)];
    println!("\ncongruence structure of the zero sets:");
    for (id, modulus, class) in checks {
        let f = find_form(corpus(), id)?;
        let zeros = vanishing_set(f, x)?;
        let in_class = zeros.iter().filter(|&&p| p % modulus == class).count();
        let stray: Vec<u64> = zeros
            .iter()
            .copied()
            .filter(|&p| p % modulus != class && f.level() % p != 0)
            .collect();
        println!(
            "  {:<8} zeros at p = {class} mod {modulus}: {in_class} of {}, strays off the class (good p): {stray:?}",
            f.id(),
            zeros.len()
        );
        assert!(stray.is_empty());
    }

    // Converse containment: every good prime in the class is a zero.
    let f = find_form(corpus(), "27.2cm")?;
    let zeros = vanishing_set(f, x)?;
    for p in twistlab::primes::primes_up_to(x) {
        if p % 3 == 2 && f.level() % p != 0 {
            assert!(zeros.binary_search(&p).is_ok());
        }
    }
    println!("\nevery good prime p = 2 mod 3 kills a_p of 27.2cm, with no exceptions");
    Ok(())
}
