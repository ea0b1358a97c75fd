//! Walk the built-in corpus: what is stored, how records look on disk,
//! and how far the stored expansions reach.

use twistlab::modforms::{corpus, find_form, read_record_file, write_record_file};

fn main() -> twistlab::Result<()> {
    println!("built-in corpus:");
    for f in corpus() {
        println!(
            "  {:<12} weight {:>2}, level {:>2}, cm {:<5}, sign {:>2}, {} coefficients",
            f.id(),
            f.weight(),
            f.level(),
            f.is_cm(),
            f.fe_sign().map_or("?".into(), |s| format!("{s:+}")),
            f.bound()
        );
    }

    // "delta" is an alias; lookups resolve to the canonical id.
    let delta = find_form(corpus(), "delta")?;
    println!("\nq-expansion of {}:", delta.id());
    println!("  {}", delta.q_expansion().truncate(12));

    println!("\nfirst Hecke eigenvalues of {}:", delta.id());
    for p in [2u64, 3, 5, 7, 11, 13] {
        println!("  a_{p} = {}", delta.coefficient(p)?);
    }

    // Records round-trip through a plain text format: one header line,
    // then one coefficient per line.
    let dir = std::env::temp_dir().join("twistlab-corpus-tour");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("delta.qexp");
    write_record_file(delta, &path)?;
    let back = read_record_file(&path)?;
    assert_eq!(back.coefficients(), delta.coefficients());
    println!(
        "\nwrote and re-read {} ({} bytes) without loss",
        path.display(),
        std::fs::metadata(&path)?.len()
    );
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
