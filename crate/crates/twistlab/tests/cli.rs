//! End-to-end checks of the binary: verbs, formats, exit codes, the
//! config merge chain, and the coefficient cache.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn twistlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json_report(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(&stdout(out)).expect("json stdout");
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn corpus_list_names_the_builtin_forms() {
    let out = run(&["corpus", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for id in [
        "1.12.delta",
        "1.16",
        "1.18",
        "1.20",
        "1.22",
        "1.26",
        "11.2",
        "20.2",
        "27.2cm",
        "32.2cm",
        "36.2cm",
    ] {
        assert!(text.contains(id), "missing {id} in:\n{text}");
    }

    let out = run(&["corpus", "list", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["command"], "corpus list");
    assert_eq!(v["report"].as_array().unwrap().len(), 11);
}

#[test]
fn compare_self_reports_full_density_and_r_zero() {
    let out = run(&["compare", "--f1", "delta", "--f2", "delta", "--x", "1000", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    let report = &v["report"];
    assert_eq!(report["parity"]["status"], "consistent");
    assert_eq!(report["parity"]["r"], 0);
    let est = &report["density"]["upper_density_estimate"];
    assert_eq!(est["num"], est["den"]);
}

#[test]
fn detect_twist_exit_codes() {
    // Unrelated forms: clean run, no certificate.
    let out = run(&["detect-twist", "--f1", "delta", "--f2", "11.2", "--x", "2000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("no twist relation found"));

    // Self-twist: trivial certificate, verified.
    let out = run(&["detect-twist", "--f1", "delta", "--f2", "delta", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["outcome"]["outcome"], "certified");
    assert_eq!(v["report"]["verification"]["pass"], true);

    // Scan shallower than the sturm target: weak match only.
    let out = run(&[
        "detect-twist",
        "--f1",
        "36.2cm",
        "--f2",
        "36.2cm",
        "--x",
        "7",
        "--modulus-bound",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("weak match"));
}

#[test]
fn density_csv_has_checkpoint_table() {
    let out = run(&["density", "--form", "27.2cm", "--x", "2000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("X,ratio"));
    let first = lines.next().unwrap();
    let (x, ratio) = first.split_once(',').unwrap();
    assert!(x.parse::<u64>().is_ok());
    assert!(ratio.parse::<f64>().is_ok());

    // CSV is only defined for the density-table commands.
    let out = run(&["corpus", "list", "-f", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no CSV rendering"));
}

#[test]
fn gamma_ratio_matches_falling_factorial() {
    let out = run(&["lfunc", "gamma", "--s", "5", "--m", "3", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    let err = v["report"]["relative_error"].as_f64().unwrap();
    assert!(err < 1e-12, "relative error {err}");

    // Gamma poles are refused, not evaluated.
    let out = run(&["lfunc", "gamma", "--s", "0", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstruction_verdict_depends_on_r() {
    let out = run(&["lfunc", "obstruction", "--k1", "14", "--k2", "12", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["r"], 1);
    assert_eq!(v["report"]["r_admissible"], false);

    let out = run(&["lfunc", "obstruction", "--k1", "12", "--k2", "12", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["r_admissible"], true);

    // Odd weight gap has no candidate r at all.
    let out = run(&["lfunc", "obstruction", "--k1", "13", "--k2", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_data_errors_are_distinct() {
    let out = run(&["no-such-verb"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["corpus", "list", "--wat"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("detect-twist"));

    let out = run(&["density", "--form", "no.such.form"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no.such.form"));
}

#[test]
fn config_file_merges_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("custom.conf");
    std::fs::write(
        &conf,
        "# comparison window\ndensity_x = 300\noutput_format = json\n",
    )
    .unwrap();
    let conf = conf.to_str().unwrap();

    let out = run(&["--config", conf, "compare", "--f1", "delta", "--f2", "delta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["x"], 300, "density_x from file sets the cutoff");

    // Flags beat the file: explicit cutoff and format.
    let out = run(&[
        "--config", conf, "compare", "--f1", "delta", "--f2", "delta", "--x", "500", "-f", "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("up to X = 500"));

    // A config file in the working directory is picked up without a flag.
    std::fs::write(dir.path().join("twistlab.conf"), "density_x = 200\n").unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["compare", "--f1", "delta", "--f2", "delta", "-f", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["x"], 200);

    // Unreadable keys are data errors.
    std::fs::write(dir.path().join("bad.conf"), "coefficient_bound = soon\n").unwrap();
    let out = run(&[
        "--config",
        dir.path().join("bad.conf").to_str().unwrap(),
        "corpus",
        "list",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("coefficient_bound"));

    let out = run(&["--config", "/does/not/exist.conf", "corpus", "list"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "-f",
        "json",
        "-o",
        path.to_str().unwrap(),
        "lfunc",
        "lattice",
        "--alpha",
        "2",
        "--p",
        "2",
        "--n-min",
        "0",
        "--n-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn import_export_round_trip_with_user_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let with_cache = |args: &[&str]| {
        bin()
            .env("TWISTLAB_CACHE", cache)
            .args(args)
            .output()
            .unwrap()
    };

    // A minimal record under a fresh id: a_1 = 1, then silence.
    let record = dir.path().join("custom.w12.qexp");
    let mut body = String::from("custom.w12 12 1 false false 100\n1\n");
    body.push_str(&"0\n".repeat(99));
    std::fs::write(&record, &body).unwrap();

    let out = with_cache(&["corpus", "import", "--file", record.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("imported custom.w12"));

    // The imported form joins the listing as a user record.
    let out = with_cache(&["corpus", "list", "-f", "json"]);
    let v = json_report(&out);
    let rows = v["report"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows
        .iter()
        .any(|r| r["id"] == "custom.w12" && r["source"] == "user"));

    // Re-import and builtin-id collisions are rejected.
    let out = with_cache(&["corpus", "import", "--file", record.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("already imported"));

    let clash = dir.path().join("clash.qexp");
    std::fs::write(&clash, "delta 12 1 false false 2\n1\n-24\n").unwrap();
    let out = with_cache(&["corpus", "import", "--file", clash.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("built-in"));

    // Export reproduces the imported file byte for byte.
    let exported = dir.path().join("back.qexp");
    let out = with_cache(&[
        "--bound",
        "100",
        "corpus",
        "export",
        "--form",
        "custom.w12",
        "--out",
        exported.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&exported).unwrap(), body);

    // Asking past the stored bound is a data error.
    let out = with_cache(&[
        "--bound",
        "200",
        "corpus",
        "export",
        "--form",
        "custom.w12",
        "--out",
        exported.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extended_bounds_are_cached_and_checksummed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "compare", "--f1", "delta", "--f2", "1.16", "--x", "10500", "-f", "json",
    ];

    let out = bin().env("TWISTLAB_CACHE", cache).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let cached = dir.path().join("1.12.delta.10500.qexp");
    assert!(cached.exists(), "extended expansion lands in the cache");

    // Second run reuses the cache and agrees exactly.
    let again = bin().env("TWISTLAB_CACHE", cache).args(args).output().unwrap();
    assert_eq!(json_report(&again), json_report(&out));

    // A flipped digit is caught by the checksum, not silently used.
    let text = std::fs::read_to_string(&cached).unwrap();
    let corrupted = text.replacen("-24", "-25", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&cached, corrupted).unwrap();
    let out = bin().env("TWISTLAB_CACHE", cache).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("checksum"));
}

#[test]
fn shift_and_feq_run_from_the_command_line() {
    let out = run(&[
        "lfunc", "shift", "--form", "delta", "--r", "1", "--s", "10", "--cutoff", "3000", "-f",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert!(v["report"]["relative_error"].as_f64().unwrap() < 1e-10);

    let out = run(&["lfunc", "feq", "--form", "delta", "--s", "6", "-f", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert!(v["report"]["residual"].as_f64().unwrap() < 1e-6);

    // Outside the validated strip the command refuses.
    let out = run(&["lfunc", "feq", "--form", "delta", "--s", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_rejects_empty_ranges_and_zero_alpha() {
    let out = run(&[
        "lfunc", "lattice", "--alpha", "2", "--p", "2", "--n-min", "3", "--n-max", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["lfunc", "lattice", "--alpha", "0", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstruction_accepts_corpus_euler_data() {
    let out = run(&[
        "lfunc",
        "obstruction",
        "--k1",
        "12",
        "--k2",
        "12",
        "--f1",
        "delta",
        "--f2",
        "delta",
        "-f",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_report(&out);
    assert_eq!(v["report"]["r_admissible"], true);
    // delta has level one; the auxiliary prime keeps local data nonempty.
    assert_eq!(v["report"]["lattice_terms"][0]["p"], 2);

    // Weights must match the supplied forms.
    let out = run(&[
        "lfunc",
        "obstruction",
        "--k1",
        "14",
        "--k2",
        "12",
        "--f1",
        "delta",
        "--f2",
        "delta",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weight_convention_changes_reported_normalization() {
    let motivic = run(&[
        "compare", "--f1", "delta", "--f2", "delta", "--x", "100", "-f", "json",
    ]);
    let statement = run(&[
        "--weight-convention",
        "statement",
        "compare",
        "--f1",
        "delta",
        "--f2",
        "delta",
        "--x",
        "100",
        "-f",
        "json",
    ]);
    let m = json_report(&motivic)["report"]["sample"][0]["normalized_f1"]
        .as_f64()
        .unwrap();
    let s = json_report(&statement)["report"]["sample"][0]["normalized_f2"]
        .as_f64()
        .unwrap();
    // Same a_2, divided by 2^{11/2} vs 2^6.
    assert!((m / s - 2f64.sqrt()).abs() < 1e-12);

    let out = run(&["--weight-convention", "upside-down", "corpus", "list"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_paths_do_not_touch_the_filesystem() {
    // --help must not require a readable config or cache.
    let out = bin()
        .env("TWISTLAB_CACHE", "/dev/null/not-a-dir")
        .args(["--help"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(env!("CARGO_BIN_EXE_twistlab")).exists());
}
