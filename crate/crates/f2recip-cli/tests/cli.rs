//! End-to-end tests of the binary: argument handling, exit codes, stream
//! separation, round trips through the binary format, and byte-level
//! determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn f2recip(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_f2recip"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    f2recip(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).expect("utf-8 stdout")
}

/// Runs the binary feeding `input` to stdin.
fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = f2recip(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input)
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

#[test]
fn gen_emits_expected_indices() {
    let output = run(&["gen", "sigma", "--precision", "32", "--format", "indices"]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), "0\n1\n2\n4\n8\n9\n16\n18\n25\n");
}

#[test]
fn gen_invert_round_trips_to_reciprocal_kind() {
    for (kind, reciprocal) in [("sigma", "sigma-bar"), ("pentagonal", "partitions")] {
        let packed = run(&["gen", kind, "--precision", "4096", "--format", "f2s1"]);
        assert!(packed.status.success());
        let inverted = run_with_stdin(&["invert", "--format", "indices"], &packed.stdout);
        assert!(inverted.status.success());

        let direct = run(&["gen", reciprocal, "--precision", "4096", "--format", "indices"]);
        assert!(direct.status.success());
        assert_eq!(
            inverted.stdout, direct.stdout,
            "{kind} inverted should equal {reciprocal} generated"
        );
    }
}

#[test]
fn invert_round_trips_binary_format() {
    let packed = run(&["gen", "sigma", "--precision", "2048", "--format", "f2s1"]);
    let once = run_with_stdin(&["invert", "--format", "f2s1"], &packed.stdout);
    let twice = run_with_stdin(&["invert", "--format", "f2s1"], &once.stdout);
    assert!(twice.status.success());
    assert_eq!(twice.stdout, packed.stdout, "double inversion is the identity");
}

#[test]
fn invert_rejects_series_without_constant_term() {
    let packed = run(&["gen", "odd-squares", "--precision", "64", "--format", "f2s1"]);
    assert!(packed.status.success());
    let inverted = run_with_stdin(&["invert"], &packed.stdout);
    assert_eq!(inverted.status.code(), Some(1));
    assert!(inverted.stdout.is_empty());
    assert!(!inverted.stderr.is_empty(), "diagnostic expected on stderr");
}

#[test]
fn verify_single_identity_passes() {
    let output = run(&["verify", "L3_SIGMA_DECOMP", "--precision", "1024"]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), "L3_SIGMA_DECOMP,1024,PASS\n");
}

#[test]
fn verify_all_reports_every_group_in_order() {
    let output = run(&["verify", "all", "--precision", "1024"]);
    assert!(output.status.success());
    let lines: Vec<&str> = stdout_of(&output).lines().collect();
    assert_eq!(lines.len(), 28);
    assert_eq!(lines[0], "L3_SIGMA_DECOMP,1024,PASS");
    assert!(lines[..17].iter().all(|l| l.ends_with(",1024,PASS")));
    assert!(lines[17..23].iter().all(|l| l.starts_with("SIGMA_AT_")));
    assert_eq!(lines[23], "P_RECURRENCE,2000,PASS");
    assert_eq!(lines[24], "SIGMA_RECURRENCE,2000,PASS");
    assert_eq!(lines[25], "SIGMA3_PRIME_POWER_CHARACTERIZATION,1024,PASS");
    assert_eq!(lines[26], "LL_SIGMA_VS_W,1000,MATCH");
    assert_eq!(lines[27], "LL_SIGMA_VS_C,1000,DIVERGES,k=2:5!=2");
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "L3_SIGMA_DECOMP", "--precision", "0"],
        &["verify", "NO_SUCH_IDENTITY", "--precision", "64"],
        &["verify", "T12_GK_EVEN", "--k", "2", "--precision", "64"],
        &["gen", "fibonacci", "--precision", "64"],
        &["gen", "sigma"],
        &["oeis-check", "12345"],
        &["recip-experiment", "--rho", "1.5"],
        &["density", "sigma", "--precision", "1"],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(output.status.code(), Some(2), "args: {args:?}");
        assert!(!output.stderr.is_empty(), "args: {args:?}");
    }
}

#[test]
fn density_csv_has_residue_columns() {
    let output = run(&["density", "sigma-bar", "--precision", "512", "--modulus", "8"]);
    assert!(output.status.success());
    let lines: Vec<&str> = stdout_of(&output).lines().collect();
    assert_eq!(
        lines[0],
        "n,count,density,class0,class1,class2,class3,class4,class5,class6,class7"
    );
    assert_eq!(lines.len(), 1 + 10, "checkpoints 1,2,...,256,511");
    assert!(lines[1].starts_with("1,2,1.00000000,"));
}

#[test]
fn beatty_table_is_deterministic_csv() {
    let first = run(&["beatty", "--count", "500"]);
    let second = run(&["beatty", "--count", "500"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let lines: Vec<&str> = stdout_of(&first).lines().collect();
    assert_eq!(lines[0], "k,kind,value");
    assert_eq!(lines.len(), 1 + 6 * 500);

    let only_w = run(&["beatty", "--count", "5", "--kind", "w"]);
    assert_eq!(
        stdout_of(&only_w),
        "k,kind,value\n1,w,1\n2,w,5\n3,w,8\n4,w,11\n5,w,15\n"
    );
}

#[test]
fn oeis_check_covers_all_fixtures_by_default() {
    let cache = tempfile::tempdir().unwrap();
    let output = run(&[
        "oeis-check",
        "--cache-dir",
        cache.path().to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let lines: Vec<&str> = stdout_of(&output).lines().collect();
    assert_eq!(lines[0], "a_number,matched,first_mismatch_index");
    assert_eq!(lines.len(), 1 + 14);
    for line in &lines[1..] {
        assert!(line.ends_with(','), "no mismatch index expected: {line}");
    }
}

#[test]
fn oeis_check_flags_mismatches_with_exit_one() {
    let cache = tempfile::tempdir().unwrap();
    std::fs::write(cache.path().join("b001954.txt"), "1 1\n2 5\n3 9\n").unwrap();
    let output = run(&[
        "oeis-check",
        "A001954",
        "--cache-dir",
        cache.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let lines: Vec<&str> = stdout_of(&output).lines().collect();
    assert_eq!(lines[1], "A001954,2,3", "two terms match, index 3 differs");
}

#[test]
fn experiment_is_seed_deterministic() {
    let args = &[
        "recip-experiment",
        "--trials",
        "5",
        "--precision",
        "4096",
        "--seed",
        "7",
    ];
    let first = run(args);
    let second = run(args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let lines: Vec<&str> = stdout_of(&first).lines().collect();
    assert_eq!(lines[0], "trial,density");
    assert_eq!(lines.len(), 6);
    assert!(
        std::str::from_utf8(&first.stderr).unwrap().contains("mean density over 5 trials"),
        "mean goes to the diagnostic stream"
    );

    let reseeded = run(&[
        "recip-experiment",
        "--trials",
        "5",
        "--precision",
        "4096",
        "--seed",
        "8",
    ]);
    assert_ne!(first.stdout, reseeded.stdout, "different seed, different draws");
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.f2s1");
    let to_file = run(&[
        "gen",
        "triangular",
        "--precision",
        "1000",
        "--format",
        "f2s1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());

    let to_stdout = run(&["gen", "triangular", "--precision", "1000", "--format", "f2s1"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}
