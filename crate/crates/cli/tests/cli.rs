//! End-to-end tests of the torgrow binary: exit codes, CSV shape and
//! determinism, fit round-trips, config error reporting.

use std::path::PathBuf;
use std::process::{Command, Output};

fn torgrow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torgrow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("torgrow-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

const LAMP: &str = "\
[family]
name = lamplighter
m = 2
r = 1

[schedule]
range = 1..6
";

const ESCALATING: &str = "\
[family]
name = lamplighter
m = 2
r = 1

[schedule]
range = 1..8
ideal_rule = unit-plus-power
";

#[test]
fn sequence_is_deterministic_and_well_formed() {
    let cfg = write_temp("lamp.cfg", LAMP);
    let first = torgrow(&["sequence", "--scenario", cfg.to_str().unwrap()]);
    let second = torgrow(&["sequence", "--scenario", cfg.to_str().unwrap(), "--jobs", "3"]);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "identical scenario must give identical CSV bytes regardless of jobs"
    );
    let text = String::from_utf8(first.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,index,a,m,torsion,log2_torsion,ratio,free_rank"
    );
    let torsion: Vec<&str> = lines.map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(torsion, vec!["2", "4", "8", "16", "32", "64"]);
}

#[test]
fn fit_round_trips_the_fitted_base() {
    let cfg = write_temp("fit.cfg", LAMP);
    let csv_path = std::env::temp_dir().join(format!("torgrow-test-{}-fit.csv", std::process::id()));
    let seq = torgrow(&[
        "sequence",
        "--scenario",
        cfg.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(seq.status.success());
    let fit = torgrow(&["fit", csv_path.to_str().unwrap()]);
    assert!(fit.status.success());
    let text = String::from_utf8(fit.stdout).unwrap();

    // bit-for-bit: the CSV path must print the same digits as the
    // in-memory pipeline
    let group = torgrow::metabelian::SplitMetabelianGroup::lamplighter(2, 1).unwrap();
    let schedule = torgrow::verify::scaled_lattice_schedule(&group, 6).unwrap();
    let records = torgrow::verify::growth_sequence(&group, &schedule).unwrap();
    let expected = format!("d_hat={:.14e}", torgrow::verify::fit_exponential_base(&records));
    assert!(
        text.contains(&expected),
        "expected {expected} in output: {text}"
    );
    assert!(text.contains("records=6"));
}

#[test]
fn escalating_schedule_has_decreasing_ratios() {
    let cfg = write_temp("esc.cfg", ESCALATING);
    let out = torgrow(&["sequence", "--scenario", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 8);
    for pair in ratios.windows(2) {
        assert!(pair[1] < pair[0], "ratios must strictly decrease: {ratios:?}");
    }
    // index column carries a * m = 2^n * n
    let indices: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(indices[2], 8 * 3);
}

#[test]
fn compute_prints_invariants() {
    let cfg = write_temp("compute.cfg", LAMP);
    let out = torgrow(&["compute", "--scenario", cfg.to_str().unwrap(), "--step", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("torsion=16"), "{text}");
    assert!(text.contains("index=4"), "{text}");
    assert!(text.contains("free_rank=1"), "{text}");
}

#[test]
fn config_errors_exit_2_with_line_numbers() {
    let cfg = write_temp("broken.cfg", "[family]\nname = lamplighter\nm = two\n");
    let out = torgrow(&["compute", "--scenario", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "stderr: {err}");

    let empty = write_temp("empty.cfg", "[family]\nname = lamplighter\nm = 2\n");
    let out = torgrow(&["sequence", "--scenario", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_2() {
    let out = torgrow(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown suite"));
}

#[test]
fn verify_commutator_suite_holds() {
    let out = torgrow(&["verify", "--suite", "commutator", "--seed", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# suite=commutator seed=9"));
    assert!(text.contains("all hold"));
}

#[test]
fn malformed_csv_reports_row() {
    let bad = write_temp(
        "bad.csv",
        "step,index,a,m,torsion,log2_torsion,ratio,free_rank\n1,1,1,1,notanumber,0,0,1\n",
    );
    let out = torgrow(&["fit", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 2"), "stderr: {err}");
}
