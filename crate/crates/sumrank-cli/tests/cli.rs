use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn sumrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumrank")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = sumrank(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sumrank-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sphere_count_golden() {
    let out = stdout(&["sphere", "count", "--q", "2", "--m", "2", "--n", "4", "--ell", "2", "--t", "2"]);
    assert_eq!(out, golden("sphere_count.txt"));
    assert_eq!(out.lines().next(), Some("93"));
}

#[test]
fn sphere_count_zero_weight() {
    let out = stdout(&["sphere", "count", "--q", "2", "--m", "2", "--n", "4", "--ell", "2", "--t", "0"]);
    assert_eq!(out.lines().next(), Some("1"));
}

#[test]
fn sphere_bound_sweep() {
    let out = stdout(&["sphere", "bound", "--q", "2", "--m", "40", "--n", "60", "--t", "10", "--all-ell"]);
    assert_eq!(out, golden("sphere_bound_fig1.csv"));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[2] >= cells[1], "{row}");
    }
}

#[test]
fn sample_error_golden() {
    let args = ["sample", "error", "--q", "2", "--m", "2", "--n", "4", "--ell", "2", "--t", "1", "--count", "3", "--seed", "7"];
    let out = stdout(&args);
    assert_eq!(out, golden("sample_error.txt"));
    assert_eq!(out.lines().count(), 3);
    assert_eq!(out, stdout(&args));
}

#[test]
fn sample_support_golden() {
    let args = ["sample", "support", "--q", "2", "--m", "2", "--n", "4", "--ell", "2", "--t", "2", "--s", "3", "--count", "2", "--seed", "3"];
    assert_eq!(stdout(&args), golden("sample_support.txt"));
}

#[test]
fn decode_golden() {
    let args = ["decode", "--q", "2", "--m", "4", "--n", "4", "--ell", "2", "--k", "1", "--t", "1", "--s", "2", "--trials", "50", "--seed", "1"];
    let out = stdout(&args);
    assert_eq!(out, golden("decode.txt"));
    assert!(out.contains("mean_iterations="));
    assert!(out.contains("success_rate=1.0000"));
}

#[test]
fn decode_roundtrips_code_and_writes_trials() {
    let code = tmp("code.txt");
    let csv = tmp("trials.csv");
    let c = code.to_str().unwrap();
    let first = stdout(&[
        "decode", "--q", "2", "--m", "4", "--n", "4", "--ell", "2", "--k", "1", "--t", "1", "--trials", "20", "--seed", "5",
        "--write-code", c, "--trials-csv", csv.to_str().unwrap(),
    ]);
    let again = stdout(&["decode", "--code", c, "--ell", "2", "--t", "1", "--trials", "20", "--seed", "5"]);
    assert_eq!(first, again);
    let trials = fs::read_to_string(&csv).unwrap();
    assert!(trials.starts_with("seed,trial,iterations,success,miss,nonunique,weight_excess\n"));
    assert_eq!(trials.lines().count(), 21);
}

#[test]
fn reduce_demo_golden() {
    let out = stdout(&["reduce", "demo", "--n", "4", "--ell", "2", "--m", "8", "--trials", "100", "--seed", "2"]);
    assert_eq!(out, golden("reduce_demo.txt"));
}

#[test]
fn lp_optimal_golden() {
    let out = stdout(&["lp-optimal", "--zeta", "1", "--ell", "2", "--t", "1", "--s", "1"]);
    assert_eq!(out, golden("lp_optimal.txt"));
    assert!(out.starts_with("xi=1/2\n"));
}

#[test]
fn workfactor_figure2() {
    let out = stdout(&["workfactor", "--figure", "2"]);
    assert_eq!(out, golden("workfactor_fig2.csv"));
    for row in out.lines().skip(1) {
        let cells: Vec<&str> = row.split(',').collect();
        let w_code: f64 = cells[10].parse().unwrap();
        assert!((w_code - 620.0).abs() <= 1.0);
        let lb: f64 = cells[7].parse().unwrap();
        let ub: f64 = cells[8].parse().unwrap();
        let simple: f64 = cells[9].parse().unwrap();
        assert!(lb <= ub && ub <= simple, "{row}");
    }
}

#[test]
fn workfactor_figure4_marks_infeasible_row() {
    let out = sumrank(&["workfactor", "--figure", "4", "--ell", "1,2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row1 = text.lines().nth(1).unwrap();
    assert!(row1.starts_with("2,25,60,20,1,30,30,,,,"), "{row1}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("ell=1 is infeasible"));
}

#[test]
fn out_flag_writes_file() {
    let path = tmp("count.txt");
    let out = stdout(&["sphere", "count", "--q", "2", "--m", "2", "--n", "4", "--ell", "2", "--t", "2", "--out", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap(), golden("sphere_count.txt"));
}

#[test]
fn config_file_fills_missing_flags() {
    let cfg = tmp("sphere.cfg");
    fs::write(&cfg, "# sphere parameters\nq = 2\nm = 2\nn = 4\nell = 2\nt = 0\n").unwrap();
    let out = stdout(&["sphere", "count", "--config", cfg.to_str().unwrap(), "--t", "2"]);
    assert_eq!(out, golden("sphere_count.txt"));
}

#[test]
fn thread_count_does_not_change_output() {
    let base = ["reduce", "demo", "--trials", "30", "--seed", "4"];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn bad_input_exits_nonzero() {
    for args in [
        vec!["sphere", "count", "--bogus"],
        vec!["sphere", "count", "--q", "2", "--m", "2", "--n", "4"],
        vec!["sphere", "count", "--q", "6", "--m", "1", "--n", "1", "--t", "1"],
        vec!["sphere", "count", "--q", "2", "--m", "2", "--n", "4", "--ell", "3", "--t", "1"],
        vec!["workfactor", "--figure", "5"],
        vec!["sample", "error", "--q", "2", "--m", "2", "--n", "4", "--t", "x"],
        vec!["frobnicate"],
    ] {
        let out = sumrank(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
        assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
    }
}
