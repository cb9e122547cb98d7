//! End-to-end tests of the compiled binary: CSV contract, determinism,
//! config-file mirroring, exit codes, and sweep aggregation.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qwalk-cli"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> (String, String) {
    let out = run(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    (
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn parse_csv(text: &str) -> Vec<(i64, f64, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,P,P_R,P_L"), "header line");
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 4, "row arity in '{line}'");
            (
                fields[0].parse().expect("integer position"),
                fields[1].parse().expect("float P"),
                fields[2].parse().expect("float P_R"),
                fields[3].parse().expect("float P_L"),
            )
        })
        .collect()
}

const SYMMETRIC_INIT: [&str; 5] = ["--init", "0.7071067811865476", "0", "0", "0.7071067811865476"];

#[test]
fn identical_configs_give_byte_identical_csv() {
    let (first, _) = run_ok(&["line", "--steps", "50"]);
    let (second, _) = run_ok(&["line", "--steps", "50"]);
    assert_eq!(first, second);
}

#[test]
fn symmetric_line_run_is_normalized_even_and_mirror_symmetric() {
    let mut args = vec!["line", "--steps", "200"];
    args.extend(SYMMETRIC_INIT);
    let (stdout, stderr) = run_ok(&args);
    let rows = parse_csv(&stdout);
    assert_eq!(rows.len(), 201, "one row per populated position");
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-10, "total probability {total}");
    for &(m, p, p_r, p_l) in &rows {
        assert_eq!(m.rem_euclid(2), 0, "odd position {m} populated at even n");
        assert!((p - (p_r + p_l)).abs() < 1e-15);
        let mirrored = rows.iter().find(|r| r.0 == -m).expect("mirror row").1;
        assert!((p - mirrored).abs() < 1e-12, "asymmetry at m={m}");
    }
    assert!(stderr.contains("# summary"));
    assert!(stderr.contains("std_dev"));
}

#[test]
fn circle_run_emits_one_row_per_ring_site() {
    let mut args = vec!["circle", "--steps", "100", "--M", "30"];
    args.extend(SYMMETRIC_INIT);
    let (stdout, _) = run_ok(&args);
    let rows = parse_csv(&stdout);
    assert_eq!(rows.len(), 61, "2M+1 rows");
    assert_eq!(rows.first().unwrap().0, -30);
    assert_eq!(rows.last().unwrap().0, 30);
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-10, "total probability {total}");
}

#[test]
fn classical_run_matches_the_binomial_spread() {
    let (stdout, _) = run_ok(&["classical", "--steps", "200"]);
    let rows = parse_csv(&stdout);
    let mean: f64 = rows.iter().map(|r| r.0 as f64 * r.1).sum();
    let second: f64 = rows.iter().map(|r| (r.0 as f64).powi(2) * r.1).sum();
    assert!(mean.abs() < 1e-12);
    assert!((second.sqrt() - 200f64.sqrt()).abs() < 1e-9);
    for &(_, p, p_r, p_l) in &rows {
        assert_eq!(p_r, p_l, "classical walk splits each site evenly");
        assert!((p - (p_r + p_l)).abs() < 1e-15);
    }
}

#[test]
fn csv_matches_the_library_distribution() {
    use qwalk::{CoinOperator, CoinState, StepOrdering, WalkState, WalkTopology};
    let (stdout, _) = run_ok(&["line", "--steps", "120", "--init", "1", "0", "0", "0"]);
    let rows = parse_csv(&stdout);

    let dist = WalkState::localized(WalkTopology::Line, 0, CoinState::right_mover())
        .unwrap()
        .evolve(&CoinOperator::hadamard(), StepOrdering::CoinAfterShift, 120)
        .probabilities();
    assert_eq!(rows.len(), dist.len());
    for &(m, p, p_r, p_l) in &rows {
        let expected = dist.get(m).expect("library has the same support");
        assert!((p - expected.p).abs() < 1e-12);
        assert!((p_r - expected.p_r).abs() < 1e-12);
        assert!((p_l - expected.p_l).abs() < 1e-12);
    }
}

#[test]
fn cavity_with_one_fine_shift_reproduces_the_line_walk() {
    let mut walk_args = vec!["line", "--steps", "20"];
    walk_args.extend(SYMMETRIC_INIT);
    let (walk_csv, _) = run_ok(&walk_args);

    let mut cavity_args = vec![
        "cavity",
        "--design",
        "ring-polarization",
        "--steps",
        "20",
        "--f",
        "1",
    ];
    cavity_args.extend(SYMMETRIC_INIT);
    let (cavity_csv, cavity_summary) = run_ok(&cavity_args);

    let walk_rows = parse_csv(&walk_csv);
    let cavity_rows = parse_csv(&cavity_csv);
    assert_eq!(walk_rows.len(), cavity_rows.len());
    for (w, c) in walk_rows.iter().zip(&cavity_rows) {
        assert_eq!(w.0, c.0);
        assert!((w.1 - c.1).abs() < 1e-12, "P differs at m={}", w.0);
    }
    assert!(cavity_summary.contains("roundtrips"));
}

#[test]
fn config_file_and_flags_produce_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let flag_out = dir.path().join("flags.csv");
    let cfg_out = dir.path().join("cfg.csv");

    let mut args = vec!["galton", "--steps", "60", "--delta", "0.6283185307179586"];
    args.extend(["--init", "0.7071067811865476", "0", "0.7071067811865476", "0"]);
    args.extend(["--output", flag_out.to_str().unwrap()]);
    run_ok(&args);

    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# balanced-splitting run\n\
             mode = galton\n\
             steps = 60\n\
             delta = 0.6283185307179586\n\
             init = 0.7071067811865476 0 0.7071067811865476 0\n\
             output = {}\n",
            cfg_out.display()
        ),
    )
    .unwrap();
    run_ok(&["run", "--config", cfg.to_str().unwrap()]);

    let flag_bytes = std::fs::read(&flag_out).unwrap();
    let cfg_bytes = std::fs::read(&cfg_out).unwrap();
    assert!(!flag_bytes.is_empty());
    assert_eq!(flag_bytes, cfg_bytes);
}

#[test]
fn committed_manifests_run_successfully() {
    let manifests = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../manifests");
    let dir = tempfile::tempdir().unwrap();
    let mut found = 0;
    for entry in std::fs::read_dir(&manifests).expect("manifests directory exists") {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            found += 1;
            let out = bin()
                .current_dir(dir.path())
                .args(["run", "--config", path.to_str().unwrap()])
                .output()
                .expect("binary runs");
            assert!(
                out.status.success(),
                "manifest {} failed: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
    assert!(found >= 3, "expected at least three committed manifests, found {found}");
}

#[test]
fn sweep_aggregate_tracks_the_closed_form() {
    let mut args = vec![
        "sweep",
        "--param",
        "delta",
        "--values",
        "0.3141592653589793,0.6283185307179586,0.9424777960769379",
        "--steps",
        "200",
    ];
    args.extend(["--init", "0.7071067811865476", "0", "0.7071067811865476", "0"]);
    let (stdout, _) = run_ok(&args);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("parameter,mean,std_dev,predicted_std_dev"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let (mean, std_dev, predicted) = (row[0], row[1], row[2]);
        assert!(mean.abs() <= 0.02 * 200.0);
        assert!((std_dev - predicted).abs() / predicted < 0.05);
    }
}

#[test]
fn empty_sweep_writes_a_header_only_aggregate() {
    let (stdout, _) = run_ok(&["sweep", "--param", "delta", "--values", "", "--steps", "10"]);
    assert_eq!(stdout, "parameter,mean,std_dev,predicted_std_dev\n");
}

#[test]
fn sweep_reports_per_run_failures_and_keeps_the_rest() {
    let out = run(&[
        "sweep",
        "--param",
        "delta",
        "--values",
        "0.3,1.5707963267948966",
        "--steps",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2), "partial failure exits with the config code");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stdout.lines().count(), 2, "header plus the one successful row");
    assert!(stdout.lines().nth(1).unwrap().starts_with("0.3,"));
    assert!(stderr.contains("sweep run '1.5707963267948966' failed"));
}

#[test]
fn sweep_writes_per_run_files_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("runs");
    let mut args = vec![
        "sweep",
        "--param",
        "steps",
        "--values",
        "10,20",
        "--aggregate",
    ];
    let aggregate = dir.path().join("aggregate.csv");
    args.push(aggregate.to_str().unwrap());
    args.extend(["--output-dir", run_dir.to_str().unwrap()]);
    run_ok(&args);

    let aggregate_text = std::fs::read_to_string(&aggregate).unwrap();
    assert_eq!(aggregate_text.lines().count(), 3);
    for name in ["steps-10.csv", "steps-20.csv"] {
        let text = std::fs::read_to_string(run_dir.join(name)).unwrap();
        assert!(text.starts_with("m,P,P_R,P_L\n"), "{name} has the CSV header");
    }
}

#[test]
fn config_errors_exit_2_and_io_errors_exit_3() {
    for args in [
        vec!["line", "--steps", "5", "--coin", "bogus"],
        vec!["line", "--steps", "5", "--init", "1", "0", "0", "1"], // unnormalized
        vec!["circle", "--steps", "5", "--M", "30", "--origin", "99"],
        vec!["circle", "--steps", "5", "--M", "0"],
        vec!["cavity", "--design", "ring-polarization", "--steps", "5", "--f", "0"],
        vec!["line", "--steps", "5", "--compare-classical", "--origin", "3"],
        vec!["galton", "--steps", "5", "--delta", "1.5707963267948966"], // fine: runs
    ] {
        let out = run(&args);
        let code = out.status.code();
        if args[0] == "galton" {
            // A degenerate angle only disables the prediction, not the run.
            assert_eq!(code, Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        } else {
            assert_eq!(code, Some(2), "{args:?} should be a config error");
            assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
        }
    }

    let out = run(&["line", "--steps", "5", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3), "I/O failure exits 3");

    let out = run(&["run", "--config", "/nonexistent-dir/missing.cfg"]);
    assert_eq!(out.status.code(), Some(3), "unreadable config is an I/O failure");
}
