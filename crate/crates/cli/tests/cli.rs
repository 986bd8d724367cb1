//! End-to-end tests of the `speedclean` binary and the file formats.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use speedclean::quality;
use speedclean_cli::csvio;

const JUMP_SERIES_CSV: &str = "timestamp,dim_1,dim_2\n\
1,1,1\n\
2,1.8,1.8\n\
3,2.6,1\n\
4,3.4,1\n\
5,4.5,1\n\
6,5.5,1\n\
7,6.4,1\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_speedclean"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir =
            std::env::temp_dir().join(format!("speedclean-test-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn clean_global_repairs_golden_rows() {
    let dir = TempDir::new("clean-global");
    let input = dir.path("in.csv");
    let output = dir.path("out.csv");
    fs::write(&input, JUMP_SERIES_CSV).unwrap();

    let out = run(&[
        "clean",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--algorithm",
        "global",
        "--speed",
        "1",
        "--window",
        "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("repair_count: 2"), "{text}");

    let written = fs::read_to_string(&output).unwrap();
    let rows: Vec<&str> = written.lines().collect();
    assert_eq!(rows[2], "2,1.8,1");
    assert_eq!(rows[4], "4,3.55,1");
    assert_eq!(rows[1], "1,1,1");
    assert_eq!(rows[3], "3,2.6,1");
}

#[test]
fn clean_on_satisfying_file_is_identity() {
    let dir = TempDir::new("clean-noop");
    let input = dir.path("in.csv");
    fs::write(&input, JUMP_SERIES_CSV).unwrap();

    for algorithm in ["global", "local", "cluster", "adaptive"] {
        let output = dir.path(&format!("out-{algorithm}.csv"));
        let out = run(&[
            "clean",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
            "--algorithm",
            algorithm,
            "--speed",
            "2",
            "--window",
            "4",
        ]);
        assert!(out.status.success(), "{algorithm}: {}", stderr(&out));
        assert!(stdout(&out).contains("repair_count: 0"), "{algorithm}");
        assert_eq!(
            fs::read_to_string(&output).unwrap(),
            JUMP_SERIES_CSV,
            "{algorithm} altered a satisfying file"
        );
    }
}

#[test]
fn clean_rejects_malformed_row_with_diagnostics() {
    let dir = TempDir::new("clean-bad");
    let input = dir.path("in.csv");
    fs::write(&input, "timestamp,dim_1\n1,0\n2,not-a-number\n").unwrap();
    let out = run(&[
        "clean",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path("out.csv").to_str().unwrap(),
        "--algorithm",
        "local",
        "--speed",
        "1",
        "--window",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("not-a-number"), "{err}");
}

#[test]
fn clean_rejects_invalid_config() {
    let dir = TempDir::new("clean-badcfg");
    let input = dir.path("in.csv");
    fs::write(&input, JUMP_SERIES_CSV).unwrap();
    let out = run(&[
        "clean",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path("out.csv").to_str().unwrap(),
        "--algorithm",
        "global",
        "--speed",
        "0",
        "--window",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("s_max"));
}

#[test]
fn unknown_flag_exits_2() {
    let out = run(&["clean", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inject_zero_rate_copies_input() {
    let dir = TempDir::new("inject-zero");
    let input = dir.path("in.csv");
    fs::write(&input, JUMP_SERIES_CSV).unwrap();
    let dirty = dir.path("dirty.csv");
    let index = dir.path("err.csv");
    let out = run(&[
        "inject",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dirty.to_str().unwrap(),
        "--error-index",
        index.to_str().unwrap(),
        "--error-rate",
        "0",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&dirty).unwrap(), JUMP_SERIES_CSV);
    assert_eq!(fs::read_to_string(&index).unwrap(), "index,dimension\n");
}

#[test]
fn inject_is_deterministic_and_counts_match() {
    let dir = TempDir::new("inject-det");
    let input = dir.path("in.csv");

    // 1000-point synthetic truth written through the same CSV layer.
    let truth = speedclean_cli::synth::bounded_walk(1000, 2, 99, 1.0, 40.0);
    fs::write(&input, csvio::series_to_csv(&truth)).unwrap();

    let mut outputs = Vec::new();
    for round in 0..2 {
        let dirty = dir.path(&format!("dirty-{round}.csv"));
        let index = dir.path(&format!("err-{round}.csv"));
        let out = run(&[
            "inject",
            "--input",
            input.to_str().unwrap(),
            "--output",
            dirty.to_str().unwrap(),
            "--error-index",
            index.to_str().unwrap(),
            "--error-rate",
            "0.1",
            "--pattern",
            "together",
            "--seed",
            "7",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        outputs.push((fs::read(&dirty).unwrap(), fs::read(&index).unwrap()));
    }
    assert_eq!(
        outputs[0], outputs[1],
        "same seed must give identical bytes"
    );

    let index_text = String::from_utf8(outputs[0].1.clone()).unwrap();
    // 100 points x 2 dimensions, plus the header line.
    assert_eq!(index_text.lines().count(), 201);
}

#[test]
fn evaluate_reports_and_appends_csv() {
    let dir = TempDir::new("evaluate");
    let truth_path = dir.path("truth.csv");
    let dirty_path = dir.path("dirty.csv");
    let repaired_path = dir.path("repaired.csv");

    let truth = speedclean_cli::synth::bounded_walk(500, 2, 4, 1.0, 40.0);
    let spec = quality::ErrorSpec::new(0.1, quality::ErrorPattern::Together, 4);
    let dirty = quality::inject_errors(&truth, &spec).unwrap().dirty;
    let c = speedclean::SpeedConstraint::new(1.2, 5.0).unwrap();
    let repaired = speedclean::cluster::clean(&dirty, &c).repaired;

    fs::write(&truth_path, csvio::series_to_csv(&truth)).unwrap();
    fs::write(&dirty_path, csvio::series_to_csv(&dirty)).unwrap();
    fs::write(&repaired_path, csvio::series_to_csv(&repaired)).unwrap();

    let csv_out = dir.path("rows.csv");
    let args = [
        "evaluate",
        "--truth",
        truth_path.to_str().unwrap(),
        "--dirty",
        dirty_path.to_str().unwrap(),
        "--repaired",
        repaired_path.to_str().unwrap(),
        "--csv-out",
        csv_out.to_str().unwrap(),
        "--algorithm",
        "cluster",
        "--error-rate",
        "0.1",
        "--pattern",
        "together",
        "--seed",
        "4",
    ];
    let out = run(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rmse_dirty:"), "{text}");
    assert!(text.contains("rmse_repaired:"), "{text}");
    assert!(text.contains("repair_distance:"), "{text}");
    assert!(text.contains("repair_number:"), "{text}");

    // Second invocation appends a row without repeating the header.
    let out = run(&args);
    assert!(out.status.success());
    let rows = fs::read_to_string(&csv_out).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("algorithm,n,D,"));
    assert_eq!(lines[1], lines[2]);
    assert!(lines[1].starts_with("cluster,500,2,0.1,together,4,"));
}

#[test]
fn evaluate_identity_cases() {
    let dir = TempDir::new("evaluate-id");
    let path = dir.path("series.csv");
    fs::write(&path, JUMP_SERIES_CSV).unwrap();
    // truth = dirty = repaired: both RMSEs and the repair number are zero.
    let out = run(&[
        "evaluate",
        "--truth",
        path.to_str().unwrap(),
        "--dirty",
        path.to_str().unwrap(),
        "--repaired",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rmse_repaired: 0\n"), "{text}");
    assert!(text.contains("repair_number: 0\n"), "{text}");
    assert!(text.contains("repair_count: 0\n"), "{text}");
}

#[test]
fn evaluate_rejects_misaligned_files() {
    let dir = TempDir::new("evaluate-bad");
    let a = dir.path("a.csv");
    let b = dir.path("b.csv");
    fs::write(&a, JUMP_SERIES_CSV).unwrap();
    fs::write(&b, "timestamp,dim_1,dim_2\n1,1,1\n2,1.8,1.8\n").unwrap();
    let out = run(&[
        "evaluate",
        "--truth",
        a.to_str().unwrap(),
        "--dirty",
        b.to_str().unwrap(),
        "--repaired",
        a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not aligned"));
}

#[test]
fn bench_empty_sizes_prints_header_only() {
    let out = run(&["bench", "--sizes", ""]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "algorithm,n,dimension,elapsed_ms\n");
}

#[test]
fn bench_emits_one_row_per_algorithm_and_size() {
    let out = run(&[
        "bench",
        "--sizes",
        "200,400",
        "--algorithms",
        "local,cluster",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("local,200,3,"));
    assert!(lines[2].starts_with("cluster,200,3,"));
    assert!(lines[3].starts_with("local,400,3,"));
    assert!(lines[4].starts_with("cluster,400,3,"));
}

#[test]
fn adaptive_trace_file_lists_constraint_changes() {
    let dir = TempDir::new("trace");
    let input = dir.path("in.csv");

    // Two-regime stream: the adaptive cleaner must record at least one
    // constraint change after the switch.
    let ts = speedclean_cli::synth::two_regime_walk(1200, 2, 11, 0.5, 1.5, 600, 60.0);
    fs::write(&input, csvio::series_to_csv(&ts)).unwrap();
    let trace = dir.path("trace.csv");
    let out = run(&[
        "clean",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path("out.csv").to_str().unwrap(),
        "--algorithm",
        "adaptive",
        "--speed",
        "0.55",
        "--window",
        "5",
        "--interval",
        "150",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "timestamp,s_max");
    assert!(lines.len() >= 2, "expected at least one constraint change");
    let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    assert!(first > 600.0);
}

#[test]
fn evaluate_golden_report() {
    // Seeded end-to-end fixture; the expected block is frozen and each
    // number was cross-checked by an independent script reading the CSVs.
    let dir = TempDir::new("golden-report");
    let truth = speedclean_cli::synth::bounded_walk(100, 2, 31, 1.0, 50.0);
    let spec = quality::ErrorSpec::new(0.1, quality::ErrorPattern::Together, 31);
    let dirty = quality::inject_errors(&truth, &spec).unwrap().dirty;
    let c = speedclean::SpeedConstraint::new(1.2, 5.0).unwrap();
    let repaired = speedclean::cluster::clean(&dirty, &c).repaired;

    let truth_path = dir.path("truth.csv");
    let dirty_path = dir.path("dirty.csv");
    let repaired_path = dir.path("repaired.csv");
    fs::write(&truth_path, csvio::series_to_csv(&truth)).unwrap();
    fs::write(&dirty_path, csvio::series_to_csv(&dirty)).unwrap();
    fs::write(&repaired_path, csvio::series_to_csv(&repaired)).unwrap();

    let out = run(&[
        "evaluate",
        "--truth",
        truth_path.to_str().unwrap(),
        "--dirty",
        dirty_path.to_str().unwrap(),
        "--repaired",
        repaired_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "rmse_dirty: 0.963621575298\n\
         rmse_repaired: 0.253689998227\n\
         repair_distance: 0.274795315122\n\
         repair_number: 0.09\n\
         repair_count: 9\n"
    );
}

#[test]
fn global_reduces_rmse_on_synthetic_fixture() {
    // 1k-point walk, 10% whole-point errors: the batch cleaner must bring
    // the output closer to the truth than the corrupted input.
    let truth = speedclean_cli::synth::bounded_walk(1000, 2, 62, 1.0, 50.0);
    let spec = quality::ErrorSpec::new(0.1, quality::ErrorPattern::Together, 62);
    let dirty = quality::inject_errors(&truth, &spec).unwrap().dirty;
    let c = speedclean::SpeedConstraint::new(1.2, 5.0).unwrap();
    let repaired = speedclean::global::clean(&dirty, &c).repaired;
    let rmse_dirty = quality::rmse(&dirty, &truth).unwrap();
    let rmse_repaired = quality::rmse(&repaired, &truth).unwrap();
    assert!(
        rmse_repaired < rmse_dirty,
        "rmse {rmse_repaired} not below dirty {rmse_dirty}"
    );
}

#[test]
fn harness_rmse_regression() {
    // Frozen against an independent script computing RMSE from the emitted
    // CSV files.
    let truth = speedclean_cli::synth::bounded_walk(100, 2, 31, 1.0, 50.0);
    let spec = quality::ErrorSpec::new(0.1, quality::ErrorPattern::Together, 31);
    let dirty = quality::inject_errors(&truth, &spec).unwrap().dirty;
    let value = quality::rmse(&dirty, &truth).unwrap();
    assert!((value - 0.963621575297485).abs() < 1e-9, "got {value}");
}

#[test]
fn series_round_trip_preserves_12_digits() {
    let truth = speedclean_cli::synth::bounded_walk(200, 3, 12345, 1.0, 50.0);
    let text = csvio::series_to_csv(&truth);
    let reparsed = csvio::parse_series(&text, Path::new("roundtrip.csv")).unwrap();
    assert_eq!(reparsed.len(), truth.len());
    for (a, b) in truth.iter().zip(reparsed.iter()) {
        for (x, y) in a.values.iter().zip(&b.values) {
            let scale = x.abs().max(1e-12);
            assert!(((x - y) / scale).abs() < 1e-11, "value drifted: {x} vs {y}");
        }
    }
    // Emitting the reparsed series reproduces the text byte for byte.
    assert_eq!(csvio::series_to_csv(&reparsed), text);
}
