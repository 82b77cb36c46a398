use std::path::{Path, PathBuf};
use std::process::Command;

use williamson::{BoundReport, Matrix};
use williamson_cli::{
    emit_report, format_matrix, parse_matrix, run, Format, ParseError, ReportRow, CSV_HEADER,
};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("williamson").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Compares with a stored file; `UPDATE_GOLDEN=1` rewrites it instead.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn golden_spectrum() {
    let input = golden("two_mode.txt");
    let (code, out, _) = run_args(&["spectrum", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_golden("spectrum.out", &out);
}

#[test]
fn golden_counterexample() {
    let (code, out, _) = run_args(&["counterexample", "--x", "33", "--eps", "0.05", "--c", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("fires=true\n"));
    assert_golden("counterexample.out", &out);
}

#[test]
fn golden_sweep() {
    let args = ["sweep", "--seed", "0", "--bound", "spectrum", "--format", "csv", "--points", "5"];
    let (code, out, _) = run_args(&args);
    assert_eq!(code, 0);
    assert_golden("sweep_seed0.csv", &out);
    assert_eq!(run_args(&args).1, out);
}

#[test]
fn binary_matches_library() {
    let input = golden("two_mode.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_williamson"))
        .args(["spectrum", input.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        std::fs::read_to_string(golden("spectrum.out")).unwrap()
    );
}

#[test]
fn spectrum_of_diag_nine_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "9 0\n0 1\n");
    assert_eq!(run_args(&["spectrum", &m]), (0, "3\n".to_string(), String::new()));
}

#[test]
fn entropy_of_vacuum_and_thermal() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "1 0\n0 1\n");
    let (code, out, _) = run_args(&["entropy", &g]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("0"));
    let t = write(dir.path(), "t.txt", "3 0 0 0\n0 1 0 0\n0 0 3 0\n0 0 0 1\n");
    let (_, out, _) = run_args(&["entropy", &t, "--bits", "--modes", "0"]);
    let h: f64 = out.lines().next().unwrap().parse().unwrap();
    assert!((h - 2.0).abs() < 1e-12);
}

#[test]
fn decompose_writes_loadable_s() {
    let dir = tempfile::tempdir().unwrap();
    let s_path = dir.path().join("s.txt");
    let input = golden("two_mode.txt");
    let (code, out, _) = run_args(&[
        "decompose",
        input.to_str().unwrap(),
        "--write-s",
        s_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let s = parse_matrix(&std::fs::read_to_string(&s_path).unwrap()).unwrap();
    let f = williamson::williamson(&parse_matrix(&std::fs::read_to_string(&input).unwrap()).unwrap())
        .unwrap();
    assert_eq!(s, f.s);
}

#[test]
fn check_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "2 0.5 0 0\n0.5 3 0 0\n0 0 1 0\n0 0 0 4\n");
    let e = write(dir.path(), "e.txt", "0 1 0 0\n1 0 0 0\n0 0 0 1\n0 0 1 0\n");
    let (code, out, _) = run_args(&["check", "spectrum", &m, &e, "--eps", "0.01", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with(CSV_HEADER));
    let (code, _, err) = run_args(&["check", "gram", &m, &e]);
    assert_eq!(code, 1);
    assert!(err.contains("--eps"));
    let (code, out, _) = run_args(&["check", "diagonalizer", &m, &e, "--eps", "1e-6"]);
    assert_eq!(code, 0);
    assert!(out.contains("holds=true"));
    let (code, _, _) = run_args(&["check", "projection", &m, &m, "--first-range", "0..1", "--second-range", "2..4"]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "r.txt", "1 2\n3\n");
    let (code, _, err) = run_args(&["spectrum", &ragged]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"));
    assert_eq!(run_args(&["frobnicate"]).0, 1);
    assert_eq!(run_args(&["spectrum", "/nonexistent/m.txt"]).0, 1);
    let odd = write(dir.path(), "o.txt", "1 0 0\n0 1 0\n0 0 1\n");
    assert_eq!(run_args(&["spectrum", &odd]).0, 1);
    assert_eq!(run_args(&["--norm", "max", "spectrum", &odd]).0, 1);
    assert_eq!(run_args(&["--help"]).0, 0);
}

#[test]
fn parse_examples() {
    assert_eq!(
        parse_matrix("0 1\n-1 0\n").unwrap(),
        williamson::standard_form::<f64>(1).unwrap()
    );
    assert_eq!(parse_matrix("# 2 2\n1 0\n0 1\n").unwrap(), Matrix::identity(2));
    assert!(matches!(parse_matrix("1 2\n3\n"), Err(ParseError::RaggedRows { .. })));
}

#[test]
fn matrix_text_round_trip() {
    let mut rng = williamson::random::rng(11);
    for dim in 1..7 {
        let m = williamson::random::gaussian_matrix::<f64>(&mut rng, dim, dim + 1).scale(1e-3);
        let back = parse_matrix(&format_matrix(&m)).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
        assert_eq!(back, m);
    }
}

#[test]
fn json_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "4 1\n1 3\n");
    let mp = write(dir.path(), "mp.txt", "4.1 1\n1 2.9\n");
    let (code, out, _) = run_args(&["check", "sqrt", &m, &mp, "--format", "json", "--norm", "trace"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let back: BoundReport = serde_json::from_value(v[0].clone()).unwrap();
    let direct = williamson::perturb::check_sqrt_lemma(
        &Matrix::from_rows(&[[4.0, 1.0], [1.0, 3.0]]).unwrap(),
        &Matrix::from_rows(&[[4.1, 1.0], [1.0, 2.9]]).unwrap(),
        williamson::NormKind::Trace,
    )
    .unwrap();
    assert_eq!(back, direct);
    let rows = vec![ReportRow::new(None, direct)];
    let text = emit_report(&rows, Format::Json);
    let again: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(again[0]["epsilon"].is_null());
}

#[test]
fn demo_and_sweep_formats() {
    let (code, out, _) = run_args(&["demo-degenerate", "--eps", "1e-2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let (code, out, _) = run_args(&["sweep", "--bound", "gram", "--points", "3", "--format", "json", "--seed", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bound"], "gram");
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}
