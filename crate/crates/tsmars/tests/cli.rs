use std::path::Path;
use std::process::{Command, Output};

fn tsmars(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsmars"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn monthly_csv(path: &Path, values: impl IntoIterator<Item = f64>) {
    let mut text = String::from("date,value\n");
    for (i, v) in values.into_iter().enumerate() {
        text.push_str(&format!("{}-{:02},{v}\n", 2000 + i / 12, i % 12 + 1));
    }
    std::fs::write(path, text).unwrap();
}

fn assert_one_line_error(o: &Output, code: i32, kind: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let e = stderr(o);
    assert_eq!(e.lines().count(), 1, "stderr: {e}");
    assert!(e.starts_with(&format!("error[{kind}]: ")), "stderr: {e}");
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["fit-tsmars", "--help"], &["--version"]] {
        let o = tsmars(args, dir.path());
        assert_eq!(o.status.code(), Some(0));
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_one_line_error(&tsmars(&["fit-tsmars", "--bogus"], dir.path()), 1, "usage");
    assert_one_line_error(&tsmars(&[], dir.path()), 1, "usage");
}

#[test]
fn missing_input_and_seed_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_one_line_error(&tsmars(&["fit-tsmars"], dir.path()), 1, "usage");
    assert_one_line_error(&tsmars(&["simulate"], dir.path()), 1, "usage");
}

#[test]
fn malformed_csv_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "date,value\n2000-01,0.1\n2000-02,abc\n").unwrap();
    let o = tsmars(&["fit-tsmars", "--input", "bad.csv"], dir.path());
    assert_one_line_error(&o, 2, "data");
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn out_of_order_month_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("gap.csv"), "date,value\n2000-01,0.1\n2000-03,0.2\n").unwrap();
    let o = tsmars(&["transform", "--input", "gap.csv"], dir.path());
    assert_one_line_error(&o, 2, "data");
    assert!(stderr(&o).contains("line 3"));
}

#[test]
fn constant_series_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    monthly_csv(&dir.path().join("flat.csv"), std::iter::repeat(0.1).take(120));
    let o = tsmars(&["fit-arfima", "--input", "flat.csv"], dir.path());
    assert_one_line_error(&o, 3, "numerical");
}

#[test]
fn exact_model_residuals_have_zero_variance() {
    let dir = tempfile::tempdir().unwrap();
    monthly_csv(&dir.path().join("alt.csv"), (0..120).map(|i| if i % 2 == 0 { 0.5 } else { -0.25 }));
    let fit = tsmars(&["fit-ar", "--input", "alt.csv", "--ar-lags", "2"], dir.path());
    assert_eq!(fit.status.code(), Some(0), "{}", stderr(&fit));
    let o = tsmars(&["diagnose", "--input", "alt.csv", "--model", "ar_model.json"], dir.path());
    assert_one_line_error(&o, 3, "numerical");
    assert!(stderr(&o).contains("zero variance"));
}

#[test]
fn missing_model_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    monthly_csv(&dir.path().join("x.csv"), (0..60).map(|i| (i as f64 * 0.7).sin() * 0.3));
    let o = tsmars(&["diagnose", "--input", "x.csv", "--model", "nope.json"], dir.path());
    assert_one_line_error(&o, 2, "data");
}

#[test]
fn transform_writes_split_segments() {
    let dir = tempfile::tempdir().unwrap();
    monthly_csv(&dir.path().join("level.csv"), (0..72).map(|i| 100.0 + i as f64 + (i % 12) as f64));
    let o = tsmars(&["transform", "--input", "level.csv", "--out-dir", "plain"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let names = |d: &str| {
        let mut v: Vec<String> = std::fs::read_dir(dir.path().join(d))
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        v.sort();
        v
    };
    assert_eq!(names("plain"), ["growth.csv"]);

    let o = tsmars(
        &["transform", "--input", "level.csv", "--split", "2003-01", "--out-dir", "split"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(names("split"), ["growth.csv", "growth_left.csv", "growth_right.csv"]);

    let growth = std::fs::read_to_string(dir.path().join("split/growth.csv")).unwrap();
    let left = std::fs::read_to_string(dir.path().join("split/growth_left.csv")).unwrap();
    let right = std::fs::read_to_string(dir.path().join("split/growth_right.csv")).unwrap();
    assert_eq!(growth.lines().count(), 61);
    assert_eq!(left.lines().count() + right.lines().count(), 62);
    assert!(left.lines().nth(1).unwrap().starts_with("2001-01,"));
    assert!(right.lines().nth(1).unwrap().starts_with("2003-01,"));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, out: &str| {
        let o = tsmars(&["simulate", "--seed", seed, "--n", "100", "--out-dir", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(dir.path().join(out).join("simulated.csv")).unwrap()
    };
    let a = run("5", "a");
    assert_eq!(a, run("5", "b"));
    assert_ne!(a, run("6", "c"));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 101);
}

#[test]
fn invalid_simulation_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = tsmars(&["simulate", "--seed", "1", "--process", "arfima", "--d", "1.2"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let o = tsmars(
        &["simulate", "--seed", "1", "--process", "ar", "--ar-lags", "1", "--ar-coefs", "1.5"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn arfima_orders_above_three_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    monthly_csv(&dir.path().join("x.csv"), (0..80).map(|i| (i as f64 * 0.7).sin() * 0.3));
    let o = tsmars(&["fit-arfima", "--input", "x.csv", "--p-max", "4"], dir.path());
    assert_one_line_error(&o, 1, "usage");
}
