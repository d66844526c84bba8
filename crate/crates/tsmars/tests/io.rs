use std::path::Path;

use tsmars::config::PipelineConfig;
use tsmars::csv_io::{load_csv, ColumnMap};
use tsmars::model_file::ModelFile;

fn run(args: &[&str]) -> tsmars::Result<String> {
    let mut out = Vec::new();
    let mut argv = vec!["tsmars"];
    argv.extend_from_slice(args);
    tsmars::cli::run(argv, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn config_paths_resolve_against_config_directory() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("project");
    std::fs::create_dir(&sub).unwrap();
    std::fs::write(
        sub.join("run.toml"),
        "input = \"sim/simulated.csv\"\nout_dir = \"results\"\nseed = 11\nn = 240\nlags = [2, 4]\nkmax = [1]\n",
    )
    .unwrap();
    let cfg = PipelineConfig::load(&sub.join("run.toml")).unwrap();
    assert_eq!(cfg.input.as_deref(), Some(sub.join("sim/simulated.csv").as_path()));
    assert_eq!(cfg.out_dir, sub.join("results"));

    let config = sub.join("run.toml");
    run(&["simulate", "--config", p(&config), "--out-dir", p(&sub.join("sim"))]).unwrap();
    run(&["fit-tsmars", "--config", p(&config)]).unwrap();
    let report = std::fs::read_to_string(sub.join("results/fit_report.tsv")).unwrap();
    assert_eq!(report.lines().count(), 3);
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    std::fs::write(&config, "seed = 1\nn = 50\nprocess = \"white-noise\"\n").unwrap();
    let out = dir.path().join("o");
    run(&["simulate", "--config", p(&config), "--n", "70", "--seed", "2", "--out-dir", p(&out)]).unwrap();
    let data = load_csv(&out.join("simulated.csv"), &ColumnMap::default()).unwrap();
    assert_eq!(data.values.len(), 70);

    run(&["simulate", "--config", p(&config), "--out-dir", p(&dir.path().join("o1"))]).unwrap();
    let one = load_csv(&dir.path().join("o1/simulated.csv"), &ColumnMap::default()).unwrap();
    assert_eq!(one.values.len(), 50);
    assert_ne!(one.values[..50], data.values[..50]);
}

#[test]
fn unknown_config_key_is_rejected() {
    let err = PipelineConfig::from_toml("lagz = [1]\n").unwrap_err();
    assert_eq!(err.kind, tsmars::ErrorKind::Usage);
}

#[test]
fn model_files_round_trip_through_diagnose() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    let input = dir.path().join("simulated.csv");
    run(&["simulate", "--seed", "3", "--n", "300", "--noise-sd", "0.1", "--out-dir", d]).unwrap();
    run(&["fit-tsmars", "--input", p(&input), "--lags", "3,6", "--out-dir", d]).unwrap();
    run(&["fit-ar", "--input", p(&input), "--ar-lags", "1,3", "--intercept", "--out-dir", d]).unwrap();
    run(&["fit-arfima", "--input", p(&input), "--p-max", "1", "--q-max", "1", "--out-dir", d]).unwrap();

    for (file, kind) in [
        ("tsmars_model.json", "tsmars"),
        ("ar_model.json", "subset_ar"),
        ("arfima_model.json", "arfima"),
    ] {
        let path = dir.path().join(file);
        let text = std::fs::read_to_string(&path).unwrap();
        let model = ModelFile::from_json(&text).unwrap();
        assert_eq!(model.kind(), kind);
        assert_eq!(model.to_json(), text);
    }

    run(&[
        "diagnose",
        "--input",
        p(&input),
        "--model",
        p(&dir.path().join("tsmars_model.json")),
        "--model",
        p(&dir.path().join("ar_model.json")),
        "--model",
        p(&dir.path().join("arfima_model.json")),
        "--out-dir",
        d,
    ])
    .unwrap();
    let table = std::fs::read_to_string(dir.path().join("diagnostics.tsv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 3 * 4);
    for name in ["tsmars_model", "ar_model", "arfima_model"] {
        let json = std::fs::read_to_string(dir.path().join(format!("{name}_diagnostics.json"))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["model"], name);
        assert_eq!(v["ljung_box"].as_array().unwrap().len(), 4);
        assert!(dir.path().join(format!("{name}_acf.csv")).exists());
    }
}

#[test]
fn duplicate_model_stems_get_distinct_names() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    let input = dir.path().join("simulated.csv");
    run(&["simulate", "--seed", "4", "--n", "200", "--out-dir", d]).unwrap();
    run(&["fit-ar", "--input", p(&input), "--ar-lags", "1", "--out-dir", d]).unwrap();
    let model = dir.path().join("ar_model.json");
    run(&["diagnose", "--input", p(&input), "--model", p(&model), "--model", p(&model), "--out-dir", d]).unwrap();
    assert!(dir.path().join("ar_model_diagnostics.json").exists());
    assert!(dir.path().join("ar_model_2_diagnostics.json").exists());
}
