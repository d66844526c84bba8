//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tsmars_core::arfima::{apply_fracdiff, fit_arfima_grid, fit_subset_ar};
use tsmars_core::diagnostics::{acf, hetero_check, ljung_box_from_acf, normality_test};
use tsmars_core::mars::fit_grid;
use tsmars_core::timeseries::{embed_lags, split_at, symmetric_growth, GrowthSeries, TimeSeries};
use tsmars_core::YearMonth;

use crate::config::{PipelineConfig, ProcessKind};
use crate::csv_io::{load_csv, save_series, MonthlyData};
use crate::error::{Error, Result};
use crate::model_file::ModelFile;
use crate::report::{self, AcfMeta, DiagnosticsBundle};
use crate::simulate::{simulate, Process, SimSpec};

#[derive(Debug, Parser)]
#[command(name = "tsmars", version, about = "Nonlinear and long-memory analysis of monthly time series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetric annual growth rates, optionally split at a month.
    Transform(TransformArgs),
    /// Fit adaptive spline models over a (p, k_max) grid.
    FitTsmars(FitTsmarsArgs),
    /// Estimate the fractional order and select ARFIMA(p, d, q) by AIC.
    FitArfima(FitArfimaArgs),
    /// Least-squares autoregression on a chosen lag set.
    FitAr(FitArArgs),
    /// Residual diagnostics for one or more fitted models.
    Diagnose(DiagnoseArgs),
    /// Generate a synthetic series.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat TOML config; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory for output files (created if missing).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: Common,
    /// First month of the right-hand segment, YYYY-MM.
    #[arg(long, value_parser = parse_month)]
    pub split: Option<YearMonth>,
    /// Growth lag in observations.
    #[arg(long)]
    pub period: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitTsmarsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lag counts p to try, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lags: Option<Vec<usize>>,
    /// Maximum interaction degrees to try, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub kmax: Option<Vec<usize>>,
    /// GCV cost per non-constant basis function.
    #[arg(long)]
    pub penalty: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArfimaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub p_max: Option<usize>,
    #[arg(long)]
    pub q_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lags of the autoregression, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ar_lags: Option<Vec<usize>>,
    /// Include an intercept.
    #[arg(long)]
    pub intercept: bool,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub common: Common,
    /// Model file; repeat to compare models.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub process: Option<ProcessKind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Fractional order for `arfima`.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub noise_sd: Option<f64>,
    /// Lags for `ar`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ar_lags: Option<Vec<usize>>,
    /// Coefficients for `ar`, comma separated (use `--ar-coefs=-0.2,0.4` for a leading minus).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub ar_coefs: Option<Vec<f64>>,
}

fn parse_month(s: &str) -> std::result::Result<YearMonth, String> {
    s.parse().map_err(|_| format!("`{s}` is not a YYYY-MM month"))
}

impl Common {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(input) = &self.input {
            cfg.input = Some(input.clone());
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = dir.clone();
        }
        Ok(cfg)
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// a human-readable summary to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}").map_err(|e| Error::data(e))?;
            return Ok(());
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return Err(Error::usage(first.trim_start_matches("error: ")));
        }
    };
    let mut printer = Printer(out);
    match cli.command {
        Command::Transform(a) => transform(a, &mut printer),
        Command::FitTsmars(a) => fit_tsmars(a, &mut printer),
        Command::FitArfima(a) => fit_arfima(a, &mut printer),
        Command::FitAr(a) => fit_ar(a, &mut printer),
        Command::Diagnose(a) => diagnose(a, &mut printer),
        Command::Simulate(a) => simulate_cmd(a, &mut printer),
    }
}

/// Runs the CLI and returns the process exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(args, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.kind.exit_code()
        }
    }
}

struct Printer<'a>(&'a mut dyn Write);

impl Printer<'_> {
    fn text(&mut self, s: &str) -> Result<()> {
        self.0.write_all(s.as_bytes()).map_err(|e| Error::data(format!("stdout: {e}")))
    }

    fn line(&mut self, s: &str) -> Result<()> {
        self.text(s)?;
        self.text("\n")
    }
}

fn prepare_out_dir(cfg: &PipelineConfig) -> Result<&Path> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    Ok(&cfg.out_dir)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn load_input(cfg: &PipelineConfig) -> Result<MonthlyData> {
    load_csv(cfg.input()?, &cfg.columns())
}

fn load_growth(cfg: &PipelineConfig) -> Result<GrowthSeries> {
    let data = load_input(cfg)?;
    Ok(GrowthSeries::new(data.start, data.values)?)
}

fn transform(args: TransformArgs, out: &mut Printer) -> Result<()> {
    let mut cfg = args.common.config()?;
    if let Some(s) = args.split {
        cfg.split = Some(s);
    }
    if let Some(p) = args.period {
        cfg.period = p;
    }
    let data = load_input(&cfg)?;
    let series = TimeSeries::new(data.start, data.values, cfg.period)?;
    let growth = symmetric_growth(&series)?;
    let dir = prepare_out_dir(&cfg)?;
    let full = dir.join("growth.csv");
    save_series(&full, growth.start(), growth.values())?;
    out.line(&format!(
        "growth\t{}\t{}..{}\t{}",
        growth.len(),
        growth.start(),
        growth.end(),
        full.display()
    ))?;
    if let Some(boundary) = cfg.split {
        let (left, right) = split_at(&growth, boundary)?;
        for (name, part) in [("left", &left), ("right", &right)] {
            let path = dir.join(format!("growth_{name}.csv"));
            save_series(&path, part.start(), part.values())?;
            out.line(&format!("{name}\t{}\t{}..{}\t{}", part.len(), part.start(), part.end(), path.display()))?;
        }
    }
    Ok(())
}

fn fit_tsmars(args: FitTsmarsArgs, out: &mut Printer) -> Result<()> {
    let mut cfg = args.common.config()?;
    if let Some(l) = args.lags {
        cfg.lags = l;
    }
    if let Some(k) = args.kmax {
        cfg.kmax = k;
    }
    if let Some(p) = args.penalty {
        cfg.penalty = p;
    }
    let grid = cfg.grid()?;
    let series = load_growth(&cfg)?;
    let (model, fit) = fit_grid(&series, &grid)?;
    let embedding = embed_lags(&series, model.p)?;
    let table = report::fit_report_tsv(&fit);
    let eq = report::equation(&model, &embedding);

    let dir = prepare_out_dir(&cfg)?;
    write_file(&dir.join("fit_report.tsv"), &table)?;
    write_file(&dir.join("tsmars_equation.txt"), &format!("{eq}\n"))?;
    ModelFile::Tsmars(model).save(&dir.join("tsmars_model.json"))?;
    out.text(&table)?;
    out.line(&eq)
}

fn fit_arfima(args: FitArfimaArgs, out: &mut Printer) -> Result<()> {
    let mut cfg = args.common.config()?;
    if let Some(p) = args.p_max {
        cfg.p_max = p;
    }
    if let Some(q) = args.q_max {
        cfg.q_max = q;
    }
    let series = load_growth(&cfg)?;
    let (best, rows) = fit_arfima_grid(series.values(), cfg.p_max, cfg.q_max, cfg.min_len)?;
    let table = report::arfima_table_tsv(&rows);

    let centered: Vec<f64> = series.values().iter().map(|v| v - best.mean).collect();
    let filtered = apply_fracdiff(&centered, best.d)?;
    let max_lag = cfg.acf_lags.min(filtered.len().saturating_sub(1));
    let filtered_acf = acf(&filtered, max_lag)?;

    let dir = prepare_out_dir(&cfg)?;
    write_file(&dir.join("arfima_table.tsv"), &table)?;
    ModelFile::Arfima(best.clone()).save(&dir.join("arfima_model.json"))?;
    save_series(&dir.join("filtered.csv"), series.start(), &filtered)?;
    write_file(&dir.join("filtered_acf.csv"), &report::acf_csv(&filtered_acf))?;
    write_file(
        &dir.join("filtered_acf.json"),
        &report::to_json(&AcfMeta::new(&filtered_acf, cfg.band)),
    )?;
    out.text(&table)?;
    out.line(&format!(
        "best\tp={}\tq={}\td={}\taic={}\t{}",
        best.p,
        best.q,
        report::fmt_g(best.d),
        report::fmt_g(best.aic),
        best.stationarity()
    ))
}

fn fit_ar(args: FitArArgs, out: &mut Printer) -> Result<()> {
    let mut cfg = args.common.config()?;
    if let Some(l) = args.ar_lags {
        cfg.ar_lags = l;
    }
    if args.intercept {
        cfg.intercept = true;
    }
    if cfg.ar_lags.is_empty() {
        return Err(Error::usage("no AR lags: pass --ar-lags or set `ar_lags` in the config"));
    }
    let series = load_growth(&cfg)?;
    let model = fit_subset_ar(series.values(), &cfg.ar_lags, cfg.intercept)?;

    let mut table = String::from("term\tcoefficient\n");
    if let Some(c) = model.intercept {
        table.push_str(&format!("intercept\t{}\n", report::fmt_g(c)));
    }
    for (l, c) in model.lags.iter().zip(&model.coefficients) {
        table.push_str(&format!("z[t-{l}]\t{}\n", report::fmt_g(*c)));
    }
    let dir = prepare_out_dir(&cfg)?;
    write_file(&dir.join("ar_coefficients.tsv"), &table)?;
    let summary = format!("rss\t{}\tn\t{}", report::fmt_g(model.rss), model.n);
    ModelFile::SubsetAr(model).save(&dir.join("ar_model.json"))?;
    out.text(&table)?;
    out.line(&summary)
}

/// Distinct, file-name-safe labels derived from the model file stems.
fn model_names(paths: &[PathBuf]) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(paths.len());
    for p in paths {
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".into());
        let stem: String = stem
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        let mut name = stem.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{stem}_{k}");
            k += 1;
        }
        names.push(name);
    }
    names
}

fn diagnose(args: DiagnoseArgs, out: &mut Printer) -> Result<()> {
    let cfg = args.common.config()?;
    if cfg.diag_lags.is_empty() || cfg.diag_lags.contains(&0) {
        return Err(Error::usage("diag_lags must be a non-empty list of positive integers"));
    }
    let models = args
        .models
        .iter()
        .map(|p| ModelFile::load(p))
        .collect::<Result<Vec<_>>>()?;
    let series = load_growth(&cfg)?;
    let names = model_names(&args.models);

    let max_lb = *cfg.diag_lags.iter().max().expect("non-empty");
    let mut bundles = Vec::new();
    for (name, model) in names.iter().zip(&models) {
        let ctx = |e: Error| e.context(format!("model {name}"));
        let resid = model.residuals(series.values()).map_err(ctx)?;
        let a = acf(&resid, cfg.acf_lags.max(max_lb)).map_err(|e| ctx(e.into()))?;
        let lb = ljung_box_from_acf(&a, &cfg.diag_lags, cfg.df_mode()).map_err(|e| ctx(e.into()))?;
        let normality = normality_test(&resid).map_err(|e| ctx(e.into()))?;
        let hetero = hetero_check(&resid, cfg.acf_lags).map_err(|e| ctx(e.into()))?;
        bundles.push(DiagnosticsBundle {
            model: name.clone(),
            kind: model.kind().into(),
            n_residuals: resid.len(),
            acf: AcfMeta::new(&a, cfg.band),
            r: a.r.clone(),
            ljung_box: lb,
            normality,
            squared_residuals: hetero,
        });
    }

    let sections: Vec<(&str, &[_])> = bundles.iter().map(|b| (b.model.as_str(), b.ljung_box.as_slice())).collect();
    let table = report::ljung_box_tsv(&sections);
    let dir = prepare_out_dir(&cfg)?;
    write_file(&dir.join("diagnostics.tsv"), &table)?;
    for b in &bundles {
        let acf_result = tsmars_core::diagnostics::AcfResult {
            r: b.r.clone(),
            se_band: b.acf.se_band,
            n: b.acf.n,
        };
        write_file(&dir.join(format!("{}_acf.csv", b.model)), &report::acf_csv(&acf_result))?;
        write_file(&dir.join(format!("{}_diagnostics.json", b.model)), &report::to_json(b))?;
    }
    out.text(&table)?;
    for b in &bundles {
        out.line(&format!(
            "{}\tnormality_p={}\tsquared_lb1_p={}",
            b.model,
            report::fmt_g(b.normality.p_value),
            report::fmt_g(b.squared_residuals.ljung_box[0].p_value)
        ))?;
    }
    Ok(())
}

fn simulate_cmd(args: SimulateArgs, out: &mut Printer) -> Result<()> {
    let mut cfg = args.common.config()?;
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if let Some(p) = args.process {
        cfg.process = p;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(d) = args.d {
        cfg.d = d;
    }
    if let Some(s) = args.noise_sd {
        cfg.noise_sd = s;
    }
    if let Some(l) = args.ar_lags {
        cfg.ar_lags = l;
    }
    if let Some(c) = args.ar_coefs {
        cfg.ar_coefs = c;
    }
    let seed = cfg
        .seed
        .ok_or_else(|| Error::usage("simulate needs a seed: pass --seed or set `seed` in the config"))?;
    let process = match cfg.process {
        ProcessKind::Setar => Process::Setar {
            threshold: cfg.threshold,
            low: cfg.setar_low,
            high: cfg.setar_high,
        },
        ProcessKind::Arfima => Process::Arfima { d: cfg.d },
        ProcessKind::Ar => Process::SubsetAr {
            lags: cfg.ar_lags.clone(),
            coefs: cfg.ar_coefs.clone(),
        },
        ProcessKind::WhiteNoise => Process::WhiteNoise,
    };
    let spec = SimSpec {
        process,
        n: cfg.n,
        noise_sd: cfg.noise_sd,
        burn_in: cfg.burn_in,
        seed,
    };
    let values = simulate(&spec)?;
    let dir = prepare_out_dir(&cfg)?;
    let path = dir.join("simulated.csv");
    save_series(&path, cfg.start, &values)?;
    out.line(&format!("simulated\t{}\t{}", values.len(), path.display()))
}
