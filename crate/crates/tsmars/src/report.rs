//! Tabular and printable output. Tables are TSV with numbers at six
//! significant digits.

use std::fmt::Write;

use serde::Serialize;
use tsmars_core::anova::{term_kind, TermKind};
use tsmars_core::arfima::ArfimaRow;
use tsmars_core::diagnostics::{AcfResult, BandKind, HeteroCheck, LjungBoxRow, NormalityResult, LB_TRAILING};
use tsmars_core::mars::{FitReport, MarsModel, RowOutcome, Sign};
use tsmars_core::timeseries::LagEmbedding;

/// C-style `%.6g`.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 6)
}

/// C-style `%.{digits}g`: fixed or exponent form, trailing zeros removed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const FIT_REPORT_HEADER: [&str; 11] = [
    "p",
    "k_max",
    "rss",
    "gcv",
    "n_linear",
    "n_nonlinear",
    "pct_constant",
    "pct_linear",
    "pct_nonlinear",
    "pct_residual",
    "best",
];

/// One row per `(p, k_max)` cell; skipped cells print `NA`.
pub fn fit_report_tsv(report: &FitReport) -> String {
    let mut out = FIT_REPORT_HEADER.join("\t");
    out.push('\n');
    for (i, row) in report.rows.iter().enumerate() {
        let mut cells = vec![row.p.to_string(), row.k_max.to_string()];
        match &row.outcome {
            RowOutcome::Fitted { rss, gcv, anova } => cells.extend([
                fmt_g(*rss),
                fmt_g(*gcv),
                anova.n_linear.to_string(),
                anova.n_nonlinear.to_string(),
                fmt_g(anova.pct_constant),
                fmt_g(anova.pct_linear),
                fmt_g(anova.pct_nonlinear),
                fmt_g(anova.pct_residual),
            ]),
            RowOutcome::Skipped { .. } => cells.extend(std::iter::repeat_n("NA".to_string(), 8)),
        }
        cells.push(if i == report.best { "yes" } else { "no" }.into());
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn lagged(lag: usize) -> String {
    format!("z[t-{lag}]")
}

fn hinge_text(sign: Sign, lag: usize, knot: f64) -> String {
    let shift = if knot < 0.0 {
        format!("+ {}", fmt_g(-knot))
    } else {
        format!("- {}", fmt_g(knot))
    };
    let side = match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    };
    format!("({} {shift})_{side}", lagged(lag))
}

fn push_term(out: &mut String, coef: f64, body: &str) {
    let sign = if coef < 0.0 { "-" } else { "+" };
    if out.is_empty() {
        if coef < 0.0 {
            out.push('-');
        }
    } else {
        let _ = write!(out, " {sign} ");
    }
    out.push_str(&fmt_g(coef.abs()));
    if !body.is_empty() {
        out.push(' ');
        out.push_str(body);
    }
}

/// Prints the model as an equation. Hinges that never bend on the training
/// data are written as plain linear terms with their offset folded into the
/// constant; `(x - t)_+` is `max(x - t, 0)` and `(x - t)_-` is `max(t - x, 0)`.
pub fn equation(model: &MarsModel, embedding: &LagEmbedding) -> String {
    let mut constant = model.intercept;
    let mut linear: Vec<(usize, f64)> = Vec::new();
    let mut others = Vec::new();
    for term in &model.terms {
        if term_kind(term, embedding) == TermKind::Linear {
            let f = &term.factors[0];
            let slope = match f.sign {
                Sign::Plus => term.coefficient,
                Sign::Minus => -term.coefficient,
            };
            constant -= slope * f.knot;
            match linear.iter_mut().find(|(lag, _)| *lag == f.lag) {
                Some((_, s)) => *s += slope,
                None => linear.push((f.lag, slope)),
            }
        } else {
            others.push(term);
        }
    }
    linear.sort_by_key(|(lag, _)| *lag);

    let mut rhs = String::new();
    push_term(&mut rhs, constant, "");
    for (lag, slope) in linear {
        push_term(&mut rhs, slope, &lagged(lag));
    }
    for term in others {
        let body: Vec<String> = term.factors.iter().map(|f| hinge_text(f.sign, f.lag, f.knot)).collect();
        push_term(&mut rhs, term.coefficient, &body.join(" "));
    }
    format!("z[t] = {rhs}")
}

pub fn arfima_table_tsv(rows: &[ArfimaRow]) -> String {
    let mut out = String::from("p\tq\td\tcss\taic\tflag\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.p, r.q, fmt_g(r.d), fmt_g(r.css), fmt_g(r.aic), r.flag);
    }
    out
}

pub const LJUNG_BOX_HEADER: [&str; 11] = ["model", "lag", "chi2", "df", "p_value", "r1", "r2", "r3", "r4", "r5", "r6"];

/// Autocorrelation-check table: one block of rows per model, each row holding
/// the statistic and the six autocorrelations ending at its lag.
pub fn ljung_box_tsv(sections: &[(&str, &[LjungBoxRow])]) -> String {
    let mut out = LJUNG_BOX_HEADER.join("\t");
    out.push('\n');
    for (name, rows) in sections {
        for r in *rows {
            let mut cells = vec![
                name.to_string(),
                r.lag.to_string(),
                fmt_g(r.q_stat),
                r.df.to_string(),
                fmt_g(r.p_value),
            ];
            let pad = LB_TRAILING.saturating_sub(r.r_values.len());
            cells.extend(std::iter::repeat_n("NA".to_string(), pad));
            cells.extend(r.r_values.iter().map(|v| fmt_g(*v)));
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    }
    out
}

pub fn acf_csv(acf: &AcfResult) -> String {
    let mut out = String::from("lag,r\n");
    for (k, r) in acf.lags().zip(&acf.r) {
        let _ = writeln!(out, "{k},{}", fmt_g(*r));
    }
    out
}

/// Band information accompanying an ACF table.
#[derive(Debug, Clone, Serialize)]
pub struct AcfMeta {
    pub n: usize,
    pub max_lag: usize,
    pub band_kind: BandKind,
    pub se_band: f64,
    pub band: Vec<f64>,
}

impl AcfMeta {
    pub fn new(acf: &AcfResult, kind: BandKind) -> Self {
        Self {
            n: acf.n,
            max_lag: acf.max_lag(),
            band_kind: kind,
            se_band: acf.se_band,
            band: acf.band(kind),
        }
    }
}

/// Everything `diagnose` computes for one model.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsBundle {
    pub model: String,
    pub kind: String,
    pub n_residuals: usize,
    pub acf: AcfMeta,
    pub r: Vec<f64>,
    pub ljung_box: Vec<LjungBoxRow>,
    pub normality: NormalityResult,
    pub squared_residuals: HeteroCheck,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
