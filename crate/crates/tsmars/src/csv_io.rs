//! CSV ingestion and output of monthly series.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::format::{parse, Parsed, StrftimeItems};
use tsmars_core::YearMonth;

use crate::error::{Error, Result};

/// Which columns hold the date and the value, and how dates are written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub date: String,
    pub value: String,
    /// `strftime`-style pattern that must yield at least a year and a month.
    pub date_format: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            date: "date".into(),
            value: "value".into(),
            date_format: "%Y-%m".into(),
        }
    }
}

/// A gap-free run of monthly observations as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyData {
    pub start: YearMonth,
    pub values: Vec<f64>,
}

impl MonthlyData {
    pub fn dates(&self) -> impl Iterator<Item = YearMonth> + '_ {
        (0..self.values.len()).map(|i| self.start.add_months(i as i64))
    }
}

pub fn parse_month(text: &str, format: &str) -> Option<YearMonth> {
    let mut parsed = Parsed::new();
    parse(&mut parsed, text.trim(), StrftimeItems::new(format)).ok()?;
    YearMonth::new(parsed.year()?, parsed.month()?)
}

pub fn load_csv(path: &Path, columns: &ColumnMap) -> Result<MonthlyData> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, columns).map_err(|e| e.context(path.display()))
}

/// Parses CSV with a header row. Rows must be consecutive months; gaps,
/// duplicates, reordering and unparsable fields are reported with the line
/// number (the header is line 1).
pub fn read_csv<R: Read>(reader: R, columns: &ColumnMap) -> Result<MonthlyData> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::data(format!("line 1: {e}")))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::data(format!("line 1: missing column `{name}`")))
    };
    let date_col = find(&columns.date)?;
    let value_col = find(&columns.value)?;

    let mut start = None;
    let mut prev: Option<YearMonth> = None;
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::data(format!("line {line}: {e}")))?;
        let date_text = record.get(date_col).unwrap_or("");
        let month = parse_month(date_text, &columns.date_format).ok_or_else(|| {
            Error::data(format!(
                "line {line}: cannot parse date `{date_text}` with format `{}`",
                columns.date_format
            ))
        })?;
        let value_text = record.get(value_col).unwrap_or("");
        let value: f64 = value_text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::data(format!("line {line}: invalid value `{value_text}`")))?;
        if let Some(p) = prev {
            let step = month.months_since(p);
            if step == 0 {
                return Err(Error::data(format!("line {line}: duplicate month {month}")));
            }
            if step < 0 {
                return Err(Error::data(format!("line {line}: month {month} is out of order after {p}")));
            }
            if step > 1 {
                return Err(Error::data(format!("line {line}: missing month {} before {month}", p.next())));
            }
        } else {
            start = Some(month);
        }
        prev = Some(month);
        values.push(value);
    }
    match start {
        Some(start) => Ok(MonthlyData { start, values }),
        None => Err(Error::data("no data rows")),
    }
}

/// Writes `date,value` rows, dates as `YYYY-MM`, values at full precision.
pub fn write_series<W: Write>(writer: W, start: YearMonth, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let wrap = |e: csv::Error| Error::data(e);
    w.write_record(["date", "value"]).map_err(wrap)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([start.add_months(i as i64).to_string(), v.to_string()])
            .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::data(e))?;
    Ok(())
}

pub fn save_series(path: &Path, start: YearMonth, values: &[f64]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_series(file, start, values).map_err(|e| e.context(path.display()))
}
