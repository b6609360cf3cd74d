//! CSV ingestion with gap filling and descriptive statistics.

use std::path::Path;

use chrono::NaiveDate;
use hawkcast::TimeSeries;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Largest share of missing cells that is silently interpolated.
pub const MAX_MISSING_FRACTION: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct ColumnSelector {
    pub date_column: Option<String>,
    /// Defaults to the first numeric column that is not the date column.
    pub value_column: Option<String>,
    pub delimiter: u8,
}

impl Default for ColumnSelector {
    fn default() -> Self {
        Self { date_column: None, value_column: None, delimiter: b',' }
    }
}

/// Summary in the order max, median, mean, min, std (population).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub std: f64,
}

impl DescriptiveStats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 0 { (sorted[mid - 1] + sorted[mid]) / 2.0 } else { sorted[mid] };
        Self { max: sorted[sorted.len() - 1], median, mean, min: sorted[0], std }
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: TimeSeries,
    pub column: String,
    pub stats: DescriptiveStats,
    pub imputed: usize,
}

impl Ingested {
    /// Row labels: ISO dates when available, else 0-based indices.
    pub fn labels(&self) -> Vec<String> {
        match self.series.timestamps() {
            Some(d) => d.iter().map(|d| d.format("%Y-%m-%d").to_string()).collect(),
            None => (0..self.series.len()).map(|i| i.to_string()).collect(),
        }
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim().to_ascii_lowercase().as_str(), "" | "na" | "nan" | "null")
}

/// Fills `None` runs by linear interpolation; edges copy the nearest value.
pub fn interpolate(cells: &[Option<f64>]) -> Option<Vec<f64>> {
    let known: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].is_some()).collect();
    let (&first, &last) = (known.first()?, known.last()?);
    let mut out = vec![0.0; cells.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = match cells[i] {
            Some(v) => v,
            None if i < first => cells[first].unwrap(),
            None if i > last => cells[last].unwrap(),
            None => {
                let lo = known[known.partition_point(|&k| k < i) - 1];
                let hi = known[known.partition_point(|&k| k < i)];
                let (a, b) = (cells[lo].unwrap(), cells[hi].unwrap());
                a + (b - a) * (i - lo) as f64 / (hi - lo) as f64
            }
        };
    }
    Some(out)
}

fn reader(path: &Path, delimiter: u8) -> CliResult<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().delimiter(delimiter).trim(csv::Trim::All).from_reader(file))
}

fn column_index(headers: &csv::StringRecord, name: &str, path: &Path) -> CliResult<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Usage(format!("{}: no column named `{name}`", path.display())))
}

/// Reads raw string columns by header name.
pub fn read_columns(path: &Path, names: &[&str], delimiter: u8) -> CliResult<Vec<Vec<String>>> {
    let mut rdr = reader(path, delimiter)?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let idx: Vec<usize> = names.iter().map(|n| column_index(&headers, n, path)).collect::<CliResult<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        for (col, &i) in cols.iter_mut().zip(&idx) {
            col.push(record.get(i).unwrap_or("").to_string());
        }
    }
    Ok(cols)
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let row = e.position().map(|p| p.line() as usize).unwrap_or(0);
    CliError::Parse { path: path.into(), row, column: String::new(), message: e.to_string() }
}

/// Parses a numeric column, interpolating up to 5% missing cells.
pub fn parse_numeric(path: &Path, column: &str, raw: &[String]) -> CliResult<(Vec<f64>, usize)> {
    let mut cells = Vec::with_capacity(raw.len());
    for (i, cell) in raw.iter().enumerate() {
        if is_missing(cell) {
            cells.push(None);
            continue;
        }
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => cells.push(Some(v)),
            _ => {
                return Err(CliError::Parse {
                    path: path.into(),
                    row: i + 2,
                    column: column.to_string(),
                    message: format!("`{cell}` is not a finite number"),
                })
            }
        }
    }
    let missing = cells.iter().filter(|c| c.is_none()).count();
    if raw.is_empty() || missing as f64 > MAX_MISSING_FRACTION * raw.len() as f64 {
        return Err(CliError::TooManyMissing { column: column.to_string(), missing, total: raw.len() });
    }
    Ok((interpolate(&cells).expect("some value present"), missing))
}

pub fn ingest_csv(path: &Path, selector: &ColumnSelector) -> CliResult<Ingested> {
    let mut rdr = reader(path, selector.delimiter)?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let value_column = match &selector.value_column {
        Some(v) => v.clone(),
        None => {
            let first_row = rdr.records().find_map(|r| r.ok());
            let numeric = |i: usize| {
                first_row.as_ref().and_then(|r| r.get(i)).is_some_and(|c| is_missing(c) || c.parse::<f64>().is_ok())
            };
            headers
                .iter()
                .enumerate()
                .find(|&(i, h)| Some(h) != selector.date_column.as_deref() && numeric(i))
                .ok_or_else(|| CliError::Usage(format!("{}: no numeric value column", path.display())))?
                .1
                .to_string()
        }
    };
    let mut names = vec![value_column.as_str()];
    if let Some(d) = &selector.date_column {
        names.push(d.as_str());
    }
    let cols = read_columns(path, &names, selector.delimiter)?;
    let (values, imputed) = parse_numeric(path, &value_column, &cols[0])?;
    let series = match &selector.date_column {
        None => TimeSeries::new(values.clone())?,
        Some(d) => {
            let dates = cols[1]
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| CliError::Parse {
                        path: path.into(),
                        row: i + 2,
                        column: d.clone(),
                        message: e.to_string(),
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            TimeSeries::with_timestamps(values.clone(), dates)?
        }
    };
    Ok(Ingested { stats: DescriptiveStats::of(&values), series, column: value_column, imputed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stats() {
        let s = DescriptiveStats::of(&[7.0; 5]);
        assert_eq!((s.max, s.median, s.mean, s.min, s.std), (7.0, 7.0, 7.0, 7.0, 0.0));
    }

    #[test]
    fn small_stats() {
        let s = DescriptiveStats::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.median, 2.5);
    }

    #[test]
    fn interpolation() {
        let got = interpolate(&[None, Some(1.0), None, None, Some(4.0), None]).unwrap();
        assert_eq!(got, vec![1.0, 1.0, 2.0, 3.0, 4.0, 4.0]);
        assert!(interpolate(&[None, None]).is_none());
    }
}
