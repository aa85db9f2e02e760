//! Matrix files: JSON (`{"matrix": [[..]], "labels": [..]}`) or CSV.
//!
//! CSV holds either one row per matrix row, or a single row `t12,t13,t23`
//! read as a triad. Numbers use `.` as the decimal separator regardless of
//! locale.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Completion, ReciprocalMatrix};
use crate::triad::Triad;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub matrix: ReciprocalMatrix,
    pub labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct JsonIn {
    matrix: Vec<Vec<Option<f64>>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Serialize)]
struct JsonOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [String]>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl MatrixFile {
    pub fn triad(&self) -> Result<Triad> {
        self.matrix.to_triad()
    }

    pub fn parse(text: &str, format: Format, completion: Completion) -> Result<Self> {
        match format {
            Format::Json => Self::parse_json(text, completion),
            Format::Csv => Self::parse_csv(text, completion),
        }
    }

    pub fn parse_json(text: &str, completion: Completion) -> Result<Self> {
        let raw: JsonIn = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid matrix JSON: {e}")))?;
        let matrix = ReciprocalMatrix::from_rows(&raw.matrix, completion)?;
        if let Some(labels) = &raw.labels {
            if labels.len() != matrix.order() {
                return Err(Error::Parse(format!(
                    "{} labels for a matrix of order {}",
                    labels.len(),
                    matrix.order()
                )));
            }
        }
        Ok(MatrixFile {
            matrix,
            labels: raw.labels,
        })
    }

    pub fn parse_csv(text: &str, completion: Completion) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("invalid CSV: {e}")))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(c, cell)| parse_cell(cell, r + 1, c + 1))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let matrix = match rows.as_slice() {
            [] => return Err(Error::Parse("empty CSV file".into())),
            [single] if single.len() == 3 => {
                let entry = |i: usize, name: &str| {
                    single[i].ok_or_else(|| Error::NonPositive {
                        field: name.to_string(),
                        value: f64::NAN,
                    })
                };
                Triad::new(entry(0, "t12")?, entry(1, "t13")?, entry(2, "t23")?)?.to_matrix()
            }
            _ => ReciprocalMatrix::from_rows(&rows, completion)?,
        };
        Ok(MatrixFile { matrix, labels: None })
    }

    pub fn read(path: &Path, completion: Completion) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ if text.trim_start().starts_with('{') => Format::Json,
            _ => Format::Csv,
        };
        Self::parse(&text, format, completion)
    }

    pub fn to_json_string(&self) -> String {
        let out = JsonOut {
            labels: self.labels.as_deref(),
            matrix: self.matrix.rows(),
        };
        serde_json::to_string_pretty(&out).expect("matrix serializes") + "\n"
    }

    /// Full matrix, one row per line, shortest round-trip decimal form.
    pub fn to_csv_string(&self) -> String {
        self.matrix
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

fn parse_cell(cell: &str, row: usize, col: usize) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Parse(format!("row {row}, column {col}: '{cell}' is not a number")))
}
