use std::fs;
use std::path::Path;

use heartml_core::dataset::{drop_incomplete, parse_csv_auto};
use heartml_core::{Dataset, RawTable};

use crate::error::{AppError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A data file before and after cleaning.
#[derive(Debug, Clone)]
pub struct LoadedData {
    pub raw: RawTable,
    pub dataset: Dataset,
}

impl LoadedData {
    pub fn parsed(&self) -> usize {
        self.raw.rows.len()
    }

    pub fn dropped(&self) -> usize {
        self.raw.rows.len() - self.dataset.len()
    }
}

/// Reads a Cleveland-layout file (optionally with a header line), drops
/// incomplete rows and binarizes the target.
pub fn load_dataset(path: &Path) -> Result<LoadedData> {
    let text = read_text(path)?;
    let context = path.display().to_string();
    let raw = parse_csv_auto(&text)
        .map_err(|e| AppError::core(context.clone(), e))?
        .with_source(context.clone());
    let dataset = drop_incomplete(&raw).map_err(|e| AppError::core(context, e))?;
    Ok(LoadedData { raw, dataset })
}

/// Parses feature-only records for prediction: comma-separated, exactly
/// `n_features` numeric fields per line. A leading non-numeric line is
/// skipped as a header.
pub fn parse_records(text: &str, n_features: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let numeric: Option<Vec<f64>> = fields
            .iter()
            .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match numeric {
            Some(values) => {
                if values.len() != n_features {
                    return Err(AppError::core(
                        format!("record {}", i + 1),
                        heartml_core::Error::LengthMismatch {
                            expected: n_features,
                            found: values.len(),
                        },
                    ));
                }
                out.push(values);
            }
            None if out.is_empty() && i == 0 => continue,
            None => {
                return Err(AppError::core(
                    format!("record {}", i + 1),
                    heartml_core::Error::NonNumericCell {
                        line: i + 1,
                        column: fields
                            .iter()
                            .position(|f| f.parse::<f64>().map_or(true, |v| !v.is_finite()))
                            .map_or(0, |c| c + 1),
                    },
                ))
            }
        }
    }
    Ok(out)
}
