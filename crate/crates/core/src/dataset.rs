//! Parsing, cleaning and column transforms for the Cleveland table.
//!
//! The input layout is the UCI `processed.cleveland.data` file: one record per
//! line, 13 comma-separated features followed by the diagnosis, `?` marking a
//! missing cell, no header. [`parse_csv_auto`] also accepts a leading header
//! line naming the columns.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::schema::{self, FeatureKind, FeatureSchema};

/// Binary diagnosis. `Positive` is disease (more than 50% narrowing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Negative, Label::Positive];

    pub fn index(self) -> usize {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }

    pub fn from_index(i: usize) -> Label {
        if i == 0 {
            Label::Negative
        } else {
            Label::Positive
        }
    }

    /// `-1.0` / `+1.0`, the SVM sign convention.
    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.index() as u8
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> core::result::Result<Self, String> {
        match v {
            0 => Ok(Label::Negative),
            1 => Ok(Label::Positive),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub features: Vec<f64>,
    pub label: Label,
}

/// A parsed row before cleaning. `None` marks a `?` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    /// 1-based line number in the source text.
    pub line: usize,
    pub cells: Vec<Option<f64>>,
    pub target: Option<f64>,
}

impl RawRow {
    pub fn is_complete(&self) -> bool {
        self.target.is_some() && self.cells.iter().all(Option::is_some)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub schema: Vec<FeatureSchema>,
    pub rows: Vec<RawRow>,
    pub source: String,
}

impl RawTable {
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn incomplete_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_complete()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Vec<FeatureSchema>,
    pub rows: Vec<Record>,
    pub provenance: String,
}

fn parse_cell(cell: &str, line: usize, column: usize) -> Result<Option<f64>> {
    let cell = cell.trim();
    if cell == "?" {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(Error::NonNumericCell { line, column }),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Parses headerless comma-separated text against `schema`. Every non-empty
/// line must carry `schema.len() + 1` fields, the last one being the target.
pub fn parse_csv(text: &str, schema: &[FeatureSchema]) -> Result<RawTable> {
    parse_lines(data_lines(text), schema)
}

fn parse_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    schema: &[FeatureSchema],
) -> Result<RawTable> {
    let expected = schema.len() + 1;
    let mut rows = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != expected {
            return Err(Error::WrongFieldCount {
                line,
                expected,
                found: fields.len(),
            });
        }
        let cells = fields[..schema.len()]
            .iter()
            .enumerate()
            .map(|(j, c)| parse_cell(c, line, j + 1))
            .collect::<Result<Vec<_>>>()?;
        let target = parse_cell(fields[schema.len()], line, expected)?;
        rows.push(RawRow {
            line,
            cells,
            target,
        });
    }
    if rows.is_empty() {
        return Err(Error::NoInput);
    }
    Ok(RawTable {
        schema: schema.to_vec(),
        rows,
        source: "inline".to_string(),
    })
}

/// Parses text that may start with a header line. A first line containing
/// any cell that is neither `?` nor a number is taken as a header; its last
/// column names the target and the rest are resolved with
/// [`schema::schema_for_header`]. Without a header the canonical 13-feature
/// schema applies.
pub fn parse_csv_auto(text: &str) -> Result<RawTable> {
    let mut lines = data_lines(text).peekable();
    let header = match lines.peek() {
        Some((_, first)) => first
            .split(',')
            .any(|c| c.trim() != "?" && c.trim().parse::<f64>().is_err()),
        None => return Err(Error::NoInput),
    };
    if !header {
        return parse_lines(lines, &schema::cleveland_schema());
    }
    let (_, head) = lines.next().unwrap_or((0, ""));
    let names: Vec<&str> = head.split(',').collect();
    if names.len() < 2 {
        return Err(Error::WrongFieldCount {
            line: 1,
            expected: 2,
            found: names.len(),
        });
    }
    let schema: Vec<FeatureSchema> = names[..names.len() - 1]
        .iter()
        .map(|n| schema::schema_for_header(n))
        .collect();
    parse_lines(lines, &schema)
}

/// Maps the raw 0..=4 diagnosis onto the binary label: 0 stays negative,
/// 1 through 4 become positive.
pub fn binarize_target(raw: f64) -> Result<Label> {
    if libm::trunc(raw) != raw || !(0.0..=4.0).contains(&raw) {
        return Err(Error::OutOfRangeTarget(raw));
    }
    Ok(if raw == 0.0 {
        Label::Negative
    } else {
        Label::Positive
    })
}

/// Removes every row with a missing cell, binarizes the target and checks
/// discrete features against their allowed values. Row order is preserved.
pub fn drop_incomplete(raw: &RawTable) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(raw.rows.len());
    for row in raw.rows.iter().filter(|r| r.is_complete()) {
        let features: Vec<f64> = row.cells.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
        for (value, feature) in features.iter().zip(&raw.schema) {
            if !feature.allows(*value) {
                return Err(Error::DisallowedValue {
                    line: row.line,
                    feature: feature.name.clone(),
                    value: *value,
                });
            }
        }
        let label = binarize_target(row.target.unwrap_or(f64::NAN))?;
        rows.push(Record { features, label });
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset {
        schema: raw.schema.clone(),
        rows,
        provenance: raw.source.clone(),
    })
}

impl Dataset {
    /// Builds a dataset, checking row arity against the schema.
    pub fn new(
        schema: Vec<FeatureSchema>,
        rows: Vec<Record>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        for r in &rows {
            if r.features.len() != schema.len() {
                return Err(Error::LengthMismatch {
                    expected: schema.len(),
                    found: r.features.len(),
                });
            }
        }
        Ok(Dataset {
            schema,
            rows,
            provenance: provenance.into(),
        })
    }

    /// All-continuous dataset from plain vectors, handy for synthetic data.
    pub fn from_vectors(features: Vec<Vec<f64>>, labels: &[Label]) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: features.len(),
                found: labels.len(),
            });
        }
        let n = features.first().map_or(0, Vec::len);
        let schema = (0..n)
            .map(|j| FeatureSchema::continuous(&format!("x{j}")))
            .collect();
        let rows = features
            .into_iter()
            .zip(labels)
            .map(|(features, &label)| Record { features, label })
            .collect();
        Dataset::new(schema, rows, "synthetic")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.schema.iter().map(|f| f.name.clone()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|f| f.name == name)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.features[j]).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    /// Row counts per class, indexed by [`Label::index`].
    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for r in &self.rows {
            counts[r.label.index()] += 1;
        }
        counts
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Keeps the columns at `indices`, in that order.
    pub fn project(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: indices.iter().map(|&j| self.schema[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| Record {
                    features: indices.iter().map(|&j| r.features[j]).collect(),
                    label: r.label,
                })
                .collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Restricts the dataset to the named columns, in `keep` order.
pub fn select_columns<S: AsRef<str>>(ds: &Dataset, keep: &[S]) -> Result<Dataset> {
    let indices = keep
        .iter()
        .map(|name| {
            ds.feature_index(name.as_ref())
                .ok_or_else(|| Error::UnknownFeature(name.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ds.project(&indices))
}

/// Mean and standard deviation of one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub std_dev: f64,
}

/// Per-feature z-score parameters. Entries for non-continuous features are
/// `None` and those columns are left untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStats {
    pub columns: Vec<Option<ColumnStats>>,
}

impl ScalingStats {
    /// Fits z-score parameters on the continuous columns of `ds`, using the
    /// sample standard deviation.
    pub fn fit(ds: &Dataset) -> ScalingStats {
        let columns = ds
            .schema
            .iter()
            .enumerate()
            .map(|(j, f)| {
                (f.kind == FeatureKind::Continuous).then(|| {
                    let col = ds.column(j);
                    ColumnStats {
                        mean: math::mean(&col),
                        std_dev: math::sqrt(math::sample_variance(&col)),
                    }
                })
            })
            .collect();
        ScalingStats { columns }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Applies the transform in place. Zero-variance columns pass through.
    pub fn apply(&self, x: &mut [f64]) {
        for (v, stats) in x.iter_mut().zip(&self.columns) {
            if let Some(s) = stats {
                if s.std_dev > 0.0 {
                    *v = (*v - s.mean) / s.std_dev;
                }
            }
        }
    }

    /// Inverse of [`ScalingStats::apply`].
    pub fn invert(&self, x: &mut [f64]) {
        for (v, stats) in x.iter_mut().zip(&self.columns) {
            if let Some(s) = stats {
                if s.std_dev > 0.0 {
                    *v = *v * s.std_dev + s.mean;
                }
            }
        }
    }

    pub fn transform(&self, ds: &Dataset) -> Result<Dataset> {
        if self.len() != ds.n_features() {
            return Err(Error::StatsMismatch {
                expected: ds.n_features(),
                found: self.len(),
            });
        }
        let mut out = ds.clone();
        for r in &mut out.rows {
            self.apply(&mut r.features);
        }
        Ok(out)
    }
}

/// Z-scores the continuous columns. With `stats` absent they are fitted on
/// `ds`; either way the statistics used are returned for reuse.
pub fn standardize(ds: &Dataset, stats: Option<&ScalingStats>) -> Result<(Dataset, ScalingStats)> {
    let stats = match stats {
        Some(s) => s.clone(),
        None => ScalingStats::fit(ds),
    };
    let out = stats.transform(ds)?;
    Ok((out, stats))
}
