//! Feature schema of the Cleveland heart-disease table.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Continuous,
    Ordinal,
    Categorical,
    Binary,
}

impl FeatureKind {
    /// Discrete kinds are modelled with frequency tables and binned by code.
    pub fn is_discrete(self) -> bool {
        !matches!(self, FeatureKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub name: String,
    pub kind: FeatureKind,
    /// Finite value set for discrete kinds. `None` means any finite real.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed_values: Option<Vec<f64>>,
}

impl FeatureSchema {
    pub fn continuous(name: &str) -> Self {
        FeatureSchema {
            name: name.to_string(),
            kind: FeatureKind::Continuous,
            allowed_values: None,
        }
    }

    pub fn discrete(name: &str, kind: FeatureKind, values: &[f64]) -> Self {
        FeatureSchema {
            name: name.to_string(),
            kind,
            allowed_values: Some(values.to_vec()),
        }
    }

    pub fn allows(&self, value: f64) -> bool {
        match &self.allowed_values {
            Some(values) => values.contains(&value),
            None => value.is_finite(),
        }
    }
}

/// The 13 input columns in file order.
pub fn cleveland_schema() -> Vec<FeatureSchema> {
    use FeatureKind::*;
    vec![
        FeatureSchema::continuous("Age"),
        FeatureSchema::discrete("Sex", Binary, &[0.0, 1.0]),
        FeatureSchema::discrete("Cp", Categorical, &[1.0, 2.0, 3.0, 4.0]),
        FeatureSchema::continuous("Restbp"),
        FeatureSchema::continuous("Chol"),
        FeatureSchema::discrete("fbs", Binary, &[0.0, 1.0]),
        FeatureSchema::discrete("RestECG", Categorical, &[0.0, 1.0, 2.0]),
        FeatureSchema::continuous("MaxHeart"),
        FeatureSchema::discrete("ExAng", Binary, &[0.0, 1.0]),
        FeatureSchema::continuous("OldPeak"),
        FeatureSchema::discrete("Slope", Categorical, &[1.0, 2.0, 3.0]),
        FeatureSchema::discrete("MajorVessels", Ordinal, &[0.0, 1.0, 2.0, 3.0]),
        FeatureSchema::discrete("Thal", Categorical, &[3.0, 6.0, 7.0]),
    ]
}

/// Features retained for model training.
pub const SELECTED_FEATURES: [&str; 7] = [
    "Cp",
    "MaxHeart",
    "ExAng",
    "OldPeak",
    "Slope",
    "MajorVessels",
    "Thal",
];

/// Features dropped as weakly related to the diagnosis.
pub const REMOVED_FEATURES: [&str; 6] = ["Age", "Sex", "Chol", "fbs", "Restbp", "RestECG"];

/// Original UCI column names, accepted by the header-aware loader.
const UCI_ALIASES: [(&str, &str); 13] = [
    ("age", "Age"),
    ("sex", "Sex"),
    ("cp", "Cp"),
    ("trestbps", "Restbp"),
    ("chol", "Chol"),
    ("fbs", "fbs"),
    ("restecg", "RestECG"),
    ("thalach", "MaxHeart"),
    ("exang", "ExAng"),
    ("oldpeak", "OldPeak"),
    ("slope", "Slope"),
    ("ca", "MajorVessels"),
    ("thal", "Thal"),
];

/// Resolves a header name against the canonical schema, case-insensitively,
/// accepting both the readable names and the UCI abbreviations. Unknown names
/// become continuous features.
pub fn schema_for_header(name: &str) -> FeatureSchema {
    let name = name.trim();
    let canonical = cleveland_schema();
    if let Some(f) = canonical.iter().find(|f| f.name.eq_ignore_ascii_case(name)) {
        return f.clone();
    }
    if let Some((_, target)) = UCI_ALIASES
        .iter()
        .find(|(alias, _)| alias.eq_ignore_ascii_case(name))
    {
        if let Some(f) = canonical.iter().find(|f| f.name == *target) {
            return f.clone();
        }
    }
    FeatureSchema::continuous(name)
}
