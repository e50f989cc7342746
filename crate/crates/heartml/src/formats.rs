//! JSON formats: cleaned datasets, saved models, grids and parameters.

use std::path::Path;

use heartml_core::classifiers::HyperParams;
use heartml_core::tuning::Grid;
use heartml_core::{Dataset, TrainedModel};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::io;

pub const MODEL_FORMAT: &str = "heartml-model";
pub const MODEL_VERSION: u32 = 1;

fn json_err(context: impl Into<String>) -> impl FnOnce(serde_json::Error) -> AppError {
    let context = context.into();
    move |source| AppError::Json { context, source }
}

/// Canonical JSON form of a dataset: schema, rows and provenance.
pub fn dataset_to_json(ds: &Dataset) -> String {
    serde_json::to_string_pretty(ds).expect("dataset serializes")
}

pub fn dataset_from_json(text: &str) -> Result<Dataset> {
    serde_json::from_str(text).map_err(json_err("dataset"))
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    model: TrainedModel,
}

/// Versioned model file. Floats are written in shortest round-trip form,
/// so a reloaded model is bit-identical.
pub fn model_to_json(model: &TrainedModel) -> String {
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        model: model.clone(),
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

pub fn model_from_json(text: &str) -> Result<TrainedModel> {
    #[derive(Deserialize)]
    struct Header {
        format: String,
        version: u32,
    }
    let header: Header = serde_json::from_str(text).map_err(json_err("model file"))?;
    if header.format != MODEL_FORMAT {
        return Err(AppError::Usage(format!(
            "not a model file (format {:?})",
            header.format
        )));
    }
    if header.version != MODEL_VERSION {
        return Err(AppError::ModelVersion(header.version));
    }
    let file: ModelFile = serde_json::from_str(text).map_err(json_err("model file"))?;
    Ok(file.model)
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    io::write_text(path, &model_to_json(model))
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    model_from_json(&io::read_text(path)?)
}

/// Inline JSON when the argument starts with `[` or `{`, otherwise a path.
fn inline_or_file(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        Ok(arg.to_string())
    } else {
        io::read_text(Path::new(arg))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridSpec {
    List(Vec<HyperParams>),
    Object { candidates: Vec<HyperParams> },
}

/// Parses a grid override: a JSON array of parameter objects, or an object
/// with a `candidates` array, e.g.
/// `[{"algorithm":"knn","k":3},{"algorithm":"knn","k":11}]`.
pub fn grid_from_arg(arg: &str) -> Result<Grid> {
    let text = inline_or_file(arg)?;
    let spec: GridSpec = serde_json::from_str(&text).map_err(json_err("grid"))?;
    let candidates = match spec {
        GridSpec::List(c) | GridSpec::Object { candidates: c } => c,
    };
    Grid::new(candidates).map_err(|e| AppError::core("grid", e))
}

/// Parses one parameter object, e.g. `{"algorithm":"svm","c":0.25,"sigma":0.1268408}`.
pub fn params_from_arg(arg: &str) -> Result<HyperParams> {
    let text = inline_or_file(arg)?;
    let params: HyperParams = serde_json::from_str(&text).map_err(json_err("params"))?;
    params.validate().map_err(|e| AppError::core("params", e))?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use heartml_core::classifiers::Algorithm;

    #[test]
    fn grid_forms() {
        let g = grid_from_arg(r#"[{"algorithm":"knn","k":3},{"algorithm":"knn","k":11}]"#).unwrap();
        assert_eq!(g.algorithm, Algorithm::Knn);
        assert_eq!(g.len(), 2);
        let g =
            grid_from_arg(r#"{"candidates":[{"algorithm":"svm","c":1.0,"sigma":0.5}]}"#).unwrap();
        assert_eq!(g.candidates[0], HyperParams::Svm { c: 1.0, sigma: 0.5 });
        assert!(grid_from_arg("[]").is_err());
        assert!(grid_from_arg(r#"[{"algorithm":"knn","k":4}]"#).is_err());
    }

    #[test]
    fn params_json() {
        let p = params_from_arg(
            r#"{"algorithm":"nb","use_kernel_density":false,"laplace":0.0,"bandwidth_adjust":1.0}"#,
        )
        .unwrap();
        assert_eq!(p, HyperParams::gaussian_nb());
        assert!(params_from_arg(r#"{"algorithm":"svm","c":-1.0,"sigma":1.0}"#).is_err());
    }

    #[test]
    fn wrong_model_version() {
        let text = r#"{"format":"heartml-model","version":9,"model":null}"#;
        assert!(matches!(
            model_from_json(text),
            Err(AppError::ModelVersion(9))
        ));
        let text = r#"{"format":"other","version":1,"model":null}"#;
        assert!(matches!(model_from_json(text), Err(AppError::Usage(_))));
    }
}
