//! The `heartml` command line.
//!
//! Every subcommand renders one report (text, JSON or CSV) to standard
//! output or to `--out`. Exit statuses follow [`ExitCode`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use heartml_core::classifiers::{Algorithm, HyperParams, TrainedModel};
use heartml_core::dataset::select_columns;
use heartml_core::evaluation::cross_validate;
use heartml_core::feature_selection::{
    aggregate_selection, best_first_subset, rank_features, Evaluator, DEFAULT_STALE_LIMIT,
};
use heartml_core::schema::SELECTED_FEATURES;
use heartml_core::tuning::{compare_models, default_grid, grid_search, Grid, DEFAULT_SIGMA};
use heartml_core::Dataset;

use crate::error::{AppError, ExitCode, Result};
use crate::formats;
use crate::io::{self, LoadedData};
use crate::report::*;

const DEFAULT_SEED: u64 = 2018;
const SUBSET_SEED: u64 = 1;
/// How many top-ranked features each ranker contributes to the aggregate.
const AGGREGATE_TOP_N: usize = 7;

#[derive(Debug, Parser)]
#[command(
    name = "heartml",
    version,
    about = "Feature selection, classification and model comparison for the Cleveland heart disease data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and clean a data file, and summarize it.
    Inspect {
        #[command(flatten)]
        data: DataArgs,
        /// Also write the cleaned dataset as JSON to this path.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rank features by information gain and/or correlation with the class.
    Rank {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = EvaluatorArg::Both)]
        evaluator: EvaluatorArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best-first wrapper search for a feature subset.
    Subset {
        #[command(flatten)]
        data: DataArgs,
        /// Wrapped classifier (default naive Bayes).
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
        /// Wrapped classifier parameters as JSON (inline or a file path).
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
        /// Stop after this many expansions without improvement.
        #[arg(long, default_value_t = DEFAULT_STALE_LIMIT)]
        stale_limit: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-validate one classifier configuration.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
        /// Parameters as JSON (inline or a file path); overrides --algorithm.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Grid-search one or all algorithms and refit the best on all rows.
    Tune {
        #[command(flatten)]
        data: DataArgs,
        /// Algorithm to tune; all three when omitted.
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
        /// Candidate list as JSON (inline or a file path).
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
        /// Save the refitted model here (single algorithm only).
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tune all three algorithms on shared folds and compare them.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// Replacement grid for one algorithm; may be repeated.
        #[arg(long)]
        grid: Vec<String>,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify records with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// File of comma-separated feature records, one per line.
        #[arg(long)]
        input: Option<PathBuf>,
        /// One comma-separated record; may be repeated.
        #[arg(long)]
        record: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Data file in the UCI comma-separated layout.
    #[arg(long, default_value = "data/processed.cleveland.data")]
    pub data: PathBuf,
    /// Comma-separated feature names, or `all`.
    #[arg(long)]
    pub keep: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Disable z-scoring of continuous features.
    #[arg(long, conflicts_with = "scale")]
    pub no_scale: bool,
    /// Force z-scoring, including for naive Bayes.
    #[arg(long)]
    pub scale: bool,
}

impl EvalArgs {
    fn scaling(&self) -> Option<bool> {
        if self.no_scale {
            Some(false)
        } else if self.scale {
            Some(true)
        } else {
            None
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorArg {
    InfoGain,
    Correlation,
    Both,
}

impl EvaluatorArg {
    fn evaluators(self) -> Vec<Evaluator> {
        match self {
            EvaluatorArg::InfoGain => vec![Evaluator::InfoGain],
            EvaluatorArg::Correlation => vec![Evaluator::Correlation],
            EvaluatorArg::Both => vec![Evaluator::InfoGain, Evaluator::Correlation],
        }
    }
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: heartml_core::Error| e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::Usage as i32
            } else {
                ExitCode::Success as i32
            };
        }
    };
    match run(&cli.command) {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::Success as i32
        }
        Ok(None) => ExitCode::Success as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    }
}

/// Runs a command. Returns the rendered report when it goes to standard
/// output, `None` when it was written to `--out`.
pub fn run(command: &Command) -> Result<Option<String>> {
    let (text, output) = match command {
        Command::Inspect {
            data,
            export,
            output,
        } => (inspect(data, export.as_deref(), output)?, output),
        Command::Rank {
            data,
            evaluator,
            output,
        } => (rank(data, *evaluator, output)?, output),
        Command::Subset {
            data,
            algorithm,
            params,
            eval,
            stale_limit,
            output,
        } => (
            subset(
                data,
                *algorithm,
                params.as_deref(),
                eval,
                *stale_limit,
                output,
            )?,
            output,
        ),
        Command::Cv {
            data,
            algorithm,
            params,
            eval,
            output,
        } => (
            cv(data, *algorithm, params.as_deref(), eval, output)?,
            output,
        ),
        Command::Tune {
            data,
            algorithm,
            grid,
            eval,
            model,
            output,
        } => (
            tune(
                data,
                *algorithm,
                grid.as_deref(),
                eval,
                model.as_deref(),
                output,
            )?,
            output,
        ),
        Command::Compare {
            data,
            grid,
            eval,
            output,
        } => (compare(data, grid, eval, output)?, output),
        Command::Predict {
            model,
            input,
            record,
            output,
        } => (predict(model, input.as_deref(), record, output)?, output),
    };
    match &output.out {
        Some(path) => {
            io::write_text(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KeepDefault {
    All,
    Selected,
}

fn resolve_keep(ds: &Dataset, keep: Option<&str>, default: KeepDefault) -> Option<Vec<String>> {
    match keep.map(str::trim) {
        Some("all") => None,
        Some(list) => Some(
            list.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        ),
        None if default == KeepDefault::Selected
            && SELECTED_FEATURES
                .iter()
                .all(|f| ds.feature_index(f).is_some()) =>
        {
            Some(SELECTED_FEATURES.iter().map(|s| s.to_string()).collect())
        }
        None => None,
    }
}

fn load(
    args: &DataArgs,
    default: KeepDefault,
    config: &mut RunConfig,
) -> Result<(LoadedData, Dataset)> {
    let loaded = io::load_dataset(&args.data)?;
    let keep = resolve_keep(&loaded.dataset, args.keep.as_deref(), default);
    let ds = match &keep {
        Some(cols) => {
            select_columns(&loaded.dataset, cols).map_err(|e| AppError::core("--keep", e))?
        }
        None => loaded.dataset.clone(),
    };
    config.data_path = Some(args.data.display().to_string());
    config.keep_features = Some(ds.feature_names());
    Ok((loaded, ds))
}

fn base_config(command: &str, output: &OutputArgs) -> RunConfig {
    let mut c = RunConfig::new(command, output.format);
    c.output_path = output.out.as_ref().map(|p| p.display().to_string());
    c
}

fn apply_eval(config: &mut RunConfig, eval: &EvalArgs, default_seed: u64) -> u64 {
    let seed = eval.seed.unwrap_or(default_seed);
    config.folds = eval.folds;
    config.seed = seed;
    config.scaling = eval.scaling();
    seed
}

fn render<T: serde::Serialize>(
    report: &Report<T>,
    format: OutputFormat,
    text: impl Fn(&Report<T>) -> String,
    csv: impl Fn(&Report<T>) -> Result<String>,
) -> Result<String> {
    match format {
        OutputFormat::Text => Ok(text(report)),
        OutputFormat::Json => Ok(report.to_json()),
        OutputFormat::Csv => csv(report),
    }
}

/// Parameters used when only an algorithm is named.
pub fn default_params(algorithm: Algorithm) -> HyperParams {
    match algorithm {
        Algorithm::Svm => HyperParams::Svm {
            c: 0.25,
            sigma: DEFAULT_SIGMA,
        },
        Algorithm::Knn => HyperParams::Knn { k: 5 },
        Algorithm::NaiveBayes => HyperParams::gaussian_nb(),
    }
}

fn inspect(data: &DataArgs, export: Option<&Path>, output: &OutputArgs) -> Result<String> {
    let mut config = base_config("inspect", output);
    let (loaded, ds) = load(data, KeepDefault::All, &mut config)?;
    if let Some(path) = export {
        io::write_text(path, &formats::dataset_to_json(&ds))?;
    }
    let [negative, positive] = ds.class_counts();
    let features = ds
        .schema
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let col = ds.column(j);
            FeatureSummary {
                name: f.name.clone(),
                kind: f.kind,
                min: col.iter().copied().fold(f64::INFINITY, f64::min),
                max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean: col.iter().sum::<f64>() / col.len() as f64,
            }
        })
        .collect();
    let summary = InspectSummary {
        source: loaded.raw.source.clone(),
        parsed: loaded.parsed(),
        dropped: loaded.dropped(),
        kept: ds.len(),
        negative,
        positive,
        features,
    };
    render(
        &Report::new(config, summary),
        output.format,
        inspect_text,
        inspect_csv,
    )
}

fn rank(data: &DataArgs, evaluator: EvaluatorArg, output: &OutputArgs) -> Result<String> {
    let mut config = base_config("rank", output);
    let (_, ds) = load(data, KeepDefault::All, &mut config)?;
    config.evaluator = Some(format!("{evaluator:?}").to_lowercase());
    let rankings = evaluator
        .evaluators()
        .into_iter()
        .map(|e| rank_features(&ds, e).map_err(|err| AppError::core("rank", err)))
        .collect::<Result<Vec<_>>>()?;
    render(
        &Report::new(config, RankSummary { rankings }),
        output.format,
        rank_text,
        rank_csv,
    )
}

fn chosen_params(
    algorithm: Option<Algorithm>,
    params: Option<&str>,
    fallback: Algorithm,
) -> Result<HyperParams> {
    match params {
        Some(p) => {
            let parsed = formats::params_from_arg(p)?;
            if let Some(a) = algorithm {
                if a != parsed.algorithm() {
                    return Err(AppError::Usage(format!(
                        "--params is for {} but --algorithm is {a}",
                        parsed.algorithm()
                    )));
                }
            }
            Ok(parsed)
        }
        None => Ok(default_params(algorithm.unwrap_or(fallback))),
    }
}

fn subset(
    data: &DataArgs,
    algorithm: Option<Algorithm>,
    params: Option<&str>,
    eval: &EvalArgs,
    stale_limit: usize,
    output: &OutputArgs,
) -> Result<String> {
    let mut config = base_config("subset", output);
    let (_, ds) = load(data, KeepDefault::All, &mut config)?;
    let seed = apply_eval(&mut config, eval, SUBSET_SEED);
    let wrapped = chosen_params(algorithm, params, Algorithm::NaiveBayes)?;
    let scale = eval
        .scaling()
        .unwrap_or_else(|| wrapped.algorithm().scales_by_default());
    config.algorithm = Some(wrapped.algorithm());
    config.params = Some(wrapped);
    config.stale_limit = Some(stale_limit);
    let search = best_first_subset(&ds, &wrapped, eval.folds, seed, stale_limit, scale)
        .map_err(|e| AppError::core("subset search", e))?;
    let rankings = [Evaluator::InfoGain, Evaluator::Correlation]
        .into_iter()
        .map(|e| rank_features(&ds, e).map_err(|err| AppError::core("rank", err)))
        .collect::<Result<Vec<_>>>()?;
    let aggregate = aggregate_selection(&ds.schema, &rankings, AGGREGATE_TOP_N, &search.selected);
    let summary = SubsetSummary {
        wrapped,
        search,
        aggregate_selection: aggregate,
    };
    render(
        &Report::new(config, summary),
        output.format,
        subset_text,
        subset_csv,
    )
}

fn cv(
    data: &DataArgs,
    algorithm: Option<Algorithm>,
    params: Option<&str>,
    eval: &EvalArgs,
    output: &OutputArgs,
) -> Result<String> {
    let mut config = base_config("cv", output);
    if algorithm.is_none() && params.is_none() {
        return Err(AppError::Usage("cv needs --algorithm or --params".into()));
    }
    let (_, ds) = load(data, KeepDefault::Selected, &mut config)?;
    let seed = apply_eval(&mut config, eval, DEFAULT_SEED);
    let params = chosen_params(algorithm, params, Algorithm::NaiveBayes)?;
    let scaled = eval
        .scaling()
        .unwrap_or_else(|| params.algorithm().scales_by_default());
    config.algorithm = Some(params.algorithm());
    config.params = Some(params);
    let result = cross_validate(&ds, &params, eval.folds, seed, scaled)
        .map_err(|e| AppError::core("cross-validation", e))?;
    let summary = CvSummary {
        params,
        scaled,
        cv: result,
    };
    render(
        &Report::new(config, summary),
        output.format,
        cv_text,
        cv_csv,
    )
}

fn tune(
    data: &DataArgs,
    algorithm: Option<Algorithm>,
    grid: Option<&str>,
    eval: &EvalArgs,
    model: Option<&Path>,
    output: &OutputArgs,
) -> Result<String> {
    let mut config = base_config("tune", output);
    let custom = grid.map(formats::grid_from_arg).transpose()?;
    let grids: Vec<Grid> = match (&custom, algorithm) {
        (Some(g), Some(a)) if g.algorithm != a => {
            return Err(AppError::Usage(format!(
                "--grid is for {} but --algorithm is {a}",
                g.algorithm
            )))
        }
        (Some(g), _) => vec![g.clone()],
        (None, Some(a)) => vec![default_grid(a)],
        (None, None) => Algorithm::ALL.iter().map(|&a| default_grid(a)).collect(),
    };
    if model.is_some() && grids.len() != 1 {
        return Err(AppError::Usage(
            "--model needs a single algorithm (--algorithm or --grid)".into(),
        ));
    }
    let (_, ds) = load(data, KeepDefault::Selected, &mut config)?;
    let seed = apply_eval(&mut config, eval, DEFAULT_SEED);
    config.algorithm = (grids.len() == 1).then(|| grids[0].algorithm);
    config.grid = custom.map(|g| g.candidates);
    config.model_path = model.map(|p| p.display().to_string());

    let mut results = Vec::with_capacity(grids.len());
    let mut last_model: Option<TrainedModel> = None;
    for g in &grids {
        let scale = eval
            .scaling()
            .unwrap_or_else(|| g.algorithm.scales_by_default());
        let t = grid_search(&ds, g, eval.folds, seed, scale)
            .map_err(|e| AppError::core(format!("tuning {}", g.algorithm), e))?;
        results.push(TuneSummary::from(&t));
        last_model = Some(t.final_model);
    }
    if let (Some(path), Some(m)) = (model, &last_model) {
        formats::save_model(m, path)?;
    }
    render(
        &Report::new(config, results),
        output.format,
        tune_text,
        tune_csv,
    )
}

fn compare(
    data: &DataArgs,
    grid_args: &[String],
    eval: &EvalArgs,
    output: &OutputArgs,
) -> Result<String> {
    let mut config = base_config("compare", output);
    let mut grids: Vec<Grid> = Algorithm::ALL.iter().map(|&a| default_grid(a)).collect();
    let mut overrides = Vec::new();
    for arg in grid_args {
        let g = formats::grid_from_arg(arg)?;
        overrides.extend(g.candidates.iter().copied());
        let slot = grids
            .iter_mut()
            .find(|x| x.algorithm == g.algorithm)
            .expect("every algorithm has a default grid");
        *slot = g;
    }
    let (_, ds) = load(data, KeepDefault::Selected, &mut config)?;
    let seed = apply_eval(&mut config, eval, DEFAULT_SEED);
    if !overrides.is_empty() {
        config.grid = Some(overrides);
    }
    let comparison = compare_models(&ds, &grids, eval.folds, seed, eval.scaling())
        .map_err(|e| AppError::core("comparison", e))?;
    render(
        &Report::new(config, CompareSummary::from(&comparison)),
        output.format,
        compare_text,
        compare_csv,
    )
}

fn predict(
    model_path: &Path,
    input: Option<&Path>,
    records: &[String],
    output: &OutputArgs,
) -> Result<String> {
    let mut config = base_config("predict", output);
    config.model_path = Some(model_path.display().to_string());
    config.data_path = input.map(|p| p.display().to_string());
    let model = formats::load_model(model_path)?;
    config.algorithm = Some(model.params.algorithm());
    config.params = Some(model.params);
    config.keep_features = Some(model.feature_names.clone());

    let mut rows = Vec::new();
    if let Some(path) = input {
        rows.extend(io::parse_records(
            &io::read_text(path)?,
            model.n_features(),
        )?);
    }
    if !records.is_empty() {
        rows.extend(io::parse_records(&records.join("\n"), model.n_features())?);
    }
    if rows.is_empty() {
        return Err(AppError::Usage("predict needs --input or --record".into()));
    }
    let predictions = rows
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let ctx = || format!("record {}", i + 1);
            let label = model.predict(x).map_err(|e| AppError::core(ctx(), e))?;
            let posterior = model.posterior(x).map_err(|e| AppError::core(ctx(), e))?;
            Ok(Prediction {
                label: label.index() as u8,
                posterior: posterior.map(|p| p.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = PredictSummary {
        algorithm: model.params.algorithm(),
        features: model.feature_names.clone(),
        predictions,
    };
    render(
        &Report::new(config, summary),
        output.format,
        predict_text,
        predict_csv,
    )
}
