//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

#[path = "../../core/tests/common/qp.rs"]
mod qp;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use heartml_core::classifiers::{
    knn_fit, nb_fit, smo_solve, Algorithm, HyperParams, SolverOptions,
};
use heartml_core::dataset::{drop_incomplete, parse_csv, select_columns};
use heartml_core::evaluation::{confusion, cross_validate, metrics};
use heartml_core::feature_selection::{best_first_subset, rank_features, Evaluator};
use heartml_core::schema::{cleveland_schema, REMOVED_FEATURES, SELECTED_FEATURES};
use heartml_core::tuning::{compare_default, default_grid, grid_search};
use heartml_core::{ConfusionMatrix, Dataset, Label};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const SEED: u64 = 2018;

fn data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/processed.cleveland.data")
}

fn cleveland() -> Dataset {
    let text = std::fs::read_to_string(data_path()).unwrap();
    drop_incomplete(&parse_csv(&text, &cleveland_schema()).unwrap()).unwrap()
}

fn selected() -> Dataset {
    select_columns(&cleveland(), &SELECTED_FEATURES).unwrap()
}

fn label(positive: bool) -> Label {
    if positive {
        Label::Positive
    } else {
        Label::Negative
    }
}

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn headline_accuracy() -> Outcome {
    let ds = selected();
    let start = Instant::now();
    let cv = cross_validate(&ds, &HyperParams::gaussian_nb(), 10, SEED, false).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = (cv.mean_accuracy - 0.84).abs() <= 0.03 && ds.len() == 297 && secs < 5.0;
    outcome(
        ok,
        format!(
            "Gaussian NB mean accuracy {:.4} on {} rows (target 0.84 +/- 0.03) in {secs:.3} s",
            cv.mean_accuracy,
            ds.len()
        ),
    )
}

fn model_ordering() -> Outcome {
    let ds = selected();
    let start = Instant::now();
    let c = compare_default(&ds, 10, SEED, None).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let values = |a: Algorithm| {
        c.row(a)
            .unwrap()
            .metrics
            .values()
            .map(|v| v.unwrap_or(f64::NAN))
    };
    let (nb, svm, knn) = (
        values(Algorithm::NaiveBayes),
        values(Algorithm::Svm),
        values(Algorithm::Knn),
    );
    let nb_ok = (0..4).all(|m| nb[m] >= svm[m] - 0.02 && nb[m] >= knn[m] - 0.02);
    let knn_last = (0..4)
        .filter(|&m| knn[m] < svm[m] && knn[m] < nb[m])
        .count();
    let fmt = |v: [f64; 4]| v.map(|x| format!("{x:.4}")).join("/");
    outcome(
        nb_ok && knn_last >= 3 && secs < 60.0,
        format!(
            "acc/rec/spec/prec NB {} SVM {} KNN {}; NB within 0.02 of best on all: {nb_ok}; \
             KNN strictly last on {knn_last} of 4 (need 3); {secs:.2} s",
            fmt(nb),
            fmt(svm),
            fmt(knn)
        ),
    )
}

fn feature_selection() -> Outcome {
    let ds = cleveland();
    let mut separated = Vec::new();
    for ev in [Evaluator::InfoGain, Evaluator::Correlation] {
        let r = rank_features(&ds, ev).unwrap();
        let worst_kept = SELECTED_FEATURES
            .iter()
            .map(|f| r.position(f).unwrap())
            .max()
            .unwrap();
        let best_removed = REMOVED_FEATURES
            .iter()
            .map(|f| r.position(f).unwrap())
            .min()
            .unwrap();
        separated.push((ev.name(), worst_kept < best_removed));
    }
    let subset = best_first_subset(&ds, &HyperParams::gaussian_nb(), 10, 1, 5, false).unwrap();
    let kept = subset
        .selected
        .iter()
        .filter(|f| SELECTED_FEATURES.contains(&f.as_str()))
        .count();
    let removed = subset
        .selected
        .iter()
        .filter(|f| REMOVED_FEATURES.contains(&f.as_str()))
        .count();
    let ok = separated.iter().any(|(_, s)| *s) && kept >= 4 && removed <= 1;
    outcome(
        ok,
        format!(
            "ranking separates the sets: {:?}; wrapper subset [{}] has {kept} of 7 kept, {removed} of 6 removed",
            separated,
            subset.selected.join(", ")
        ),
    )
}

fn grid_reachability() -> Outcome {
    let ds = selected();
    let targets = [
        (
            Algorithm::Svm,
            HyperParams::Svm {
                c: 0.25,
                sigma: 0.1268408,
            },
        ),
        (Algorithm::Knn, HyperParams::Knn { k: 5 }),
        (Algorithm::NaiveBayes, HyperParams::gaussian_nb()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (alg, target) in targets {
        let t = grid_search(&ds, &default_grid(alg), 10, SEED, alg.scales_by_default()).unwrap();
        let best = t.best_accuracy();
        let at_target = t
            .candidates
            .iter()
            .find(|c| c.params == target)
            .and_then(|c| c.mean_accuracy)
            .unwrap();
        let gap = best - at_target;
        let reached = t.best == target || gap <= 0.01;
        ok &= reached;
        parts.push(format!(
            "{alg}: best [{}] {best:.4}, expected [{target}] {at_target:.4}, gap {gap:.4} {}",
            t.best,
            if reached { "ok" } else { "too far" }
        ));
    }
    outcome(ok, parts.join("; "))
}

fn svm_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_obj, mut worst_kkt, mut worst_balance) = (0.0f64, 0.0f64, 0.0f64);
    let mut bounds_ok = true;
    for _ in 0..50 {
        let n = rng.random_range(2..=8);
        let d = rng.random_range(1..=3);
        let c = rng.random_range(0.05..20.0);
        let sigma = rng.random_range(0.1..5.0);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let mut y: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        y[0] = -1.0;
        y[1] = 1.0;
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        let sol = smo_solve(&refs, &y, c, sigma, &SolverOptions::default()).unwrap();
        let k = qp::gram(&points, sigma);
        let (best, _) = qp::solve(&points, &y, c, sigma);
        worst_obj = worst_obj.max((qp::dual_objective(&sol.alpha, &y, &k) - best).abs());
        bounds_ok &= sol.alpha.iter().all(|&a| (0.0..=c).contains(&a));
        worst_balance = worst_balance.max(
            sol.alpha
                .iter()
                .zip(&y)
                .map(|(a, y)| a * y)
                .sum::<f64>()
                .abs(),
        );
        let f: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| sol.alpha[j] * y[j] * k[i][j]).sum::<f64>() + sol.bias)
            .collect();
        worst_kkt = worst_kkt.max(qp::kkt_residual(&sol.alpha, &y, &f, c));
    }
    outcome(
        worst_obj <= 1e-4 && worst_kkt <= 1e-3 && bounds_ok && worst_balance <= 1e-8,
        format!(
            "50 instances: max objective gap {worst_obj:.2e}, max KKT residual {worst_kkt:.2e}, \
             max |sum alpha*y| {worst_balance:.2e}, bounds held: {bounds_ok}"
        ),
    )
}

fn nb_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // Class-conditional Gaussians with independent coordinates, so the
    // naive factorization is the true model.
    let mu = [[0.0, 0.0], [1.5, 1.0]];
    let sd = [[1.0, 1.0], [1.4, 0.7]];
    let draw = |rng: &mut ChaCha8Rng| {
        let y = rng.random_bool(0.5) as usize;
        let x: Vec<f64> = (0..2)
            .map(|j| Normal::new(mu[y][j], sd[y][j]).unwrap().sample(rng))
            .collect();
        (x, label(y == 1))
    };
    let n = 10_000;
    let (train_x, train_y): (Vec<_>, Vec<_>) = (0..n).map(|_| draw(&mut rng)).unzip();
    let train = Dataset::from_vectors(train_x, &train_y).unwrap();
    let gaussian = nb_fit(&train, false, 0.0, 1.0).unwrap();
    let kde = nb_fit(&train.subset(&(0..500).collect::<Vec<_>>()), true, 0.0, 1.0).unwrap();

    let mut worst_sum = 0.0f64;
    for q in 0..10_000 {
        let x = [rng.random_range(-15.0..15.0), rng.random_range(-15.0..15.0)];
        let model = if q % 2 == 0 { &gaussian } else { &kde };
        let p = model.posterior(&x).unwrap();
        worst_sum = worst_sum.max((p.0[0] + p.0[1] - 1.0).abs());
    }

    let log_density = |x: &[f64], c: usize| -> f64 {
        (0..2)
            .map(|j| {
                let z = (x[j] - mu[c][j]) / sd[c][j];
                -0.5 * z * z - sd[c][j].ln()
            })
            .sum()
    };
    let (mut nb_err, mut bayes_err) = (0usize, 0usize);
    for _ in 0..n {
        let (x, y) = draw(&mut rng);
        let bayes = label(log_density(&x, 1) > log_density(&x, 0));
        nb_err += (gaussian.predict(&x).unwrap() != y) as usize;
        bayes_err += (bayes != y) as usize;
    }
    let (nb_rate, bayes_rate) = (nb_err as f64 / n as f64, bayes_err as f64 / n as f64);
    outcome(
        worst_sum <= 1e-9 && (nb_rate - bayes_rate).abs() <= 0.02,
        format!(
            "10^4 posteriors: max |sum - 1| {worst_sum:.1e}; error rate NB {nb_rate:.4} vs Bayes-optimal {bayes_rate:.4}"
        ),
    )
}

fn metrics_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    let mut undefined_seen = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=40);
        let bias = rng.random_range(0.0..1.0);
        let predicted: Vec<Label> = (0..n).map(|_| label(rng.random_bool(bias))).collect();
        let actual: Vec<Label> = (0..n).map(|_| label(rng.random_bool(0.5))).collect();
        let report = metrics(&confusion(&predicted, &actual).unwrap()).unwrap();

        let mut cells = [[0usize; 2]; 2];
        for (p, a) in predicted.iter().zip(&actual) {
            cells[*p as usize][*a as usize] += 1;
        }
        let [[tn, fn_], [fp, tp]] = cells;
        let ratio = |a: usize, b: usize| {
            if b == 0 {
                None
            } else {
                Some(a as f64 / b as f64)
            }
        };
        let expected = [
            ratio(tp + tn, n),
            ratio(tp, tp + fn_),
            ratio(tn, tn + fp),
            ratio(tp, tp + fp),
        ];
        let matrix = ConfusionMatrix { tp, fp, tn, fn_ };
        if report.values() != expected || report.matrix != matrix {
            mismatches += 1;
        }
        undefined_seen += expected.iter().filter(|v| v.is_none()).count();
    }
    let all_negative =
        metrics(&confusion(&[Label::Negative; 3], &[Label::Negative; 3]).unwrap()).unwrap();
    let markers = all_negative.recall.is_none() && all_negative.precision.is_none();
    outcome(
        mismatches == 0 && markers,
        format!(
            "1000 random pairs: {mismatches} mismatches; {undefined_seen} undefined values matched; \
             all-negative case gives undefined recall and precision: {markers}"
        ),
    )
}

fn knn_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    let mut tie_queries = 0;
    for round in 0..10 {
        // Integer coordinates make distance ties common; duplicated
        // exemplars with flipped labels make the tie order matter.
        let mut rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..2).map(|_| rng.random_range(0..5) as f64).collect())
            .collect();
        let mut labels: Vec<Label> = (0..30).map(|_| label(rng.random_bool(0.5))).collect();
        for i in 0..10 {
            rows.push(rows[i].clone());
            labels.push(label(labels[i] == Label::Negative));
        }
        let ds = Dataset::from_vectors(rows.clone(), &labels).unwrap();
        let k = [1, 3, 5, 7, 9][round % 5];
        let model = knn_fit(&ds, k).unwrap();
        for q in 0..100 {
            let x: Vec<f64> = if q % 4 == 3 {
                (0..2).map(|_| rng.random_range(-1.0..5.0)).collect()
            } else {
                (0..2).map(|_| rng.random_range(0..5) as f64).collect()
            };
            let mut all: Vec<(f64, usize)> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let d2: f64 = r.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d2.sqrt(), i)
                })
                .collect();
            all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            if all.len() > k && all[k - 1].0 == all[k].0 {
                tie_queries += 1;
            }
            let positives = all[..k]
                .iter()
                .filter(|(_, i)| labels[*i] == Label::Positive)
                .count();
            let expected = label(2 * positives > k);
            if model.predict(&x).unwrap() != expected {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("1000 queries: {mismatches} mismatches; {tie_queries} had a distance tie at the k-th neighbour"),
    )
}

fn heartml(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_heartml"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let data = data_path();
    let data = data.to_str().unwrap();
    let model = dir.path().join("model.json");
    let model = model.to_str().unwrap();
    heartml(&[
        "tune",
        "--data",
        data,
        "--algorithm",
        "nb",
        "--model",
        model,
    ]);
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("inspect", vec!["inspect", "--data", data]),
        ("rank", vec!["rank", "--data", data]),
        ("subset", vec!["subset", "--data", data]),
        ("cv", vec!["cv", "--data", data, "--algorithm", "svm"]),
        ("tune", vec!["tune", "--data", data]),
        ("compare", vec!["compare", "--data", data]),
        (
            "predict",
            vec![
                "predict",
                "--model",
                model,
                "--record",
                "4,150,1,2.3,2,1,7",
                "--record",
                "1,170,0,0,1,0,3",
            ],
        ),
    ];
    let mut differing = Vec::new();
    for (name, mut args) in runs {
        args.extend(["--format", "json"]);
        let a = heartml(&args);
        let b = heartml(&args);
        if a != b || a.is_empty() {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty(),
        format!("7 subcommands run twice with --format json; differing: {differing:?}"),
    )
}

fn data_pipeline() -> Outcome {
    let text = std::fs::read_to_string(data_path()).unwrap();
    let raw = parse_csv(&text, &cleveland_schema()).unwrap();
    let ds = drop_incomplete(&raw).unwrap();
    let counts = ds.class_counts();

    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let complete: Vec<&str> = lines.iter().copied().filter(|l| !l.contains('?')).collect();
    let positive = complete
        .iter()
        .filter(|l| l.rsplit(',').next().unwrap().trim().parse::<f64>().unwrap() > 0.0)
        .count();
    let independent = (
        lines.len(),
        lines.len() - complete.len(),
        complete.len(),
        complete.len() - positive,
        positive,
    );
    let ours = (
        raw.rows.len(),
        raw.rows.len() - ds.len(),
        ds.len(),
        counts[0],
        counts[1],
    );
    outcome(
        ours == (303, 6, 297, 160, 137) && ours == independent,
        format!(
            "{} parsed, {} dropped, {} kept, {}/{} negative/positive; independent line count {:?}",
            ours.0, ours.1, ours.2, ours.3, ours.4, independent
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("headline accuracy", headline_accuracy),
        ("model ordering", model_ordering),
        ("feature selection", feature_selection),
        ("grid reachability", grid_reachability),
        ("SVM correctness", svm_correctness),
        ("naive Bayes correctness", nb_correctness),
        ("metrics correctness", metrics_correctness),
        ("k-NN correctness", knn_correctness),
        ("determinism", determinism),
        ("data pipeline", data_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let r = check();
        failed += !r.pass as usize;
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
