#![allow(dead_code)]

pub mod qp;

use heartml_core::dataset::{drop_incomplete, parse_csv, select_columns};
use heartml_core::schema::{cleveland_schema, SELECTED_FEATURES};
use heartml_core::{Dataset, Label};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CLEVELAND: &str = include_str!("../../../../data/processed.cleveland.data");

pub fn cleveland() -> Dataset {
    drop_incomplete(&parse_csv(CLEVELAND, &cleveland_schema()).unwrap()).unwrap()
}

pub fn cleveland_selected() -> Dataset {
    select_columns(&cleveland(), &SELECTED_FEATURES).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label(positive: bool) -> Label {
    if positive {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// `n` points with `d` coordinates uniform on [-1, 1] and random labels,
/// with both classes guaranteed present.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<Label>) {
    let points = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let mut labels: Vec<Label> = (0..n).map(|_| label(rng.random_bool(0.5))).collect();
    labels[0] = Label::Negative;
    labels[1] = Label::Positive;
    (points, labels)
}
