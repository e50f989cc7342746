use crate::error::{Error, Result};
use crate::math;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// `|x - p|^2`. Callers check lengths.
pub(crate) fn squared_distance(x: &[f64], p: &[f64]) -> f64 {
    x.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Euclidean distance between two feature vectors of equal length.
pub fn euclidean_distance(x: &[f64], p: &[f64]) -> Result<f64> {
    check_len(x.len(), p.len())?;
    Ok(math::sqrt(squared_distance(x, p)))
}
