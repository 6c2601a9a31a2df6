use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-feature z-scoring fitted on training rows.
///
/// Features with zero training variance keep scale 1, so they are only centred.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer<T> {
    pub mean: Vec<T>,
    pub scale: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![T::zero(); dim],
            scale: vec![T::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "feature vector has {} values, expected {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect())
    }

    pub fn apply_all(&self, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }
}

pub fn standardize_fit<T: Scalar>(rows: &[Vec<T>]) -> Result<Standardizer<T>> {
    if rows.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "standardizer needs at least 2 rows, got {}",
            rows.len()
        )));
    }
    let dim = rows[0].len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Dimension("feature rows differ in length".into()));
    }
    let n = T::of(rows.len() as f64);
    let mut mean = vec![T::zero(); dim];
    let mut scale = vec![T::one(); dim];
    for j in 0..dim {
        let m = rows.iter().map(|r| r[j]).sum::<T>() / n;
        let var = rows.iter().map(|r| (r[j] - m) * (r[j] - m)).sum::<T>() / n;
        mean[j] = m;
        if var > T::zero() {
            scale[j] = var.sqrt();
        }
    }
    Ok(Standardizer { mean, scale })
}
