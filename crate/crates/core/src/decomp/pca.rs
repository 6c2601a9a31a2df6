//! Per-image PCA over the flattened sub-bands.
//!
//! Component indices are 1-based throughout the public API: component 1 has
//! the largest variance and component 12 the smallest.

use crate::decomp::linalg::{dot, symmetric_eigen};
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};
use crate::wavelet::SubBandStack;

/// Mean-centred variables (one row per sub-band) over pixel-position samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix<T> {
    rows: Vec<Vec<T>>,
    row_means: Vec<T>,
}

impl<T: Scalar> ObservationMatrix<T> {
    /// Centres every row and records the removed means.
    pub fn from_rows(mut rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("observation rows differ in length".into()));
        }
        let mut row_means = Vec::with_capacity(rows.len());
        for row in &mut rows {
            let mean = if n == 0 {
                T::zero()
            } else {
                compensated_sum(row.iter().copied()) / T::of(n as f64)
            };
            row.iter_mut().for_each(|v| *v -= mean);
            row_means.push(mean);
        }
        Ok(Self { rows, row_means })
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row_means(&self) -> &[T] {
        &self.row_means
    }

    pub fn num_variables(&self) -> usize {
        self.rows.len()
    }

    pub fn num_samples(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Sample covariance with divisor N, row-major.
    pub fn covariance(&self) -> Vec<T> {
        let m = self.num_variables();
        let n = T::of(self.num_samples() as f64);
        let mut cov = vec![T::zero(); m * m];
        for i in 0..m {
            for j in i..m {
                let c = dot(&self.rows[i], &self.rows[j]) / n;
                cov[i * m + j] = c;
                cov[j * m + i] = c;
            }
        }
        cov
    }
}

/// Flattens each sub-band row-major into one row and centres it.
pub fn build_observations<T: Scalar>(stack: &SubBandStack<T>) -> ObservationMatrix<T> {
    ObservationMatrix::from_rows(stack.bands().to_vec()).expect("stack bands share one shape")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    /// Orthonormal loading vectors, by descending eigenvalue.
    pub components: Vec<Vec<T>>,
    pub eigenvalues: Vec<T>,
    pub explained_variance_ratio: Vec<T>,
}

impl<T: Scalar> PcaModel<T> {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Loading vector of a 1-based component index.
    pub fn component(&self, index: usize) -> Result<&[T]> {
        self.check_index(index)?;
        Ok(&self.components[index - 1])
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.len() {
            return Err(Error::InvalidParameter(format!(
                "PCA component index {index} outside 1..={}",
                self.len()
            )));
        }
        Ok(())
    }
}

pub fn pca_fit<T: Scalar>(obs: &ObservationMatrix<T>) -> Result<PcaModel<T>> {
    let m = obs.num_variables();
    if obs.num_samples() < m {
        return Err(Error::InvalidParameter(format!(
            "PCA needs at least {m} samples, got {}",
            obs.num_samples()
        )));
    }
    if obs.rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("observation matrix".into()));
    }
    let cov = obs.covariance();
    let (values, vectors) = symmetric_eigen(&cov, m);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));

    let eigenvalues: Vec<T> = order.iter().map(|&k| values[k].max(T::zero())).collect();
    let components = order
        .iter()
        .map(|&k| {
            let mut v = vectors[k].clone();
            // largest-magnitude entry positive, first index wins ties
            let pivot = v
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |best, (i, x)| {
                    if x.abs() > best.1 {
                        (i, x.abs())
                    } else {
                        best
                    }
                })
                .0;
            if v[pivot] < T::zero() {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    let total: T = eigenvalues.iter().copied().sum();
    let explained_variance_ratio = eigenvalues
        .iter()
        .map(|&l| if total > T::zero() { l / total } else { T::zero() })
        .collect();
    Ok(PcaModel {
        components,
        eigenvalues,
        explained_variance_ratio,
    })
}

/// Projects the centred observations on two 1-based components.
pub fn pca_project<T: Scalar>(
    obs: &ObservationMatrix<T>,
    model: &PcaModel<T>,
    indices: (usize, usize),
) -> Result<[Vec<T>; 2]> {
    let (i, j) = indices;
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "PCA component indices must differ, got ({i}, {j})"
        )));
    }
    let project = |index: usize| -> Result<Vec<T>> {
        let load = model.component(index)?;
        if load.len() != obs.num_variables() {
            return Err(Error::Dimension(format!(
                "PCA model has {} variables, observations have {}",
                load.len(),
                obs.num_variables()
            )));
        }
        let mut out = vec![T::zero(); obs.num_samples()];
        for (w, row) in load.iter().zip(&obs.rows) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o += *w * x;
            }
        }
        Ok(out)
    };
    Ok([project(i)?, project(j)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::image::Raster;
    use crate::wavelet::haar_dwt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Rows 0 and 1 carry independent ±2 / ±1 sign sequences, rest zero.
    fn diagonal_obs(n: usize) -> ObservationMatrix<f64> {
        let mut rows = vec![vec![0.0; n]; 12];
        for k in 0..n {
            rows[0][k] = if k % 2 == 0 { 2.0 } else { -2.0 };
            rows[1][k] = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        }
        ObservationMatrix::from_rows(rows).unwrap()
    }

    fn random_obs(seed: u64, n: usize) -> ObservationMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..12)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        ObservationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn constant_stack_centres_to_zero() {
        let obs = build_observations(&haar_dwt(&Raster::<f64>::filled(8, 8, 0.4)));
        assert_eq!(obs.num_variables(), 12);
        assert_eq!(obs.num_samples(), 16);
        assert!(obs.rows().iter().flatten().all(|&v| v == 0.0));
        assert!((obs.row_means()[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn rows_are_centred() {
        let r = Raster::<f64>::from_fn(16, 16, |c, y, x| ((c * 5 + y * y + 3 * x) as f64).cos().abs());
        let obs = build_observations(&haar_dwt(&r));
        for row in obs.rows() {
            let mean: f64 = row.iter().sum::<f64>() / row.len() as f64;
            assert!(mean.abs() <= 1e-12);
        }
    }

    #[test]
    fn full_size_stack_shape() {
        let obs = build_observations(&SubBandStack::<f32>::zeros(256, 256));
        assert_eq!((obs.num_variables(), obs.num_samples()), (12, 256 * 256));
    }

    #[test]
    fn diagonal_covariance_ratios() {
        let model = pca_fit(&diagonal_obs(400)).unwrap();
        let r = &model.explained_variance_ratio;
        assert!((r[0] - 0.8).abs() < 1e-12);
        assert!((r[1] - 0.2).abs() < 1e-12);
        assert!(r[2..].iter().all(|&v| v.abs() < 1e-12));
        assert_eq!(model.components[0][0], 1.0);
        assert_eq!(model.components[1][1], 1.0);
    }

    #[test]
    fn identical_rows_give_rank_one() {
        let base: Vec<f64> = (0..50).map(|k| (k as f64 * 0.37).sin()).collect();
        let obs = ObservationMatrix::from_rows(vec![base; 12]).unwrap();
        let model = pca_fit(&obs).unwrap();
        assert!(model.eigenvalues[0] > 0.0);
        let tol = 1e-12 * model.eigenvalues[0];
        assert!(model.eigenvalues[1..].iter().all(|&l| l <= tol));
        // loading is the normalised all-ones vector
        let expect = 1.0 / 12f64.sqrt();
        assert!(model.components[0].iter().all(|&w| (w - expect).abs() < 1e-12));
    }

    #[test]
    fn loadings_orthonormal_and_sorted() {
        let model = pca_fit(&random_obs(3, 500)).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let g = dot(&model.components[i], &model.components[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-9, "gram[{i}][{j}] = {g}");
            }
        }
        assert!(model.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let total: f64 = model.explained_variance_ratio.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sign_convention_makes_largest_entry_positive() {
        let model = pca_fit(&random_obs(5, 300)).unwrap();
        for v in &model.components {
            let pivot = v
                .iter()
                .copied()
                .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
            assert!(pivot > 0.0);
        }
    }

    #[test]
    fn fit_is_bit_identical_on_repeat() {
        let obs = random_obs(9, 256);
        assert_eq!(pca_fit(&obs).unwrap(), pca_fit(&obs).unwrap());
    }

    #[test]
    fn too_few_samples_and_non_finite() {
        assert!(pca_fit(&random_obs(1, 11)).is_err());
        let mut rows = vec![vec![0.0; 20]; 12];
        rows[3][4] = f64::INFINITY;
        let obs = ObservationMatrix { rows, row_means: vec![0.0; 12] };
        assert!(matches!(pca_fit(&obs), Err(Error::NonFinite(_))));
    }

    #[test]
    fn projection_recovers_axis_signals() {
        let obs = diagonal_obs(64);
        let model = pca_fit(&obs).unwrap();
        let [p1, p2] = pca_project(&obs, &model, (1, 2)).unwrap();
        assert_eq!(p1, obs.rows()[0]);
        assert_eq!(p2, obs.rows()[1]);
    }

    #[test]
    fn projection_index_errors() {
        let obs = random_obs(2, 100);
        let model = pca_fit(&obs).unwrap();
        assert!(pca_project(&obs, &model, (3, 3)).is_err());
        assert!(pca_project(&obs, &model, (0, 2)).is_err());
        assert!(pca_project(&obs, &model, (1, 13)).is_err());
        let [a, b] = pca_project(&obs, &model, (9, 11)).unwrap();
        assert_eq!((a.len(), b.len()), (100, 100));
    }
}
