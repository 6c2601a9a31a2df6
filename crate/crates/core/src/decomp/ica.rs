//! Two-source FastICA: symmetric fixed-point iteration with the log-cosh
//! contrast on whitened data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decomp::linalg::symmetric_eigen;
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

pub type Mat2<T> = [[T; 2]; 2];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Contrast {
    /// `g(u) = tanh(u)`, `g'(u) = 1 - tanh(u)^2`.
    #[default]
    LogCosh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcaParams<T> {
    pub contrast: Contrast,
    pub tolerance: T,
    pub max_iterations: usize,
    /// Seed for the random initial unmixing matrix.
    pub seed: u64,
}

impl<T: Scalar> Default for IcaParams<T> {
    fn default() -> Self {
        Self {
            contrast: Contrast::LogCosh,
            tolerance: T::of(1e-4),
            max_iterations: 200,
            seed: 0,
        }
    }
}

impl<T: Scalar> IcaParams<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero()) {
            return Err(Error::InvalidParameter("ICA tolerance must be > 0".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "ICA max_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Two estimated independent components and the transforms that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPair<T> {
    pub c1: Vec<T>,
    pub c2: Vec<T>,
    /// Orthonormal unmixing matrix acting on whitened data.
    pub unmixing: Mat2<T>,
    /// Whitening transform applied to the centred input.
    pub whitening: Mat2<T>,
    /// 1-based PCA components the input was projected on, when known.
    pub selected_indices: Option<(usize, usize)>,
    pub converged: bool,
    pub iterations: usize,
}

impl<T: Scalar> ComponentPair<T> {
    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    /// Negates component `k` (0 or 1) together with its unmixing row.
    pub fn negate(&mut self, k: usize) {
        let c = if k == 0 { &mut self.c1 } else { &mut self.c2 };
        c.iter_mut().for_each(|v| *v = -*v);
        self.unmixing[k] = [-self.unmixing[k][0], -self.unmixing[k][1]];
    }

    /// Exchanges the two components together with the unmixing rows.
    pub fn swap(&mut self) {
        std::mem::swap(&mut self.c1, &mut self.c2);
        self.unmixing.swap(0, 1);
    }
}

fn mat_mul<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn transpose<T: Scalar>(a: &Mat2<T>) -> Mat2<T> {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// `(W W^T)^{-1/2} W`.
pub(crate) fn symmetric_decorrelation<T: Scalar>(w: &Mat2<T>) -> Mat2<T> {
    let wwt = mat_mul(w, &transpose(w));
    let (vals, vecs) = symmetric_eigen(&[wwt[0][0], wwt[0][1], wwt[1][0], wwt[1][1]], 2);
    let mut inv_sqrt = [[T::zero(); 2]; 2];
    for k in 0..2 {
        let s = T::one() / vals[k].max(T::min_positive_value()).sqrt();
        for i in 0..2 {
            for j in 0..2 {
                inv_sqrt[i][j] += s * vecs[k][i] * vecs[k][j];
            }
        }
    }
    mat_mul(&inv_sqrt, w)
}

fn apply<T: Scalar>(m: &Mat2<T>, x: &[Vec<T>; 2]) -> [Vec<T>; 2] {
    let row = |r: usize| -> Vec<T> {
        x[0].iter()
            .zip(&x[1])
            .map(|(&a, &b)| m[r][0] * a + m[r][1] * b)
            .collect()
    };
    [row(0), row(1)]
}

/// Centres, whitens and unmixes a two-row observation.
///
/// Non-convergence within `max_iterations` is reported through
/// [`ComponentPair::converged`] and a log warning; the last iterate is returned.
pub fn fastica<T: Scalar>(x: &[Vec<T>; 2], params: &IcaParams<T>) -> Result<ComponentPair<T>> {
    params.validate()?;
    let n = x[0].len();
    if x[1].len() != n {
        return Err(Error::Dimension(format!(
            "ICA rows have lengths {} and {}",
            n,
            x[1].len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ICA needs at least 2 samples, got {n}"
        )));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("ICA input".into()));
    }
    let nf = T::of(n as f64);
    let centred: [Vec<T>; 2] = std::array::from_fn(|r| {
        let mean = compensated_sum(x[r].iter().copied()) / nf;
        x[r].iter().map(|&v| v - mean).collect()
    });

    let cov = |a: &[T], b: &[T]| -> T { a.iter().zip(b).map(|(&p, &q)| p * q).sum::<T>() / nf };
    let c00 = cov(&centred[0], &centred[0]);
    let c11 = cov(&centred[1], &centred[1]);
    let c01 = cov(&centred[0], &centred[1]);
    if let Some(r) = [c00, c11].iter().position(|&v| !(v > T::zero())) {
        return Err(Error::DegenerateProjection(format!("row {r} has zero variance")));
    }
    let (vals, vecs) = symmetric_eigen(&[c00, c01, c01, c11], 2);
    let (lo, hi) = (vals[0].min(vals[1]), vals[0].max(vals[1]));
    if !(lo > hi * T::epsilon() * T::of(16.0)) {
        return Err(Error::DegenerateProjection(
            "rows are linearly dependent (rank-deficient whitening)".into(),
        ));
    }
    // K = D^{-1/2} E^T
    let mut whitening = [[T::zero(); 2]; 2];
    for k in 0..2 {
        let s = T::one() / vals[k].sqrt();
        whitening[k] = [vecs[k][0] * s, vecs[k][1] * s];
    }
    let z = apply(&whitening, &centred);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut draw = || T::of(StandardNormal.sample(&mut rng));
    let init = [[draw(), draw()], [draw(), draw()]];
    let mut w = symmetric_decorrelation(&init);

    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iterations {
        iterations += 1;
        let wz = apply(&w, &z);
        let mut next = [[T::zero(); 2]; 2];
        for r in 0..2 {
            let (mut e0, mut e1, mut eg) = (T::zero(), T::zero(), T::zero());
            for k in 0..n {
                let g = match params.contrast {
                    Contrast::LogCosh => wz[r][k].tanh(),
                };
                e0 += g * z[0][k];
                e1 += g * z[1][k];
                eg += T::one() - g * g;
            }
            let (e0, e1, eg) = (e0 / nf, e1 / nf, eg / nf);
            next[r] = [e0 - eg * w[r][0], e1 - eg * w[r][1]];
        }
        let next = symmetric_decorrelation(&next);
        let lim = (0..2)
            .map(|r| ((next[r][0] * w[r][0] + next[r][1] * w[r][1]).abs() - T::one()).abs())
            .fold(T::zero(), T::max);
        w = next;
        if lim < params.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "FastICA did not converge within {} iterations",
            params.max_iterations
        );
    }
    let [c1, c2] = apply(&w, &z);
    Ok(ComponentPair {
        c1,
        c2,
        unmixing: w,
        whitening,
        selected_indices: None,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let (ma, mb) = (mean(a), mean(b));
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    fn uniform_laplace(seed: u64, n: usize) -> [Vec<f64>; 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l: Vec<f64> = (0..n)
            .map(|_| {
                let p: f64 = rng.gen_range(-0.5..0.5);
                -p.signum() * (1.0 - 2.0 * p.abs()).ln()
            })
            .collect();
        [u, l]
    }

    fn mix(a: Mat2<f64>, s: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
        apply(&a, s)
    }

    /// Best |corr| under either pairing of estimates to sources.
    fn best_matching(est: &ComponentPair<f64>, s: &[Vec<f64>; 2]) -> (f64, f64) {
        let direct = (pearson(&est.c1, &s[0]).abs(), pearson(&est.c2, &s[1]).abs());
        let swapped = (pearson(&est.c1, &s[1]).abs(), pearson(&est.c2, &s[0]).abs());
        if direct.0.min(direct.1) >= swapped.0.min(swapped.1) {
            direct
        } else {
            swapped
        }
    }

    #[test]
    fn recovers_already_independent_sources() {
        let s = uniform_laplace(11, 10_000);
        let est = fastica(&s, &IcaParams::with_seed(1)).unwrap();
        let (a, b) = best_matching(&est, &s);
        assert!(a >= 0.999 && b >= 0.999, "{a} {b}");
    }

    #[test]
    fn unmixes_symmetric_mixture_of_uniforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s: [Vec<f64>; 2] =
            std::array::from_fn(|_| (0..10_000).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let x = mix([[1.0, 0.5], [0.5, 1.0]], &s);
        let est = fastica(&x, &IcaParams::with_seed(7)).unwrap();
        assert!(est.converged);
        let (a, b) = best_matching(&est, &s);
        assert!(a >= 0.99 && b >= 0.99, "{a} {b}");
    }

    #[test]
    fn outputs_are_white_and_unmixing_orthonormal() {
        let s = uniform_laplace(3, 5000);
        let x = mix([[2.0, 1.0], [-0.5, 1.5]], &s);
        let est = fastica(&x, &IcaParams::with_seed(5)).unwrap();
        for c in [&est.c1, &est.c2] {
            assert!(mean(c).abs() <= 1e-9);
            let var = c.iter().map(|v| v * v).sum::<f64>() / c.len() as f64;
            assert!((var - 1.0).abs() <= 1e-6);
        }
        assert!(pearson(&est.c1, &est.c2).abs() <= 1e-6);
        let wwt = mat_mul(&est.unmixing, &transpose(&est.unmixing));
        assert!((wwt[0][0] - 1.0).abs() < 1e-6 && (wwt[1][1] - 1.0).abs() < 1e-6);
        assert!(wwt[0][1].abs() < 1e-6);
    }

    #[test]
    fn whitening_yields_identity_covariance() {
        let s = uniform_laplace(8, 4000);
        let x = mix([[1.0, 0.3], [0.2, 0.7]], &s);
        let est = fastica(&x, &IcaParams::with_seed(0)).unwrap();
        let centred: [Vec<f64>; 2] = std::array::from_fn(|r| {
            let m = mean(&x[r]);
            x[r].iter().map(|v| v - m).collect()
        });
        let z = apply(&est.whitening, &centred);
        let n = z[0].len() as f64;
        for i in 0..2 {
            for j in 0..2 {
                let c: f64 = z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum::<f64>() / n;
                assert!((c - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_row_is_degenerate() {
        let x = [vec![1.0, 2.0, 3.0, 4.0], vec![0.5; 4]];
        let err = fastica(&x, &IcaParams::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateProjection(_)));
        assert!(err.to_string().contains("degenerate projection"));
    }

    #[test]
    fn collinear_rows_are_degenerate() {
        let a: Vec<f64> = (0..100).map(|k| (k as f64).sin()).collect();
        let b: Vec<f64> = a.iter().map(|v| -3.0 * v).collect();
        assert!(matches!(
            fastica(&[a, b], &IcaParams::default()),
            Err(Error::DegenerateProjection(_))
        ));
    }

    #[test]
    fn same_seed_same_result() {
        let s = uniform_laplace(4, 2000);
        let p = IcaParams::with_seed(99);
        assert_eq!(fastica(&s, &p).unwrap(), fastica(&s, &p).unwrap());
    }

    #[test]
    fn non_convergence_still_returns() {
        let s = uniform_laplace(4, 2000);
        let x = mix([[1.0, 0.9], [0.9, 1.0]], &s);
        let p = IcaParams {
            max_iterations: 1,
            tolerance: 1e-15,
            ..IcaParams::with_seed(1)
        };
        let est = fastica(&x, &p).unwrap();
        assert!(!est.converged);
        assert_eq!(est.iterations, 1);
    }

    #[test]
    fn invalid_params() {
        let s = uniform_laplace(4, 100);
        let p = IcaParams { tolerance: 0.0, ..IcaParams::default() };
        assert!(fastica(&s, &p).is_err());
        let p = IcaParams { max_iterations: 0, ..IcaParams::<f64>::default() };
        assert!(fastica(&s, &p).is_err());
        assert!(fastica(&[vec![1.0], vec![2.0]], &IcaParams::default()).is_err());
    }

    #[test]
    fn runs_in_f32() {
        let s = uniform_laplace(12, 5000);
        let x: [Vec<f32>; 2] = std::array::from_fn(|r| s[r].iter().map(|&v| v as f32).collect());
        let est = fastica(&x, &IcaParams::with_seed(2)).unwrap();
        assert_eq!(est.c1.len(), 5000);
    }
}
