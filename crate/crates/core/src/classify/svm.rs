//! Soft-margin RBF SVM trained with SMO using maximal-violating-pair working
//! set selection.

use rayon::prelude::*;

use crate::classify::standardize::{standardize_fit, Standardizer};
use crate::corpus::manifest::Label;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams<T> {
    /// Box constraint.
    pub c: T,
    /// RBF width in `exp(-gamma_k * |x - y|^2)`.
    pub gamma_k: T,
    /// Stopping threshold on the maximal KKT violation.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> Default for SvmParams<T> {
    fn default() -> Self {
        Self {
            c: T::one(),
            gamma_k: T::of(1.0 / 8.0),
            tolerance: T::of(1e-3),
            max_iterations: 10_000_000,
        }
    }
}

impl<T: Scalar> SvmParams<T> {
    pub fn new(c: T, gamma_k: T) -> Self {
        Self {
            c,
            gamma_k,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > T::zero() && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be > 0, got {}", self.c)));
        }
        if !(self.gamma_k > T::zero() && self.gamma_k.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel width must be > 0, got {}",
                self.gamma_k
            )));
        }
        if !(self.tolerance > T::zero()) {
            return Err(Error::InvalidParameter("SMO tolerance must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel<T> {
    /// Support vectors in standardized feature space.
    pub support_vectors: Vec<Vec<T>>,
    /// `alpha_i * y_i` for every support vector.
    pub dual_coefs: Vec<T>,
    pub bias: T,
    pub gamma_k: T,
    pub c: T,
    pub standardizer: Standardizer<T>,
}

#[inline]
pub(crate) fn rbf<T: Scalar>(gamma: T, a: &[T], b: &[T]) -> T {
    let d2: T = a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

impl<T: Scalar> SvmModel<T> {
    pub fn dim(&self) -> usize {
        self.standardizer.dim()
    }

    /// Decision value of an already standardized vector.
    pub fn decision_standardized(&self, z: &[T]) -> T {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, &a)| a * rbf(self.gamma_k, sv, z))
            .sum::<T>()
            + self.bias
    }

    /// Decision value of a raw feature vector.
    pub fn decision(&self, x: &[T]) -> Result<T> {
        let z = self.standardizer.apply(x)?;
        Ok(self.decision_standardized(&z))
    }

    /// Positive decision means stego; zero and negative mean cover.
    pub fn predict(&self, x: &[T]) -> Result<(Label, T)> {
        let d = self.decision(x)?;
        Ok((label_of(d), d))
    }
}

pub fn label_of<T: Scalar>(decision: T) -> Label {
    if decision > T::zero() {
        Label::Stego
    } else {
        Label::Cover
    }
}

/// Training outcome: the model plus the full dual solution for diagnostics.
#[derive(Debug, Clone)]
pub struct SvmFit<T> {
    pub model: SvmModel<T>,
    /// One multiplier per training row (zero for non-support vectors).
    pub alpha: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

fn check_inputs<T: Scalar>(x: &[Vec<T>], y: &[i8]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "{} feature rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::InvalidParameter(format!("label {bad} is not -1 or +1")));
    }
    if !(y.contains(&1) && y.contains(&-1)) {
        return Err(Error::SingleClass);
    }
    let dim = x[0].len();
    if x.iter().any(|r| r.len() != dim) {
        return Err(Error::Dimension("feature rows differ in length".into()));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("training features".into()));
    }
    Ok(dim)
}

/// SMO on standardized rows `x` with labels `y` in {-1, +1}.
///
/// The returned model carries an identity standardizer.
pub fn svm_train<T: Scalar>(x: &[Vec<T>], y: &[i8], params: &SvmParams<T>) -> Result<SvmFit<T>> {
    params.validate()?;
    let dim = check_inputs(x, y)?;
    let n = x.len();
    let c = params.c;
    let yf: Vec<T> = y.iter().map(|&v| T::of(f64::from(v))).collect();

    let kernel: Vec<T> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| rbf(params.gamma_k, &x[i], &x[j]))
        .collect();
    let q = |i: usize, j: usize| yf[i] * yf[j] * kernel[i * n + j];

    let mut alpha = vec![T::zero(); n];
    let mut grad = vec![-T::one(); n];
    let tau = T::of(1e-12);
    let in_up = |a: T, yi: i8| (yi == 1 && a < c) || (yi == -1 && a > T::zero());
    let in_low = |a: T, yi: i8| (yi == 1 && a > T::zero()) || (yi == -1 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iterations {
        let mut i_sel = None;
        let mut j_sel = None;
        let mut gmax = T::neg_infinity();
        let mut gmin = T::infinity();
        for t in 0..n {
            let v = -yf[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i_sel = Some(t);
            }
            if in_low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j_sel = Some(t);
            }
        }
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            converged = true;
            break;
        };
        if gmax - gmin <= params.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = kernel[i * n + i] + kernel[j * n + j] + T::of(2.0) * q(i, j);
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > T::zero() {
                if alpha[j] < T::zero() {
                    alpha[j] = T::zero();
                    alpha[i] = diff;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = -diff;
            }
            if diff > T::zero() {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = kernel[i * n + i] + kernel[j * n + j] - T::of(2.0) * q(i, j);
            if quad <= T::zero() {
                quad = tau;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < T::zero() {
                alpha[j] = T::zero();
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (k, g) in grad.iter_mut().enumerate() {
            *g += q(i, k) * di + q(j, k) * dj;
        }
    }
    if !converged {
        log::warn!("SMO stopped after {iterations} iterations without reaching tolerance");
    }

    // bias: mean over free vectors, else midpoint of the feasible interval
    let (mut ub, mut lb) = (T::infinity(), T::neg_infinity());
    let (mut free_sum, mut free_n) = (T::zero(), 0usize);
    for t in 0..n {
        let yg = yf[t] * grad[t];
        if alpha[t] >= c {
            if y[t] == -1 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= T::zero() {
            if y[t] == 1 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_sum += yg;
            free_n += 1;
        }
    }
    let rho = if free_n > 0 {
        free_sum / T::of(free_n as f64)
    } else {
        (ub + lb) / T::of(2.0)
    };

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for t in 0..n {
        if alpha[t] > T::zero() {
            support_vectors.push(x[t].clone());
            dual_coefs.push(alpha[t] * yf[t]);
        }
    }
    Ok(SvmFit {
        model: SvmModel {
            support_vectors,
            dual_coefs,
            bias: -rho,
            gamma_k: params.gamma_k,
            c,
            standardizer: Standardizer::identity(dim),
        },
        alpha,
        iterations,
        converged,
    })
}

/// Fits a standardizer on raw rows, then trains on the standardized rows.
pub fn svm_fit_raw<T: Scalar>(
    raw: &[Vec<T>],
    y: &[i8],
    params: &SvmParams<T>,
) -> Result<SvmFit<T>> {
    check_inputs(raw, y)?;
    let standardizer = standardize_fit(raw)?;
    let z = standardizer.apply_all(raw)?;
    let mut fit = svm_train(&z, y, params)?;
    fit.model.standardizer = standardizer;
    Ok(fit)
}

/// Largest KKT violation of a dual solution, measured from the model's
/// decision values on its (standardized) training rows.
pub fn max_kkt_violation<T: Scalar>(model: &SvmModel<T>, x: &[Vec<T>], y: &[i8], alpha: &[T]) -> T {
    x.iter()
        .zip(y)
        .zip(alpha)
        .map(|((xi, &yi), &a)| {
            let margin = T::of(f64::from(yi)) * model.decision_standardized(xi);
            if a <= T::zero() {
                (T::one() - margin).max(T::zero())
            } else if a >= model.c {
                (margin - T::one()).max(T::zero())
            } else {
                (margin - T::one()).abs()
            }
        })
        .fold(T::zero(), T::max)
}
