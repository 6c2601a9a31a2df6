//! Stratified k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::standardize::{standardize_fit, Standardizer};
use crate::classify::svm::{label_of, svm_train, SvmParams};
use crate::corpus::manifest::Label;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// C values and kernel widths tried when tuning on a training split.
pub const C_GRID: [f64; 3] = [0.1, 1.0, 10.0];
pub const GAMMA_GRID: [f64; 3] = [1.0 / 32.0, 1.0 / 8.0, 1.0 / 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig<T> {
    pub k: usize,
    pub seed: u64,
    pub svm: SvmParams<T>,
    /// Select C and the kernel width per fold by an inner 3-fold CV over
    /// [`C_GRID`] x [`GAMMA_GRID`] on that fold's training split.
    pub tune: bool,
}

impl<T: Scalar> Default for CvConfig<T> {
    fn default() -> Self {
        Self {
            k: 5,
            seed: 0,
            svm: SvmParams::default(),
            tune: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome<T> {
    pub test_indices: Vec<usize>,
    /// Fitted on this fold's training rows only.
    pub standardizer: Standardizer<T>,
    pub svm: SvmParams<T>,
    pub accuracy: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport<T> {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation over folds.
    pub std_accuracy: f64,
    pub seed: u64,
    pub k: usize,
    pub folds: Vec<FoldOutcome<T>>,
}

/// Splits indices into `k` folds, shuffling each class with `seed` and dealing
/// them round-robin. The second class continues where the first stopped, so
/// total fold sizes also differ by at most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (ci, class) in [Label::Cover, Label::Stego].into_iter().enumerate() {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < k {
            return Err(Error::InvalidParameter(format!(
                "class {class} has {} samples, needs at least k = {k}",
                idx.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(ci as u64 + 1)));
        idx.shuffle(&mut rng);
        for i in idx {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

fn population_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

struct FoldRun<T> {
    accuracy: f64,
    standardizer: Standardizer<T>,
    converged: bool,
}

fn run_fold<T: Scalar>(
    rows: &[Vec<T>],
    labels: &[Label],
    train: &[usize],
    test: &[usize],
    params: &SvmParams<T>,
) -> Result<FoldRun<T>> {
    let train_rows: Vec<Vec<T>> = train.iter().map(|&i| rows[i].clone()).collect();
    let y: Vec<i8> = train.iter().map(|&i| labels[i].sign()).collect();
    let standardizer = standardize_fit(&train_rows)?;
    let z = standardizer.apply_all(&train_rows)?;
    let fit = svm_train(&z, &y, params)?;
    let mut model = fit.model;
    model.standardizer = standardizer.clone();
    let mut correct = 0;
    for &i in test {
        if label_of(model.decision(&rows[i])?) == labels[i] {
            correct += 1;
        }
    }
    Ok(FoldRun {
        accuracy: correct as f64 / test.len() as f64,
        standardizer,
        converged: fit.converged,
    })
}

fn tune_params<T: Scalar>(
    rows: &[Vec<T>],
    labels: &[Label],
    train: &[usize],
    base: &SvmParams<T>,
    seed: u64,
) -> Result<SvmParams<T>> {
    let sub_labels: Vec<Label> = train.iter().map(|&i| labels[i]).collect();
    let inner = stratified_folds(&sub_labels, 3, seed)?;
    let mut best = (f64::NEG_INFINITY, base.clone());
    for &c in &C_GRID {
        for &g in &GAMMA_GRID {
            let params = SvmParams {
                c: T::of(c),
                gamma_k: T::of(g),
                ..base.clone()
            };
            let mut acc = 0.0;
            for (f, test) in inner.iter().enumerate() {
                let tr: Vec<usize> = inner
                    .iter()
                    .enumerate()
                    .filter(|&(o, _)| o != f)
                    .flat_map(|(_, v)| v.iter().map(|&i| train[i]))
                    .collect();
                let te: Vec<usize> = test.iter().map(|&i| train[i]).collect();
                acc += run_fold(rows, labels, &tr, &te, &params)?.accuracy;
            }
            if acc > best.0 {
                best = (acc, params);
            }
        }
    }
    Ok(best.1)
}

pub fn kfold_cv<T: Scalar>(
    rows: &[Vec<T>],
    labels: &[Label],
    config: &CvConfig<T>,
) -> Result<CvReport<T>> {
    if rows.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} feature rows but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    let folds = stratified_folds(labels, config.k, config.seed)?;
    let mut outcomes = Vec::with_capacity(config.k);
    for (f, test) in folds.iter().enumerate() {
        let mut train: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(o, _)| o != f)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        train.sort_unstable();
        let params = if config.tune {
            tune_params(rows, labels, &train, &config.svm, config.seed.wrapping_add(f as u64 + 1))?
        } else {
            config.svm.clone()
        };
        let run = run_fold(rows, labels, &train, test, &params)?;
        outcomes.push(FoldOutcome {
            test_indices: test.clone(),
            standardizer: run.standardizer,
            svm: params,
            accuracy: run.accuracy,
            converged: run.converged,
        });
    }
    let fold_accuracies: Vec<f64> = outcomes.iter().map(|o| o.accuracy).collect();
    let (mean_accuracy, std_accuracy) = population_std(&fold_accuracies);
    Ok(CvReport {
        fold_accuracies,
        mean_accuracy,
        std_accuracy,
        seed: config.seed,
        k: config.k,
        folds: outcomes,
    })
}
