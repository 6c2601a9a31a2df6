//! Four-moment descriptors of an independent-component pair.
//!
//! The feature vector is `[mu1, mu2, sigma1, sigma2, gamma1, gamma2, kappa1, kappa2]`
//! with population (divisor N) moments and excess kurtosis.

use std::cmp::Ordering;

use crate::decomp::ComponentPair;
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

pub const NUM_FEATURES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet<T> {
    pub mu: T,
    pub sigma: T,
    /// Skewness.
    pub gamma: T,
    /// Excess kurtosis (0 for a Gaussian).
    pub kappa: T,
}

pub fn moments<T: Scalar>(v: &[T]) -> Result<MomentSet<T>> {
    if v.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "moments need at least 2 samples, got {}",
            v.len()
        )));
    }
    let n = T::of(v.len() as f64);
    let mu = compensated_sum(v.iter().copied()) / n;
    let m2 = compensated_sum(v.iter().map(|&x| (x - mu) * (x - mu))) / n;
    if !(m2 > T::zero()) {
        return Err(Error::ZeroVariance(
            "skewness and kurtosis are undefined for a constant vector".into(),
        ));
    }
    let m3 = compensated_sum(v.iter().map(|&x| {
        let d = x - mu;
        d * d * d
    })) / n;
    let m4 = compensated_sum(v.iter().map(|&x| {
        let d = (x - mu) * (x - mu);
        d * d
    })) / n;
    let sigma = m2.sqrt();
    Ok(MomentSet {
        mu,
        sigma,
        gamma: m3 / (m2 * sigma),
        kappa: m4 / (m2 * m2) - T::of(3.0),
    })
}

/// Fixes ICA's sign and permutation freedom.
///
/// Each component is negated when its skewness is negative; then the pair is
/// ordered by descending kurtosis, ties by descending skewness, remaining ties
/// keep the incoming order.
pub fn canonicalize<T: Scalar>(mut pair: ComponentPair<T>) -> Result<ComponentPair<T>> {
    let mut m = [moments(&pair.c1)?, moments(&pair.c2)?];
    for (k, mk) in m.iter_mut().enumerate() {
        if mk.gamma < T::zero() {
            pair.negate(k);
            *mk = moments(if k == 0 { &pair.c1 } else { &pair.c2 })?;
        }
    }
    let order = m[0]
        .kappa
        .partial_cmp(&m[1].kappa)
        .unwrap_or(Ordering::Equal)
        .then(m[0].gamma.partial_cmp(&m[1].gamma).unwrap_or(Ordering::Equal));
    if order == Ordering::Less {
        pair.swap();
    }
    Ok(pair)
}

/// Interleaves the moments of `c1` and `c2`. Expects a canonicalized pair.
pub fn assemble_features<T: Scalar>(pair: &ComponentPair<T>) -> Result<[T; NUM_FEATURES]> {
    let a = moments(&pair.c1)?;
    let b = moments(&pair.c2)?;
    Ok([
        a.mu, b.mu, a.sigma, b.sigma, a.gamma, b.gamma, a.kappa, b.kappa,
    ])
}
