//! Image to feature vector: DWT, PCA over the 12 sub-bands, projection on a
//! pair of weak components, FastICA, canonicalization and four moments.

use crate::corpus::image::Image;
use crate::decomp::{build_observations, fastica, pca_fit, pca_project, ComponentPair, IcaParams, ObservationMatrix, PcaModel};
use crate::error::Result;
use crate::features::{assemble_features, canonicalize, NUM_FEATURES};
use crate::scalar::Scalar;
use crate::wavelet::haar_dwt;

/// Default PCA pair (1-based, 1 = largest variance).
pub const DEFAULT_PAIR: (usize, usize) = (9, 11);

/// The pair-independent part of the pipeline for one image.
#[derive(Debug, Clone)]
pub struct PreparedImage<T> {
    pub observations: ObservationMatrix<T>,
    pub pca: PcaModel<T>,
}

pub fn prepare<T: Scalar>(image: &Image<T>) -> Result<PreparedImage<T>> {
    let observations = build_observations(&haar_dwt(image.raster()));
    let pca = pca_fit(&observations)?;
    Ok(PreparedImage { observations, pca })
}

impl<T: Scalar> PreparedImage<T> {
    /// Canonicalized independent components of the chosen PCA pair.
    pub fn components(&self, pair: (usize, usize), ica: &IcaParams<T>) -> Result<ComponentPair<T>> {
        let x = pca_project(&self.observations, &self.pca, pair)?;
        let mut est = fastica(&x, ica)?;
        est.selected_indices = Some(pair);
        canonicalize(est)
    }

    pub fn features(&self, pair: (usize, usize), ica: &IcaParams<T>) -> Result<[T; NUM_FEATURES]> {
        assemble_features(&self.components(pair, ica)?)
    }
}

pub fn extract_features<T: Scalar>(
    image: &Image<T>,
    pair: (usize, usize),
    ica: &IcaParams<T>,
) -> Result<[T; NUM_FEATURES]> {
    prepare(image)?.features(pair, ica)
}
