//! Blind source separation core: per-image PCA over sub-bands and two-source
//! FastICA on a selected pair of principal components.

pub mod ica;
pub mod linalg;
pub mod pca;

pub use ica::{fastica, ComponentPair, Contrast, IcaParams, Mat2};
pub use pca::{build_observations, pca_fit, pca_project, ObservationMatrix, PcaModel};
