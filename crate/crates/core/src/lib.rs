//! Steganalysis of image-in-image steganography by blind source separation.
//!
//! An image is split into 12 Haar sub-bands, the sub-bands are decorrelated by
//! PCA, two weak principal components are unmixed by FastICA, and the first
//! four moments of the resulting components feed an RBF-kernel SVM.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the common instantiations.

pub mod analysis;
pub mod classify;
pub mod corpus;
pub mod decomp;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod scalar;
pub mod seed;
pub mod stegosim;
pub mod wavelet;

pub use corpus::{Image, Label, Raster};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use wavelet::{haar_dwt, haar_idwt, Band, Slot, SubBandStack};

pub type Image64 = Image<f64>;
pub type Image32 = Image<f32>;
pub type Raster64 = Raster<f64>;
pub type Raster32 = Raster<f32>;
pub type SubBandStack64 = SubBandStack<f64>;
pub type SubBandStack32 = SubBandStack<f32>;
pub type ComponentPair64 = decomp::ComponentPair<f64>;
pub type ComponentPair32 = decomp::ComponentPair<f32>;
pub type PcaModel64 = decomp::PcaModel<f64>;
pub type IcaParams64 = decomp::IcaParams<f64>;
pub type SvmModel64 = classify::SvmModel<f64>;
pub type SvmModel32 = classify::SvmModel<f32>;
pub type CouplingNet64 = stegosim::CouplingNet<f64>;
pub type CorrelationMatrix64 = analysis::CorrelationMatrix<f64>;
