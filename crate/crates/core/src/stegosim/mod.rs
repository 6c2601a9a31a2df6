//! Steganography simulators used to generate test corpora: a coupling-layer
//! embedder/revealer and an additive sub-band mixer.

pub mod coupling;
pub mod inn;
pub mod mix;
pub mod psnr;
pub mod synth;

pub use coupling::{coupling_forward, coupling_inverse, BandConv, CouplingBlock, CouplingNet};
pub use inn::{inn_embed, inn_embed_raw, inn_reveal};
pub use mix::{additive_mix, mixed_bands, MixParams};
pub use psnr::psnr;
pub use synth::{synthetic_image, synthetic_image_styled, SynthStyle};
