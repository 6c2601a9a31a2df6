//! Affine coupling blocks over sub-band stacks with fixed random linear
//! sub-networks.
//!
//! Forward:  `y2 = x2 + phi(x1)`, then `y1 = x1 * exp(sigmoid(rho(y2))) + eta(y2)`.
//! Inverse:  `x1 = (y1 - eta(y2)) * exp(-sigmoid(rho(y2)))`, then `x2 = y2 - phi(x1)`.
//!
//! The inverse is exact for any sub-network weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::wavelet::{SubBandStack, NUM_BANDS};

const TAPS: usize = 9;

/// 3x3 convolution from the 12 input bands to the 12 output bands, zero padded,
/// plus a per-output bias.
#[derive(Debug, Clone, PartialEq)]
pub struct BandConv<T> {
    /// `weights[(out * NUM_BANDS + in) * 9 + tap]`, taps row-major over the 3x3 window.
    weights: Vec<T>,
    bias: Vec<T>,
}

impl<T: Scalar> BandConv<T> {
    pub fn zero() -> Self {
        Self {
            weights: vec![T::zero(); NUM_BANDS * NUM_BANDS * TAPS],
            bias: vec![T::zero(); NUM_BANDS],
        }
    }

    /// Weights uniform in `[-cap, cap]`, constant bias.
    pub fn random(rng: &mut impl Rng, cap: f64, bias: f64) -> Self {
        let weights = (0..NUM_BANDS * NUM_BANDS * TAPS)
            .map(|_| {
                if cap > 0.0 {
                    T::of(rng.gen_range(-cap..=cap))
                } else {
                    T::zero()
                }
            })
            .collect();
        Self {
            weights,
            bias: vec![T::of(bias); NUM_BANDS],
        }
    }

    pub fn max_abs_weight(&self) -> T {
        self.weights.iter().map(|w| w.abs()).fold(T::zero(), T::max)
    }

    pub fn apply(&self, input: &SubBandStack<T>) -> SubBandStack<T> {
        let (h, w) = input.band_dims();
        let mut out = SubBandStack::zeros(h, w);
        for (o, band) in out.bands_mut().iter_mut().enumerate() {
            band.fill(self.bias[o]);
            for (i, src) in input.bands().iter().enumerate() {
                let kernel = &self.weights[(o * NUM_BANDS + i) * TAPS..(o * NUM_BANDS + i + 1) * TAPS];
                for (tap, &k) in kernel.iter().enumerate() {
                    if k == T::zero() {
                        continue;
                    }
                    let dy = tap / 3;
                    let dx = tap % 3;
                    // output (y, x) reads input (y + dy - 1, x + dx - 1)
                    let y0 = 1usize.saturating_sub(dy);
                    let y1 = (h + 1).saturating_sub(dy).min(h);
                    let x0 = 1usize.saturating_sub(dx);
                    let x1 = (w + 1).saturating_sub(dx).min(w);
                    for y in y0..y1 {
                        let sy = y + dy - 1;
                        let dst = &mut band[y * w + x0..y * w + x1];
                        let s = &src[sy * w + x0 + dx - 1..sy * w + x1 + dx - 1];
                        for (d, &v) in dst.iter_mut().zip(s) {
                            *d += k * v;
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingBlock<T> {
    pub phi: BandConv<T>,
    pub rho: BandConv<T>,
    pub eta: BandConv<T>,
}

impl<T: Scalar> CouplingBlock<T> {
    pub fn zero() -> Self {
        Self {
            phi: BandConv::zero(),
            rho: BandConv::zero(),
            eta: BandConv::zero(),
        }
    }
}

/// Weight cap and scale-branch bias that keep a 16-block net's stego PSNR in
/// the 30-45 dB range on natural-looking images.
pub const DEFAULT_WEIGHT_CAP: f64 = 1e-3;
pub const DEFAULT_RHO_BIAS: f64 = -8.0;
pub const DEFAULT_NUM_BLOCKS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingNet<T> {
    pub blocks: Vec<CouplingBlock<T>>,
    pub seed: u64,
}

impl<T: Scalar> CouplingNet<T> {
    pub fn new(num_blocks: usize, seed: u64) -> Result<Self> {
        Self::with_weights(num_blocks, seed, DEFAULT_WEIGHT_CAP, DEFAULT_RHO_BIAS)
    }

    /// `phi` and `eta` are bias-free; `rho` carries `rho_bias`.
    pub fn with_weights(num_blocks: usize, seed: u64, weight_cap: f64, rho_bias: f64) -> Result<Self> {
        if num_blocks == 0 {
            return Err(Error::InvalidParameter("a coupling net needs at least one block".into()));
        }
        if !(0.0..=0.1).contains(&weight_cap) {
            return Err(Error::InvalidParameter(format!(
                "weight cap {weight_cap} outside [0, 0.1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = (0..num_blocks)
            .map(|_| CouplingBlock {
                phi: BandConv::random(&mut rng, weight_cap, 0.0),
                rho: BandConv::random(&mut rng, weight_cap, rho_bias),
                eta: BandConv::random(&mut rng, weight_cap, 0.0),
            })
            .collect();
        Ok(Self { blocks, seed })
    }

    /// All sub-networks identically zero.
    pub fn zero(num_blocks: usize) -> Self {
        Self {
            blocks: (0..num_blocks).map(|_| CouplingBlock::zero()).collect(),
            seed: 0,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn forward(&self, x1: &SubBandStack<T>, x2: &SubBandStack<T>) -> Result<(SubBandStack<T>, SubBandStack<T>)> {
        let mut state = (x1.clone(), x2.clone());
        for b in &self.blocks {
            state = coupling_forward(&state.0, &state.1, b)?;
        }
        Ok(state)
    }

    pub fn inverse(&self, y1: &SubBandStack<T>, y2: &SubBandStack<T>) -> Result<(SubBandStack<T>, SubBandStack<T>)> {
        let mut state = (y1.clone(), y2.clone());
        for b in self.blocks.iter().rev() {
            state = coupling_inverse(&state.0, &state.1, b)?;
        }
        Ok(state)
    }
}

fn sigmoid<T: Scalar>(v: T) -> T {
    T::one() / (T::one() + (-v).exp())
}

fn shape_check<T: Scalar>(a: &SubBandStack<T>, b: &SubBandStack<T>) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "coupling branches have shapes {:?} and {:?}",
            a.band_dims(),
            b.band_dims()
        )))
    }
}

pub fn coupling_forward<T: Scalar>(
    x1: &SubBandStack<T>,
    x2: &SubBandStack<T>,
    block: &CouplingBlock<T>,
) -> Result<(SubBandStack<T>, SubBandStack<T>)> {
    shape_check(x1, x2)?;
    let y2 = x2.add(&block.phi.apply(x1))?;
    let scale = block.rho.apply(&y2).map(|v| sigmoid(v).exp());
    let y1 = x1
        .zip_with(&scale, |a, s| a * s)?
        .add(&block.eta.apply(&y2))?;
    Ok((y1, y2))
}

pub fn coupling_inverse<T: Scalar>(
    y1: &SubBandStack<T>,
    y2: &SubBandStack<T>,
    block: &CouplingBlock<T>,
) -> Result<(SubBandStack<T>, SubBandStack<T>)> {
    shape_check(y1, y2)?;
    let inv_scale = block.rho.apply(y2).map(|v| (-sigmoid(v)).exp());
    let x1 = y1
        .sub(&block.eta.apply(y2))?
        .zip_with(&inv_scale, |a, s| a * s)?;
    let x2 = y2.sub(&block.phi.apply(&x1))?;
    Ok((x1, x2))
}
