//! One-level orthonormal 2-D Haar transform, applied per colour channel.
//!
//! For each 2x2 block `[a b; c d]`:
//!
//! ```text
//! LL = (a + b + c + d) / 2    LH = (a - b + c - d) / 2
//! HL = (a + b - c - d) / 2    HH = (a - b - c + d) / 2
//! ```
//!
//! The basis is orthonormal, so the transform preserves energy exactly and the
//! inverse is the transpose.

use std::fmt;

use crate::corpus::image::{Raster, CHANNELS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of sub-bands in a stack (4 per channel).
pub const NUM_BANDS: usize = 4 * CHANNELS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    LL,
    LH,
    HL,
    HH,
}

impl Band {
    pub const ALL: [Band; 4] = [Band::LL, Band::LH, Band::HL, Band::HH];
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Position of one sub-band in the fixed stack order R-LL, R-LH, ..., B-HH.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot {
    pub channel: usize,
    pub band: Band,
}

impl Slot {
    pub fn new(channel: usize, band: Band) -> Self {
        assert!(channel < CHANNELS, "channel {channel} out of range");
        Self { channel, band }
    }

    pub fn index(self) -> usize {
        self.channel * 4 + self.band as usize
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < NUM_BANDS, "slot {i} out of range");
        Self::new(i / 4, Band::ALL[i % 4])
    }

    pub fn all() -> impl Iterator<Item = Slot> {
        (0..NUM_BANDS).map(Slot::from_index)
    }

    /// Label such as `R-LL`.
    pub fn label(self) -> String {
        format!("{}-{}", ["R", "G", "B"][self.channel], self.band)
    }
}

/// The 12 half-resolution sub-bands of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBandStack<T> {
    bands: Vec<Vec<T>>,
    band_height: usize,
    band_width: usize,
}

impl<T: Scalar> SubBandStack<T> {
    pub fn new(band_height: usize, band_width: usize, bands: Vec<Vec<T>>) -> Result<Self> {
        if bands.len() != NUM_BANDS {
            return Err(Error::Dimension(format!(
                "expected {NUM_BANDS} bands, got {}",
                bands.len()
            )));
        }
        if let Some((i, b)) = bands
            .iter()
            .enumerate()
            .find(|(_, b)| b.len() != band_height * band_width)
        {
            return Err(Error::Dimension(format!(
                "band {} has {} samples, expected {band_height}x{band_width}",
                Slot::from_index(i).label(),
                b.len()
            )));
        }
        Ok(Self {
            bands,
            band_height,
            band_width,
        })
    }

    pub fn zeros(band_height: usize, band_width: usize) -> Self {
        Self {
            bands: vec![vec![T::zero(); band_height * band_width]; NUM_BANDS],
            band_height,
            band_width,
        }
    }

    pub fn band_dims(&self) -> (usize, usize) {
        (self.band_height, self.band_width)
    }

    /// Dimensions of the raster this stack reconstructs to.
    pub fn source_dims(&self) -> (usize, usize) {
        (2 * self.band_height, 2 * self.band_width)
    }

    pub fn band_len(&self) -> usize {
        self.band_height * self.band_width
    }

    pub fn band(&self, slot: Slot) -> &[T] {
        &self.bands[slot.index()]
    }

    pub fn band_mut(&mut self, slot: Slot) -> &mut [T] {
        &mut self.bands[slot.index()]
    }

    pub fn bands(&self) -> &[Vec<T>] {
        &self.bands
    }

    pub fn bands_mut(&mut self) -> &mut [Vec<T>] {
        &mut self.bands
    }

    pub fn energy(&self) -> T {
        self.bands.iter().flatten().map(|&v| v * v).sum()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.band_dims() == other.band_dims()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "sub-band shapes {:?} vs {:?}",
                self.band_dims(),
                other.band_dims()
            )))
        }
    }

    /// Element-wise `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|v| v * k)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            bands: self
                .bands
                .iter()
                .map(|b| b.iter().map(|&v| f(v)).collect())
                .collect(),
            band_height: self.band_height,
            band_width: self.band_width,
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            bands: self
                .bands
                .iter()
                .zip(&other.bands)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
            band_height: self.band_height,
            band_width: self.band_width,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_shape(other)?;
        Ok(self
            .bands
            .iter()
            .flatten()
            .zip(other.bands.iter().flatten())
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max))
    }
}

/// Forward transform. Dimensions must be even; [`crate::Image`] guarantees this.
pub fn haar_dwt<T: Scalar>(raster: &Raster<T>) -> SubBandStack<T> {
    let (h, w) = raster.dims();
    assert!(
        h % 2 == 0 && w % 2 == 0,
        "haar_dwt needs even dimensions, got {h}x{w}"
    );
    let (bh, bw) = (h / 2, w / 2);
    let half = T::of(0.5);
    let mut stack = SubBandStack::zeros(bh, bw);
    for c in 0..CHANNELS {
        let plane = raster.channel(c);
        let base = c * 4;
        for by in 0..bh {
            let top = &plane[2 * by * w..(2 * by + 1) * w];
            let bottom = &plane[(2 * by + 1) * w..(2 * by + 2) * w];
            for bx in 0..bw {
                let (a, b) = (top[2 * bx], top[2 * bx + 1]);
                let (cc, d) = (bottom[2 * bx], bottom[2 * bx + 1]);
                let i = by * bw + bx;
                stack.bands[base][i] = (a + b + cc + d) * half;
                stack.bands[base + 1][i] = (a - b + cc - d) * half;
                stack.bands[base + 2][i] = (a + b - cc - d) * half;
                stack.bands[base + 3][i] = (a - b - cc + d) * half;
            }
        }
    }
    stack
}

/// Inverse transform. No clamping: synthetic stacks may leave [0,1].
pub fn haar_idwt<T: Scalar>(stack: &SubBandStack<T>) -> Raster<T> {
    let (bh, bw) = stack.band_dims();
    let (h, w) = (2 * bh, 2 * bw);
    let half = T::of(0.5);
    let mut out = Raster::zeros(h, w);
    for c in 0..CHANNELS {
        let base = c * 4;
        let (ll, lh, hl, hh) = (
            &stack.bands[base],
            &stack.bands[base + 1],
            &stack.bands[base + 2],
            &stack.bands[base + 3],
        );
        let plane = out.channel_mut(c);
        for by in 0..bh {
            for bx in 0..bw {
                let i = by * bw + bx;
                let (s0, s1, s2, s3) = (ll[i], lh[i], hl[i], hh[i]);
                plane[2 * by * w + 2 * bx] = (s0 + s1 + s2 + s3) * half;
                plane[2 * by * w + 2 * bx + 1] = (s0 - s1 + s2 - s3) * half;
                plane[(2 * by + 1) * w + 2 * bx] = (s0 + s1 - s2 - s3) * half;
                plane[(2 * by + 1) * w + 2 * bx + 1] = (s0 - s1 - s2 + s3) * half;
            }
        }
    }
    out
}
