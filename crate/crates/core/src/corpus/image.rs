use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of colour channels carried by every raster (R, G, B).
pub const CHANNELS: usize = 3;

/// Planar three-channel raster with unconstrained values.
///
/// Storage is channel-major: all of R, then G, then B, each row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> Raster<T> {
    pub fn new(height: usize, width: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != CHANNELS * height * width {
            return Err(Error::Dimension(format!(
                "raster {height}x{width}x{CHANNELS} needs {} samples, got {}",
                CHANNELS * height * width,
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![T::zero(); CHANNELS * height * width],
        }
    }

    pub fn filled(height: usize, width: usize, value: T) -> Self {
        Self {
            height,
            width,
            data: vec![value; CHANNELS * height * width],
        }
    }

    /// Builds a raster from a per-sample function of `(channel, row, col)`.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(CHANNELS * height * width);
        for c in 0..CHANNELS {
            for y in 0..height {
                for x in 0..width {
                    data.push(f(c, y, x));
                }
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn channel(&self, c: usize) -> &[T] {
        let n = self.height * self.width;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.height * self.width;
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> T {
        self.data[(c * self.height + y) * self.width + x]
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> T {
        self.data.iter().map(|&v| v * v).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max))
    }

    /// Clamps to [0,1] and rounds every sample to the nearest multiple of 1/255,
    /// the path every exchanged 8-bit image goes through.
    pub fn quantize(&self) -> Image<T> {
        let scale = T::of(255.0);
        let data = self
            .data
            .iter()
            .map(|&v| {
                let v = if v.is_nan() { T::zero() } else { v };
                (v.max(T::zero()).min(T::one()) * scale).round() / scale
            })
            .collect();
        Image(Raster {
            height: self.height,
            width: self.width,
            data,
        })
    }

    pub fn cast<U: Scalar>(&self) -> Raster<U> {
        Raster {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| U::of(v.to_f64_lossless())).collect(),
        }
    }
}

/// RGB image with intensities in [0,1] and even, non-zero dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T>(Raster<T>);

impl<T: Scalar> Image<T> {
    pub fn from_raster(raster: Raster<T>) -> Result<Self> {
        let (h, w) = raster.dims();
        if h == 0 || w == 0 || h % 2 != 0 || w % 2 != 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions {h}x{w} must be even and non-zero"
            )));
        }
        if let Some(v) = raster
            .data
            .iter()
            .find(|v| !(**v >= T::zero() && **v <= T::one()))
        {
            return Err(Error::InvalidImage(format!("intensity {v} outside [0,1]")));
        }
        Ok(Self(raster))
    }

    /// Interleaved 8-bit RGB samples, cropping a trailing odd row/column.
    pub fn from_rgb8(height: usize, width: usize, rgb: &[u8]) -> Result<Self> {
        if rgb.len() != height * width * CHANNELS {
            return Err(Error::Dimension(format!(
                "{height}x{width} RGB needs {} bytes, got {}",
                height * width * CHANNELS,
                rgb.len()
            )));
        }
        let (h, w) = (height & !1, width & !1);
        if h == 0 || w == 0 {
            return Err(Error::InvalidImage(format!(
                "{height}x{width} is too small after even-dimension cropping"
            )));
        }
        let scale = T::of(255.0);
        let raster = Raster::from_fn(h, w, |c, y, x| {
            T::of(f64::from(rgb[(y * width + x) * CHANNELS + c])) / scale
        });
        Ok(Self(raster))
    }

    /// Interleaved 8-bit RGB samples (round to nearest level).
    pub fn to_rgb8(&self) -> Vec<u8> {
        let (h, w) = self.0.dims();
        let mut out = vec![0u8; h * w * CHANNELS];
        let scale = T::of(255.0);
        for c in 0..CHANNELS {
            for (i, &v) in self.0.channel(c).iter().enumerate() {
                out[i * CHANNELS + c] = (v * scale).round().to_u8().unwrap_or(0);
            }
        }
        out
    }

    pub fn raster(&self) -> &Raster<T> {
        &self.0
    }

    pub fn into_raster(self) -> Raster<T> {
        self.0
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn dims(&self) -> (usize, usize) {
        self.0.dims()
    }
}

impl<T> AsRef<Raster<T>> for Image<T> {
    fn as_ref(&self) -> &Raster<T> {
        &self.0
    }
}
