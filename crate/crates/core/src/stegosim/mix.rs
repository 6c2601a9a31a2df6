//! Additive sub-band mixer: payload low-frequency content added into selected
//! cover sub-bands, each contribution scaled to the receiving band's energy.

use crate::corpus::image::Image;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::wavelet::{haar_dwt, haar_idwt, Band, Slot, SubBandStack};

#[derive(Debug, Clone, PartialEq)]
pub struct MixParams<T> {
    /// Embedding strength in [0, 1]; 0 leaves the cover unchanged.
    pub alpha: T,
    pub target_bands: Vec<Slot>,
}

impl<T: Scalar> MixParams<T> {
    /// LL and LH of every channel.
    pub fn default_targets() -> Vec<Slot> {
        (0..3)
            .flat_map(|c| [Slot::new(c, Band::LL), Slot::new(c, Band::LH)])
            .collect()
    }

    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            target_bands: Self::default_targets(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero() && self.alpha <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside [0, 1]",
                self.alpha
            )));
        }
        if self.target_bands.is_empty() {
            return Err(Error::InvalidParameter("no target sub-bands".into()));
        }
        Ok(())
    }
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Sub-band stack of the stego image before the inverse transform.
pub fn mixed_bands<T: Scalar>(
    cover: &Image<T>,
    payload: &Image<T>,
    params: &MixParams<T>,
) -> Result<SubBandStack<T>> {
    params.validate()?;
    if cover.dims() != payload.dims() {
        return Err(Error::Dimension(format!(
            "cover is {:?}, payload is {:?}",
            cover.dims(),
            payload.dims()
        )));
    }
    let cover_bands = haar_dwt(cover.raster());
    let payload_bands = haar_dwt(payload.raster());
    let mut stego = cover_bands.clone();
    for &slot in &params.target_bands {
        let src = payload_bands.band(Slot::new(slot.channel, Band::LL));
        let src_norm = norm(src);
        let factor = if src_norm > T::zero() {
            norm(cover_bands.band(slot)) / src_norm
        } else {
            T::zero()
        };
        let k = params.alpha * factor;
        for (d, &s) in stego.band_mut(slot).iter_mut().zip(src) {
            *d += k * s;
        }
    }
    Ok(stego)
}

pub fn additive_mix<T: Scalar>(
    cover: &Image<T>,
    payload: &Image<T>,
    params: &MixParams<T>,
) -> Result<Image<T>> {
    Ok(haar_idwt(&mixed_bands(cover, payload, params)?).quantize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stegosim::psnr::psnr;
    use crate::stegosim::synth::synthetic_image;

    #[test]
    fn alpha_zero_is_identity() {
        let cover = synthetic_image::<f64>(32, 32, 1);
        let payload = synthetic_image::<f64>(32, 32, 2);
        let stego = additive_mix(&cover, &payload, &MixParams::new(0.0)).unwrap();
        assert_eq!(stego, cover);
    }

    #[test]
    fn ll_slot_gets_scaled_payload() {
        let cover = synthetic_image::<f64>(16, 16, 3);
        let payload = synthetic_image::<f64>(16, 16, 4);
        let params = MixParams {
            alpha: 0.2,
            target_bands: vec![Slot::new(1, Band::LL)],
        };
        let bands = mixed_bands(&cover, &payload, &params).unwrap();
        let c = haar_dwt(cover.raster());
        let p = haar_dwt(payload.raster());
        let slot = Slot::new(1, Band::LL);
        let k = 0.2 * norm(c.band(slot)) / norm(p.band(slot));
        for ((s, cv), pv) in bands.band(slot).iter().zip(c.band(slot)).zip(p.band(slot)) {
            assert!((s - (cv + k * pv)).abs() < 1e-12);
        }
        // untouched slots are bit-identical
        assert_eq!(bands.band(Slot::new(0, Band::LL)), c.band(Slot::new(0, Band::LL)));
    }

    #[test]
    fn strong_alpha_degrades_psnr() {
        let cover = synthetic_image::<f64>(32, 32, 5);
        let payload = synthetic_image::<f64>(32, 32, 6);
        let weak = additive_mix(&cover, &payload, &MixParams::new(0.05)).unwrap();
        let strong = additive_mix(&cover, &payload, &MixParams::new(1.0)).unwrap();
        let pw = psnr(cover.raster(), weak.raster()).unwrap();
        let ps = psnr(cover.raster(), strong.raster()).unwrap();
        assert!(ps < pw);
        assert!(ps < 15.0, "{ps}");
    }

    #[test]
    fn parameter_and_dimension_errors() {
        let a = synthetic_image::<f64>(16, 16, 1);
        let b = synthetic_image::<f64>(8, 16, 1);
        assert!(additive_mix(&a, &b, &MixParams::new(0.2)).is_err());
        assert!(additive_mix(&a, &a, &MixParams::new(1.5)).is_err());
        let empty = MixParams { alpha: 0.2, target_bands: vec![] };
        assert!(additive_mix(&a, &a, &empty).is_err());
    }
}
