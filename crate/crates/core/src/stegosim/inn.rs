//! Embedding and revealing with a coupling net in the Haar domain:
//! cover sub-bands feed the first branch, payload sub-bands the second.

use crate::corpus::image::{Image, Raster};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stegosim::coupling::CouplingNet;
use crate::wavelet::{haar_dwt, haar_idwt, SubBandStack};

fn same_dims<T: Scalar>(a: &Image<T>, b: &Image<T>) -> Result<()> {
    if a.dims() == b.dims() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "cover is {:?}, payload is {:?}",
            a.dims(),
            b.dims()
        )))
    }
}

/// Stego image (clamped and 8-bit quantized) plus the discarded second-branch
/// output, kept for analysis only.
pub fn inn_embed<T: Scalar>(
    cover: &Image<T>,
    payload: &Image<T>,
    net: &CouplingNet<T>,
) -> Result<(Image<T>, SubBandStack<T>)> {
    same_dims(cover, payload)?;
    let (y1, y2) = net.forward(&haar_dwt(cover.raster()), &haar_dwt(payload.raster()))?;
    Ok((haar_idwt(&y1).quantize(), y2))
}

/// Unquantized stego raster, for checks of the invertible path alone.
pub fn inn_embed_raw<T: Scalar>(
    cover: &Image<T>,
    payload: &Image<T>,
    net: &CouplingNet<T>,
) -> Result<(Raster<T>, SubBandStack<T>)> {
    same_dims(cover, payload)?;
    let (y1, y2) = net.forward(&haar_dwt(cover.raster()), &haar_dwt(payload.raster()))?;
    Ok((haar_idwt(&y1), y2))
}

/// Runs the net backwards from `(DWT(stego), noise)`; `None` means zero noise.
/// Returns the second-branch reconstruction, clamped to [0,1].
pub fn inn_reveal<T: Scalar>(
    stego: &Raster<T>,
    noise: Option<&SubBandStack<T>>,
    net: &CouplingNet<T>,
) -> Result<Raster<T>> {
    let y1 = haar_dwt(stego);
    let zero;
    let y2 = match noise {
        Some(n) => n,
        None => {
            let (h, w) = y1.band_dims();
            zero = SubBandStack::zeros(h, w);
            &zero
        }
    };
    let (_, x2) = net.inverse(&y1, y2)?;
    let mut out = haar_idwt(&x2);
    out.as_mut_slice()
        .iter_mut()
        .for_each(|v| *v = v.max(T::zero()).min(T::one()));
    Ok(out)
}
