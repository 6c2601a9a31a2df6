use crate::corpus::image::Raster;
use crate::error::Result;
use crate::scalar::Scalar;

/// Peak signal-to-noise ratio in dB for peak 1.0. Identical inputs give `+inf`.
pub fn psnr<T: Scalar>(a: &Raster<T>, b: &Raster<T>) -> Result<T> {
    a.max_abs_diff(b)?;
    let n = T::of(a.as_slice().len() as f64);
    let mse = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        / n;
    if mse == T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::of(10.0) * (T::one() / mse).log10())
}
