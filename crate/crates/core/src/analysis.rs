//! Mixing analysis: how strongly each payload sub-band shows up in the
//! sub-band embedding changes (stego minus cover).

use rayon::prelude::*;

use crate::corpus::image::Image;
use crate::corpus::numfmt::format_g17;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::wavelet::{haar_dwt, Slot, SubBandStack, NUM_BANDS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation<T> {
    pub value: T,
    /// Set when either input has zero variance; `value` is then 0.
    pub degenerate: bool,
}

/// Pearson correlation with population moments.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<Correlation<T>> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "pearson inputs have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("pearson needs at least 2 samples".into()));
    }
    let n = T::of(x.len() as f64);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if !(sxx > T::zero() && syy > T::zero()) {
        return Ok(Correlation {
            value: T::zero(),
            degenerate: true,
        });
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(Correlation {
        value: r.max(-T::one()).min(T::one()),
        degenerate: false,
    })
}

/// Band-wise `dwt(stego) - dwt(cover)`.
pub fn embedding_changes<T: Scalar>(cover: &Image<T>, stego: &Image<T>) -> Result<SubBandStack<T>> {
    if cover.dims() != stego.dims() {
        return Err(Error::Dimension(format!(
            "cover is {:?}, stego is {:?}",
            cover.dims(),
            stego.dims()
        )));
    }
    haar_dwt(stego.raster()).sub(&haar_dwt(cover.raster()))
}

#[derive(Debug, Clone, Copy)]
pub struct Triplet<'a, T> {
    pub cover: &'a Image<T>,
    pub payload: &'a Image<T>,
    pub stego: &'a Image<T>,
}

/// Rows are payload sub-bands, columns are embedding-change sub-bands, both
/// in the fixed R-LL .. B-HH order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    pub values: [[T; NUM_BANDS]; NUM_BANDS],
    /// Entries where at least one triplet had a zero-variance band.
    pub degenerate: [[bool; NUM_BANDS]; NUM_BANDS],
}

impl<T: Scalar> CorrelationMatrix<T> {
    pub fn get(&self, payload: Slot, change: Slot) -> T {
        self.values[payload.index()][change.index()]
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().flatten().any(|&d| d)
    }

    /// 4x4 view averaging each (payload band, change band) entry over the
    /// matching-channel diagonal.
    pub fn channel_averaged(&self) -> [[T; 4]; 4] {
        let mut out = [[T::zero(); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|c| self.values[c * 4 + i][c * 4 + j]).sum::<T>() / T::of(3.0);
            }
        }
        out
    }

    /// Labeled CSV: header `payload\change,R-LL,...`, one row per payload band.
    pub fn to_csv(&self) -> String {
        let labels: Vec<String> = Slot::all().map(Slot::label).collect();
        let mut out = format!("payload\\change,{}\n", labels.join(","));
        for (i, row) in self.values.iter().enumerate() {
            out.push_str(&labels[i]);
            for v in row {
                out.push(',');
                out.push_str(&format_g17(v.to_f64_lossless()));
            }
            out.push('\n');
        }
        out
    }

    /// Heatmap plane mapping -1 to black and +1 to white, `cell` pixels per entry.
    pub fn heatmap(&self, cell: usize) -> (Vec<T>, usize) {
        let side = NUM_BANDS * cell;
        let mut plane = vec![T::zero(); side * side];
        for y in 0..side {
            for x in 0..side {
                plane[y * side + x] = (self.values[y / cell][x / cell] + T::one()) / T::of(2.0);
            }
        }
        (plane, side)
    }
}

fn triplet_matrix<T: Scalar>(t: &Triplet<'_, T>) -> Result<([[T; NUM_BANDS]; NUM_BANDS], [[bool; NUM_BANDS]; NUM_BANDS])> {
    if t.payload.dims() != t.cover.dims() {
        return Err(Error::Dimension(format!(
            "payload is {:?}, cover is {:?}",
            t.payload.dims(),
            t.cover.dims()
        )));
    }
    let changes = embedding_changes(t.cover, t.stego)?;
    let payload = haar_dwt(t.payload.raster());
    let mut values = [[T::zero(); NUM_BANDS]; NUM_BANDS];
    let mut degenerate = [[false; NUM_BANDS]; NUM_BANDS];
    for (i, p) in payload.bands().iter().enumerate() {
        for (j, c) in changes.bands().iter().enumerate() {
            let r = pearson(p, c)?;
            values[i][j] = r.value;
            degenerate[i][j] = r.degenerate;
        }
    }
    Ok((values, degenerate))
}

/// Per-triplet correlation matrices averaged entrywise.
pub fn correlation_matrix<T: Scalar>(triplets: &[Triplet<'_, T>]) -> Result<CorrelationMatrix<T>> {
    if triplets.is_empty() {
        return Err(Error::InvalidParameter("need at least one triplet".into()));
    }
    let per: Vec<_> = triplets
        .par_iter()
        .map(triplet_matrix)
        .collect::<Result<_>>()?;
    let n = T::of(per.len() as f64);
    let mut values = [[T::zero(); NUM_BANDS]; NUM_BANDS];
    let mut degenerate = [[false; NUM_BANDS]; NUM_BANDS];
    for i in 0..NUM_BANDS {
        for j in 0..NUM_BANDS {
            let sum: T = per.iter().map(|(v, _)| v[i][j]).sum();
            values[i][j] = (sum / n).max(-T::one()).min(T::one());
            degenerate[i][j] = per.iter().any(|(_, d)| d[i][j]);
        }
    }
    Ok(CorrelationMatrix { values, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stegosim::{additive_mix, synthetic_image, MixParams};
    use crate::wavelet::Band;
    use proptest::prelude::*;

    #[test]
    fn perfect_and_anti_correlation() {
        let x = [1.0, 4.0, 2.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &x).unwrap().value, 1.0);
        assert_eq!(pearson(&x, &y).unwrap().value, -1.0);
    }

    #[test]
    fn small_worked_example() {
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap().value;
        assert!((r - (27.0f64 / 28.0).sqrt()).abs() < 1e-12);
        assert!((r - 0.98198).abs() < 1e-5);
    }

    #[test]
    fn degenerate_and_length_errors() {
        let r = pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.value, 0.0);
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn identical_images_have_no_changes() {
        let c = synthetic_image::<f64>(16, 16, 1);
        let ch = embedding_changes(&c, &c).unwrap();
        assert!(ch.bands().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn changes_follow_the_mixer() {
        let c = synthetic_image::<f64>(32, 32, 2);
        let p = synthetic_image::<f64>(32, 32, 3);
        let s = additive_mix(&c, &p, &MixParams::new(0.2)).unwrap();
        let ch = embedding_changes(&c, &s).unwrap();
        let energy = |slot: Slot| ch.band(slot).iter().map(|v| v * v).sum::<f64>();
        for channel in 0..3 {
            let ll = energy(Slot::new(channel, Band::LL));
            assert!(ll > energy(Slot::new(channel, Band::HL)));
            assert!(ll > energy(Slot::new(channel, Band::HH)));
        }
    }

    #[test]
    fn stego_equal_cover_gives_zero_matrix() {
        let c = synthetic_image::<f64>(16, 16, 4);
        let p = synthetic_image::<f64>(16, 16, 5);
        let m = correlation_matrix(&[Triplet { cover: &c, payload: &p, stego: &c }]).unwrap();
        assert!(m.values.iter().flatten().all(|&v| v == 0.0));
        assert!(m.any_degenerate());
    }

    #[test]
    fn repeated_triplet_equals_single() {
        let c = synthetic_image::<f64>(16, 16, 6);
        let p = synthetic_image::<f64>(16, 16, 7);
        let s = additive_mix(&c, &p, &MixParams::new(0.2)).unwrap();
        let t = Triplet { cover: &c, payload: &p, stego: &s };
        let one = correlation_matrix(&[t]).unwrap();
        let many = correlation_matrix(&[t, t, t, t]).unwrap();
        assert_eq!(one, many);
        assert!(one.values.iter().flatten().all(|v| (-1.0..=1.0).contains(v)));
        let csv = one.to_csv();
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with("payload\\change,R-LL,R-LH"));
    }

    proptest! {
        #[test]
        fn scale_and_shift_invariance(
            x in proptest::collection::vec(-10.0f64..10.0, 3..40),
            a in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
            b in -10.0f64..10.0,
        ) {
            let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * v + i as f64).collect();
            let base = pearson(&x, &y).unwrap();
            prop_assume!(!base.degenerate);
            let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let scaled = pearson(&xs, &y).unwrap();
            prop_assume!(!scaled.degenerate);
            prop_assert!((scaled.value - a.signum() * base.value).abs() <= 1e-12);
        }
    }
}
