//! Seeded procedural images with piecewise-smooth content, hard edges,
//! oriented texture and sensor-like noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::image::{Image, Raster, CHANNELS};
use crate::scalar::Scalar;

enum Shape {
    Ellipse { cy: f64, cx: f64, ry: f64, rx: f64, cos: f64, sin: f64 },
    Rect { y0: f64, x0: f64, y1: f64, x1: f64 },
}

impl Shape {
    fn contains(&self, y: f64, x: f64) -> bool {
        match *self {
            Shape::Ellipse { cy, cx, ry, rx, cos, sin } => {
                let (dy, dx) = (y - cy, x - cx);
                let u = dx * cos + dy * sin;
                let v = -dx * sin + dy * cos;
                (u / rx).powi(2) + (v / ry).powi(2) <= 1.0
            }
            Shape::Rect { y0, x0, y1, x1 } => y >= y0 && y < y1 && x >= x0 && x < x1,
        }
    }
}

struct Layer {
    shape: Shape,
    color: [f64; CHANNELS],
    /// Oriented sinusoid: amplitude, frequencies (cycles per pixel), phase.
    texture: (f64, f64, f64, f64),
}

/// Colour statistics of generated images. `chroma` is the maximum per-channel
/// deviation of a region's colour from its luma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthStyle {
    pub chroma: f64,
}

impl SynthStyle {
    /// Nearly grey, strongly channel-correlated content, as in most photographs.
    pub const COVER: SynthStyle = SynthStyle { chroma: 0.02 };
    /// Saturated, weakly channel-correlated content.
    pub const PAYLOAD: SynthStyle = SynthStyle { chroma: 0.3 };
}

impl Default for SynthStyle {
    fn default() -> Self {
        SynthStyle::COVER
    }
}

fn random_color(rng: &mut ChaCha8Rng, chroma: f64) -> [f64; CHANNELS] {
    let luma: f64 = rng.gen_range(0.2..0.75);
    std::array::from_fn(|_| (luma + chroma * rng.gen_range(-1.0..1.0)).clamp(0.05, 0.9))
}

/// 8-bit quantized synthetic image in the cover style, fully determined by `seed`.
pub fn synthetic_image<T: Scalar>(height: usize, width: usize, seed: u64) -> Image<T> {
    synthetic_image_styled(height, width, seed, SynthStyle::COVER)
}

pub fn synthetic_image_styled<T: Scalar>(
    height: usize,
    width: usize,
    seed: u64,
    style: SynthStyle,
) -> Image<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chroma = style.chroma.max(0.0);
    let (h, w) = (height as f64, width as f64);
    let bg_a = random_color(&mut rng, chroma);
    let bg_b = random_color(&mut rng, chroma);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (gc, gs) = (angle.cos(), angle.sin());

    let n_layers = rng.gen_range(4..10);
    let layers: Vec<Layer> = (0..n_layers)
        .map(|_| {
            let shape = if rng.gen_bool(0.6) {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Shape::Ellipse {
                    cy: rng.gen_range(0.0..h),
                    cx: rng.gen_range(0.0..w),
                    ry: rng.gen_range(0.05..0.4) * h,
                    rx: rng.gen_range(0.05..0.4) * w,
                    cos: theta.cos(),
                    sin: theta.sin(),
                }
            } else {
                let y0 = rng.gen_range(0.0..h * 0.8);
                let x0 = rng.gen_range(0.0..w * 0.8);
                Shape::Rect {
                    y0,
                    x0,
                    y1: y0 + rng.gen_range(0.1..0.5) * h,
                    x1: x0 + rng.gen_range(0.1..0.5) * w,
                }
            };
            let texture = if rng.gen_bool(0.5) {
                (
                    rng.gen_range(0.01..0.06),
                    rng.gen_range(-0.25..0.25),
                    rng.gen_range(-0.25..0.25),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            } else {
                (0.0, 0.0, 0.0, 0.0)
            };
            Layer {
                shape,
                color: random_color(&mut rng, chroma),
                texture,
            }
        })
        .collect();

    let noise_sigma = rng.gen_range(0.5..2.5) / 255.0;
    let noise = Normal::new(0.0, noise_sigma).expect("positive sigma");
    let mut pixels = vec![[0.0f64; CHANNELS]; height * width];
    for y in 0..height {
        for x in 0..width {
            let (fy, fx) = (y as f64 + 0.5, x as f64 + 0.5);
            let t = ((fx / w - 0.5) * gc + (fy / h - 0.5) * gs + 0.5).clamp(0.0, 1.0);
            let mut px: [f64; CHANNELS] = std::array::from_fn(|c| bg_a[c] * (1.0 - t) + bg_b[c] * t);
            for layer in &layers {
                if layer.shape.contains(fy, fx) {
                    let (amp, fu, fv, ph) = layer.texture;
                    let tex = amp * (std::f64::consts::TAU * (fu * fx + fv * fy) + ph).sin();
                    px = std::array::from_fn(|c| layer.color[c] + tex);
                }
            }
            pixels[y * width + x] = px;
        }
    }
    let raster = Raster::from_fn(height, width, |c, y, x| {
        T::of(pixels[y * width + x][c] + noise.sample(&mut rng))
    });
    raster.quantize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_seed_dependent() {
        let a = synthetic_image::<f64>(32, 32, 5);
        assert_eq!(a, synthetic_image::<f64>(32, 32, 5));
        assert_ne!(a, synthetic_image::<f64>(32, 32, 6));
        assert!(a.raster().as_slice().iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn has_structure() {
        let a = synthetic_image::<f64>(64, 64, 9);
        let s = a.raster().as_slice();
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / s.len() as f64;
        assert!(var > 1e-3);
    }
}
