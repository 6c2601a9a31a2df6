//! PNG and binary PPM (P6) decoding into [`Image`], plus PNG/PGM writers.
//!
//! Only 8-bit RGB data is accepted. Grayscale, 16-bit and translucent inputs
//! are rejected instead of being converted. Odd dimensions lose their last
//! row and/or column so that one level of 2x2 Haar decimation always applies.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::corpus::image::{Image, CHANNELS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<Image<T>> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let decode_err = |reason: String| Error::Decode {
        path: path.to_path_buf(),
        reason,
    };
    let (h, w, rgb) = if bytes.starts_with(b"\x89PNG") {
        decode_png(&bytes).map_err(decode_err)?
    } else if bytes.starts_with(b"P6") {
        decode_ppm(&bytes).map_err(decode_err)?
    } else {
        return Err(decode_err("not a PNG or binary PPM (P6) file".into()));
    };
    Image::from_rgb8(h, w, &rgb).map_err(|e| decode_err(e.to_string()))
}

fn decode_png(bytes: &[u8]) -> std::result::Result<(usize, usize, Vec<u8>), String> {
    let mut decoder = png::Decoder::new(bytes);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| e.to_string())?;
    let info = reader.info();
    if info.bit_depth == png::BitDepth::Sixteen {
        return Err("16-bit PNG is not supported (8-bit RGB only)".into());
    }
    if matches!(
        info.color_type,
        png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha
    ) {
        return Err("grayscale PNG is not supported (8-bit RGB only)".into());
    }
    let mut buf = vec![0; reader.output_buffer_size()];
    let frame = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    if frame.bit_depth != png::BitDepth::Eight {
        return Err(format!("unsupported bit depth {:?}", frame.bit_depth));
    }
    let (w, h) = (frame.width as usize, frame.height as usize);
    let data = &buf[..frame.buffer_size()];
    let rgb = match frame.color_type {
        png::ColorType::Rgb => data
            .chunks(frame.line_size)
            .flat_map(|row| &row[..w * CHANNELS])
            .copied()
            .collect(),
        png::ColorType::Rgba => {
            let mut rgb = Vec::with_capacity(w * h * CHANNELS);
            for row in data.chunks(frame.line_size) {
                for px in row[..w * 4].chunks_exact(4) {
                    if px[3] != 255 {
                        return Err("translucent RGBA PNG is not supported".into());
                    }
                    rgb.extend_from_slice(&px[..3]);
                }
            }
            rgb
        }
        other => return Err(format!("unsupported PNG colour type {other:?}")),
    };
    Ok((h, w, rgb))
}

fn decode_ppm(bytes: &[u8]) -> std::result::Result<(usize, usize, Vec<u8>), String> {
    let mut pos = 2;
    let mut header = [0usize; 3];
    for field in header.iter_mut() {
        // whitespace and '#' comments between header tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| "malformed PPM header".to_string())?;
    }
    let [w, h, maxval] = header;
    if maxval != 255 {
        return Err(format!("PPM maxval {maxval} is not supported (8-bit only)"));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err("malformed PPM header".into());
    }
    pos += 1;
    let need = w * h * CHANNELS;
    let body = bytes
        .get(pos..pos + need)
        .ok_or_else(|| format!("truncated PPM: need {need} sample bytes"))?;
    Ok((h, w, body.to_vec()))
}

/// Writes an 8-bit RGB PNG. Output is byte-identical for identical images.
pub fn save_png<T: Scalar>(image: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        image.width() as u32,
        image.height() as u32,
    );
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let io_err = |e: png::EncodingError| Error::io(path, std::io::Error::other(e));
    let mut writer = encoder.write_header().map_err(io_err)?;
    writer.write_image_data(&image.to_rgb8()).map_err(io_err)?;
    writer.finish().map_err(io_err)
}

pub fn save_ppm<T: Scalar>(image: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.to_rgb8());
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Dumps a single plane as 8-bit PGM, linearly mapping `[min, max]` to `[0, 255]`.
pub fn write_pgm<T: Scalar>(
    plane: &[T],
    height: usize,
    width: usize,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if plane.len() != height * width {
        return Err(Error::Dimension(format!(
            "plane of {} samples is not {height}x{width}",
            plane.len()
        )));
    }
    let (lo, hi) = plane
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(plane.iter().map(|&v| {
        if span > T::zero() {
            ((v - lo) / span * T::of(255.0)).round().to_u8().unwrap_or(0)
        } else {
            0
        }
    }));
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&out)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_png(path: &Path, w: u32, h: u32, color: png::ColorType, depth: png::BitDepth, data: &[u8]) {
        let file = File::create(path).unwrap();
        let mut enc = png::Encoder::new(BufWriter::new(file), w, h);
        enc.set_color(color);
        enc.set_depth(depth);
        let mut wr = enc.write_header().unwrap();
        wr.write_image_data(data).unwrap();
    }

    #[test]
    fn ppm_all_white() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.ppm");
        let mut bytes = b"P6\n# comment\n2 2\n255\n".to_vec();
        bytes.extend([255u8; 12]);
        std::fs::write(&p, bytes).unwrap();
        let img = load_image::<f64>(&p).unwrap();
        assert_eq!(img.dims(), (2, 2));
        assert!(img.raster().as_slice().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn png_3x3_is_cropped() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.png");
        let data: Vec<u8> = (0..27).collect();
        write_png(&p, 3, 3, png::ColorType::Rgb, png::BitDepth::Eight, &data);
        let img = load_image::<f64>(&p).unwrap();
        assert_eq!(img.dims(), (2, 2));
        assert_eq!(img.raster().get(1, 1, 0), 10.0 / 255.0);
    }

    #[test]
    fn grayscale_and_16_bit_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("g.png");
        write_png(&g, 2, 2, png::ColorType::Grayscale, png::BitDepth::Eight, &[0; 4]);
        let err = load_image::<f64>(&g).unwrap_err().to_string();
        assert!(err.contains("grayscale"), "{err}");

        let d = dir.path().join("d.png");
        write_png(&d, 2, 2, png::ColorType::Rgb, png::BitDepth::Sixteen, &[0; 24]);
        assert!(load_image::<f64>(&d).is_err());

        let p = dir.path().join("d.ppm");
        let mut bytes = b"P6 2 2 65535\n".to_vec();
        bytes.extend([0u8; 24]);
        std::fs::write(&p, bytes).unwrap();
        assert!(load_image::<f64>(&p).is_err());
    }

    #[test]
    fn unreadable_and_truncated() {
        assert!(matches!(
            load_image::<f64>("/nonexistent/x.png"),
            Err(Error::Io { .. })
        ));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.ppm");
        std::fs::write(&p, b"P6 2 2 255\n\x00\x01").unwrap();
        assert!(matches!(load_image::<f64>(&p), Err(Error::Decode { .. })));
    }

    #[test]
    fn png_and_ppm_writers_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rgb: Vec<u8> = (0..4 * 6 * 3).map(|v| (v * 7 % 256) as u8).collect();
        let img = Image::<f64>::from_rgb8(4, 6, &rgb).unwrap();
        let a = dir.path().join("a.png");
        let b = dir.path().join("b.ppm");
        save_png(&img, &a).unwrap();
        save_ppm(&img, &b).unwrap();
        assert_eq!(load_image::<f64>(&a).unwrap(), img);
        assert_eq!(load_image::<f64>(&b).unwrap(), img);
        // deterministic: repeated loads are bit-identical
        assert_eq!(load_image::<f64>(&a).unwrap(), load_image::<f64>(&a).unwrap());
    }
}
