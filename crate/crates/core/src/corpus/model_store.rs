//! Versioned plain-text SVM model files.
//!
//! ```text
//! bssteg-svm v1
//! gamma_k <value>
//! C <value>
//! dim <d>
//! mean <d values>
//! scale <d values>
//! bias <value>
//! support_vectors <m>
//! <coef> <d values>        (m lines)
//! end
//! ```
//!
//! Numbers use 17 significant digits, so `f64` models reload bit-exactly.

use std::path::Path;

use crate::classify::{Standardizer, SvmModel};
use crate::corpus::numfmt::format_g17;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MODEL_FORMAT_TAG: &str = "bssteg-svm v1";

fn join<T: Scalar>(v: &[T]) -> String {
    v.iter()
        .map(|x| format_g17(x.to_f64_lossless()))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn model_to_string<T: Scalar>(model: &SvmModel<T>) -> Result<String> {
    if model.support_vectors.is_empty() {
        return Err(Error::ModelFile("refusing to save a model with no support vectors".into()));
    }
    let dim = model.dim();
    if model.support_vectors.iter().any(|sv| sv.len() != dim)
        || model.dual_coefs.len() != model.support_vectors.len()
        || model.standardizer.scale.len() != dim
    {
        return Err(Error::ModelFile("inconsistent model dimensions".into()));
    }
    let mut out = String::new();
    out.push_str(MODEL_FORMAT_TAG);
    out.push('\n');
    out.push_str(&format!("gamma_k {}\n", format_g17(model.gamma_k.to_f64_lossless())));
    out.push_str(&format!("C {}\n", format_g17(model.c.to_f64_lossless())));
    out.push_str(&format!("dim {dim}\n"));
    out.push_str(&format!("mean {}\n", join(&model.standardizer.mean)));
    out.push_str(&format!("scale {}\n", join(&model.standardizer.scale)));
    out.push_str(&format!("bias {}\n", format_g17(model.bias.to_f64_lossless())));
    out.push_str(&format!("support_vectors {}\n", model.support_vectors.len()));
    for (sv, &coef) in model.support_vectors.iter().zip(&model.dual_coefs) {
        out.push_str(&format_g17(coef.to_f64_lossless()));
        out.push(' ');
        out.push_str(&join(sv));
        out.push('\n');
    }
    out.push_str("end\n");
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner
            .next()
            .map(|(i, l)| (i + 1, l.trim()))
            .ok_or_else(|| Error::ModelFile(format!("truncated file: missing {what}")))
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, text) = self.next_line(key)?;
        let mut parts = text.split_whitespace();
        match parts.next() {
            Some(k) if k == key => Ok((line, parts.collect())),
            _ => Err(Error::ModelFile(format!("line {line}: expected {key:?}"))),
        }
    }
}

fn parse_num<T: Scalar>(line: usize, s: &str) -> Result<T> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(T::of)
        .ok_or_else(|| Error::ModelFile(format!("line {line}: bad number {s:?}")))
}

fn parse_vec<T: Scalar>(line: usize, parts: &[&str], dim: usize) -> Result<Vec<T>> {
    if parts.len() != dim {
        return Err(Error::ModelFile(format!(
            "line {line}: expected {dim} values, found {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_num(line, p)).collect()
}

fn single<T: Scalar>(lines: &mut Lines<'_>, key: &str) -> Result<T> {
    let (line, parts) = lines.keyed(key)?;
    Ok(parse_vec::<T>(line, &parts, 1)?[0])
}

pub fn model_from_str<T: Scalar>(text: &str) -> Result<SvmModel<T>> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (_, tag) = lines.next_line("format tag")?;
    if tag != MODEL_FORMAT_TAG {
        return Err(Error::ModelFile(format!(
            "unsupported format tag {tag:?} (expected {MODEL_FORMAT_TAG:?})"
        )));
    }
    let gamma_k = single(&mut lines, "gamma_k")?;
    let c = single(&mut lines, "C")?;
    let (line, parts) = lines.keyed("dim")?;
    let dim: usize = match parts.as_slice() {
        [d] => d
            .parse()
            .map_err(|_| Error::ModelFile(format!("line {line}: bad dim")))?,
        _ => return Err(Error::ModelFile(format!("line {line}: bad dim"))),
    };
    let (line, parts) = lines.keyed("mean")?;
    let mean = parse_vec(line, &parts, dim)?;
    let (line, parts) = lines.keyed("scale")?;
    let scale = parse_vec(line, &parts, dim)?;
    let bias = single(&mut lines, "bias")?;
    let (line, parts) = lines.keyed("support_vectors")?;
    let m: usize = match parts.as_slice() {
        [v] => v
            .parse()
            .map_err(|_| Error::ModelFile(format!("line {line}: bad support vector count")))?,
        _ => return Err(Error::ModelFile(format!("line {line}: bad support vector count"))),
    };
    if m == 0 {
        return Err(Error::ModelFile("model has no support vectors".into()));
    }
    let mut support_vectors = Vec::with_capacity(m);
    let mut dual_coefs = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next_line("support vector")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        let values: Vec<T> = parse_vec(line, &parts, dim + 1)?;
        dual_coefs.push(values[0]);
        support_vectors.push(values[1..].to_vec());
    }
    let (_, end) = lines.next_line("end marker")?;
    if end != "end" {
        return Err(Error::ModelFile("missing end marker".into()));
    }
    Ok(SvmModel {
        support_vectors,
        dual_coefs,
        bias,
        gamma_k,
        c,
        standardizer: Standardizer { mean, scale },
    })
}

pub fn save_model<T: Scalar>(model: &SvmModel<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = model_to_string(model)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<SvmModel<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}
