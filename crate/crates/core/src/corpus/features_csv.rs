//! Feature store: one CSV row per image, moments in fixed column order.

use std::path::{Path, PathBuf};

use crate::corpus::manifest::Label;
use crate::corpus::numfmt::format_g17;
use crate::error::{Error, Result};

pub const FEATURE_COLUMNS: [&str; 8] = [
    "mu1", "mu2", "sigma1", "sigma2", "gamma1", "gamma2", "kappa1", "kappa2",
];

pub const HEADER: [&str; 10] = [
    "path", "label", "mu1", "mu2", "sigma1", "sigma2", "gamma1", "gamma2", "kappa1", "kappa2",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub path: PathBuf,
    pub label: Label,
    pub features: [f64; 8],
}

pub fn features_to_csv(records: &[FeatureRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::FeatureFile(e.to_string());
    w.write_record(HEADER).map_err(csv_err)?;
    for r in records {
        if let Some((i, v)) = r.features.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "{} = {v} for {}",
                FEATURE_COLUMNS[i],
                r.path.display()
            )));
        }
        let mut row = Vec::with_capacity(HEADER.len());
        row.push(r.path.to_string_lossy().into_owned());
        row.push(r.label.as_index().to_string());
        row.extend(r.features.iter().map(|&v| format_g17(v)));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::FeatureFile(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn features_from_csv(text: &str) -> Result<Vec<FeatureRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| Error::FeatureFile(e.to_string()))?
        .clone();
    for (i, want) in HEADER.iter().enumerate() {
        match header.get(i) {
            Some(got) if got == *want => {}
            Some(got) => {
                return Err(Error::FeatureFile(format!(
                    "header column {} is {got:?}, expected {want:?}",
                    i + 1
                )))
            }
            None => {
                return Err(Error::FeatureFile(format!(
                    "header is missing column {want:?}"
                )))
            }
        }
    }
    if header.len() != HEADER.len() {
        return Err(Error::FeatureFile(format!(
            "header has {} columns, expected {}",
            header.len(),
            HEADER.len()
        )));
    }
    let mut out = Vec::new();
    for (row_idx, rec) in rdr.records().enumerate() {
        let line = row_idx + 2;
        let rec = rec.map_err(|e| Error::FeatureFile(format!("line {line}: {e}")))?;
        let label = rec[1]
            .parse::<u8>()
            .ok()
            .and_then(Label::from_index)
            .ok_or_else(|| Error::FeatureFile(format!("line {line}: bad label {:?}", &rec[1])))?;
        let mut features = [0.0f64; 8];
        for (k, slot) in features.iter_mut().enumerate() {
            let field = &rec[k + 2];
            *slot = field.parse().map_err(|_| {
                Error::FeatureFile(format!(
                    "line {line}: {} is not a number: {field:?}",
                    FEATURE_COLUMNS[k]
                ))
            })?;
            if !slot.is_finite() {
                return Err(Error::NonFinite(format!("line {line}: {}", FEATURE_COLUMNS[k])));
            }
        }
        out.push(FeatureRecord {
            path: PathBuf::from(&rec[0]),
            label,
            features,
        });
    }
    Ok(out)
}

pub fn write_features(records: &[FeatureRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = features_to_csv(records)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_features(path: impl AsRef<Path>) -> Result<Vec<FeatureRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    features_from_csv(&text)
}
