//! Grid search over pairs of PCA components, scored by cross-validation.

use rayon::prelude::*;

use crate::classify::cv::{kfold_cv, CvConfig};
use crate::corpus::manifest::Label;
use crate::corpus::numfmt::format_g17;
use crate::decomp::IcaParams;
use crate::error::{Error, Result};
use crate::pipeline::PreparedImage;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct GridItem<'a, T> {
    pub image: &'a PreparedImage<T>,
    pub label: Label,
    pub ica_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairScore {
    pub i: usize,
    pub j: usize,
    pub mean_acc: f64,
    pub std_acc: f64,
    /// Images whose ICA failed for this pair and were left out.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub best: (usize, usize),
    pub table: Vec<PairScore>,
}

/// All unordered pairs `(i, j)`, `1 <= i < j <= m`, in lexicographic order.
pub fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .collect()
}

pub fn grid_search_pca_pair<T: Scalar>(
    items: &[GridItem<'_, T>],
    candidates: &[(usize, usize)],
    cv: &CvConfig<T>,
) -> Result<GridResult> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no candidate PCA pairs".into()));
    }
    let mut pairs: Vec<(usize, usize)> = candidates
        .iter()
        .map(|&(i, j)| (i.min(j), i.max(j)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut table = Vec::with_capacity(pairs.len());
    for &pair in &pairs {
        let extracted: Vec<Option<Vec<T>>> = items
            .par_iter()
            .map(|it| -> Result<Option<Vec<T>>> {
                match it.image.features(pair, &IcaParams::with_seed(it.ica_seed)) {
                    Ok(f) => Ok(Some(f.to_vec())),
                    Err(e) if e.is_numerical() => {
                        log::debug!("pair {pair:?}: skipping image: {e}");
                        Ok(None)
                    }
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (f, it) in extracted.into_iter().zip(items) {
            if let Some(f) = f {
                rows.push(f);
                labels.push(it.label);
            }
        }
        let report = kfold_cv(&rows, &labels, cv)?;
        log::info!(
            "pair ({}, {}): accuracy {:.4} +- {:.4}",
            pair.0,
            pair.1,
            report.mean_accuracy,
            report.std_accuracy
        );
        table.push(PairScore {
            i: pair.0,
            j: pair.1,
            mean_acc: report.mean_accuracy,
            std_acc: report.std_accuracy,
            skipped: items.len() - rows.len(),
        });
    }
    // first maximum in lexicographic order wins ties
    let best = table
        .iter()
        .fold(None::<&PairScore>, |best, s| match best {
            Some(b) if b.mean_acc >= s.mean_acc => Some(b),
            _ => Some(s),
        })
        .map(|s| (s.i, s.j))
        .expect("non-empty table");
    Ok(GridResult { best, table })
}

/// Score table as CSV `i,j,mean_acc,std_acc`.
pub fn score_table_csv(result: &GridResult) -> String {
    let mut out = String::from("i,j,mean_acc,std_acc\n");
    for s in &result.table {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.i,
            s.j,
            format_g17(s.mean_acc),
            format_g17(s.std_acc)
        ));
    }
    out
}
