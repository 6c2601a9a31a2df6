use std::path::Path;

use rayon::prelude::*;

use bssteg::corpus::{load_image, write_features, write_pgm, DatasetManifest, FeatureRecord};
use bssteg::decomp::IcaParams;
use bssteg::features::assemble_features;
use bssteg::pipeline::{prepare, PreparedImage};
use bssteg::seed::derive_seed;
use bssteg::{haar_dwt, Image, Slot};

use crate::args::ExtractArgs;
use crate::error::{CliError, CliResult};
use crate::io::{load_manifest, resolve, write_run_log};

/// Per-image failures, split by kind so the exit code can reflect the worst.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Skips {
    pub data: usize,
    pub numerical: usize,
}

impl Skips {
    pub fn record(&mut self, path: &Path, err: &CliError) {
        log::warn!("skipping {}: {err}", path.display());
        match err {
            CliError::Numerical(_) => self.numerical += 1,
            _ => self.data += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.data + self.numerical
    }

    /// Error summarizing the skips, if there were any.
    pub fn into_result(self, of: usize) -> CliResult<()> {
        let msg = format!(
            "{} of {of} images skipped ({} unreadable, {} numerical failures)",
            self.total(),
            self.data,
            self.numerical
        );
        if self.data > 0 {
            Err(CliError::Data(msg))
        } else if self.numerical > 0 {
            Err(CliError::Numerical(msg))
        } else {
            Ok(())
        }
    }
}

pub fn ica_params(seed: u64, index: usize) -> IcaParams<f64> {
    IcaParams::with_seed(derive_seed(seed, "ica", index as u64))
}

fn load(manifest_path: &Path, rel: &Path) -> CliResult<Image<f64>> {
    Ok(load_image(resolve(manifest_path, rel))?)
}

/// Loads and decomposes every manifest image, in manifest order.
pub fn prepare_all(manifest_path: &Path, manifest: &DatasetManifest) -> Vec<CliResult<PreparedImage<f64>>> {
    manifest
        .entries
        .par_iter()
        .map(|e| Ok(prepare(&load(manifest_path, &e.path)?)?))
        .collect()
}

fn dump_bands(dir: &Path, index: usize, image: &Image<f64>) -> CliResult<()> {
    let stack = haar_dwt(image.raster());
    let (h, w) = stack.band_dims();
    for slot in Slot::all() {
        let path = dir.join(format!("{index:04}_{}.pgm", slot.label()));
        write_pgm(stack.band(slot), h, w, path)?;
    }
    Ok(())
}

pub fn cmd_extract(args: &ExtractArgs) -> CliResult<()> {
    let manifest = load_manifest(&args.manifest)?;
    if let Some(dir) = &args.dump_bands {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    }
    let results: Vec<CliResult<([f64; 8], bool)>> = manifest
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let image = load(&args.manifest, &e.path)?;
            if let Some(dir) = &args.dump_bands {
                dump_bands(dir, i, &image)?;
            }
            let pair = prepare(&image)?.components(args.pair, &ica_params(args.seed, i))?;
            Ok((assemble_features(&pair)?, pair.converged))
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut skips = Skips::default();
    let mut unconverged = 0;
    for (e, r) in manifest.entries.iter().zip(results) {
        match r {
            Ok((features, converged)) => {
                unconverged += usize::from(!converged);
                records.push(FeatureRecord { path: e.path.clone(), label: e.label, features });
            }
            Err(err) => skips.record(&e.path, &err),
        }
    }
    if unconverged > 0 {
        log::warn!("FastICA hit its iteration limit on {unconverged} of {} images", records.len());
    }
    write_features(&records, &args.out)?;
    write_run_log(&args.out, "extract", args)?;
    log::info!("wrote {} feature rows to {}", records.len(), args.out.display());
    skips.into_result(manifest.len())
}
