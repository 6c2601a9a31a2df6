use rayon::prelude::*;

use bssteg::analysis::{correlation_matrix, Triplet};
use bssteg::corpus::{load_image, write_pgm};
use bssteg::Image;

use crate::args::AnalyzeArgs;
use crate::error::{CliError, CliResult};
use crate::gen::TripletEntry;
use crate::io::{read_text, resolve, write_run_log, write_text};

pub fn parse_triplets(text: &str) -> CliResult<Vec<TripletEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Data(format!("triplet line {}: {e}", n + 1)))
        })
        .collect()
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<()> {
    if args.cell == 0 {
        return Err(CliError::Usage("--cell must be at least 1".into()));
    }
    let entries = parse_triplets(&read_text(&args.triplets)?)?;
    if entries.is_empty() {
        return Err(CliError::Data(format!("{} lists no triplets", args.triplets.display())));
    }
    let load = |p: &std::path::Path| -> CliResult<Image<f64>> { Ok(load_image(resolve(&args.triplets, p))?) };
    let images: Vec<[Image<f64>; 3]> = entries
        .par_iter()
        .map(|t| Ok([load(&t.cover)?, load(&t.payload)?, load(&t.stego)?]))
        .collect::<CliResult<_>>()?;
    let triplets: Vec<Triplet<'_, f64>> = images
        .iter()
        .map(|[cover, payload, stego]| Triplet { cover, payload, stego })
        .collect();
    let matrix = correlation_matrix(&triplets)?;
    if matrix.any_degenerate() {
        log::warn!("some sub-bands had zero variance; their correlations are reported as 0");
    }
    write_text(&args.out, &matrix.to_csv())?;
    if let Some(path) = &args.heatmap {
        let (plane, side) = matrix.heatmap(args.cell);
        write_pgm(&plane, side, side, path)?;
    }
    write_run_log(&args.out, "analyze", args)?;
    log::info!("correlated {} triplets", triplets.len());
    Ok(())
}
