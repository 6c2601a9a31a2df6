use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "bssteg", version, args_override_self = true, about = "Blind-source-separation steganalysis of image-in-image steganography")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic cover/stego corpus.
    Gen(GenArgs),
    /// Extract the 8 moment features of every manifest image.
    Extract(ExtractArgs),
    /// Train an SVM on a feature file and save the model.
    Train(TrainArgs),
    /// Cross-validate on a feature file, or score a saved model on it.
    Eval(EvalArgs),
    /// Score every PCA pair by cross-validation.
    Gridsearch(GridArgs),
    /// Correlate payload sub-bands with embedding changes.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Inn,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Additive => "additive",
            Mode::Inn => "inn",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = Mode::Additive)]
    pub mode: Mode,
    /// Mixing strength for the additive mode.
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    /// Number of covers, and of stegos.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Side length of the square images (even).
    #[arg(long, default_value_t = 64)]
    pub size: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite an existing corpus in `out`.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtractArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// PCA components, 1-based, 1 = largest variance.
    #[arg(long, value_parser = parse_pair, default_value = "9,11")]
    pub pair: (usize, usize),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the 12 sub-bands of every image as PGM files here.
    #[arg(long)]
    pub dump_bands: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SvmArgs {
    /// Box constraint.
    #[arg(long = "c", default_value_t = 1.0)]
    pub c: f64,
    /// RBF kernel width.
    #[arg(long = "gamma", default_value_t = 0.125)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub svm: SvmArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CvArgs {
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pick C and the kernel width per fold by an inner 3-fold search.
    #[arg(long)]
    pub tune: bool,
    #[command(flatten)]
    pub svm: SvmArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// Score this model on all rows instead of cross-validating.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub cv: CvArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub cv: CvArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    /// JSONL with one {"cover", "payload", "stego"} object per line.
    #[arg(long)]
    pub triplets: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    /// Heatmap cell size in pixels.
    #[arg(long, default_value_t = 16)]
    pub cell: usize,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated indices, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == b || a == 0 || b == 0 || a > 12 || b > 12 {
        return Err(format!("need two distinct indices in 1..=12, got {a},{b}"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("9,11"), Ok((9, 11)));
        assert_eq!(parse_pair(" 3 , 1"), Ok((3, 1)));
        assert!(parse_pair("9").is_err());
        assert!(parse_pair("4,4").is_err());
        assert!(parse_pair("0,2").is_err());
        assert!(parse_pair("1,13").is_err());
    }

    #[test]
    fn clap_config_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
