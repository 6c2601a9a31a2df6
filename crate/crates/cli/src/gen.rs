use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use bssteg::corpus::{save_png, write_manifest, DatasetManifest, ManifestEntry, Role};
use bssteg::seed::derive_seed;
use bssteg::stegosim::coupling::{DEFAULT_NUM_BLOCKS, DEFAULT_RHO_BIAS, DEFAULT_WEIGHT_CAP};
use bssteg::stegosim::{additive_mix, inn_embed, synthetic_image_styled, CouplingNet, MixParams, SynthStyle};
use bssteg::{Image, Label};

use crate::args::{GenArgs, Mode};
use crate::error::{CliError, CliResult};
use crate::io::write_text;

pub const MANIFEST: &str = "manifest.jsonl";
pub const TRIPLETS: &str = "triplets.jsonl";
pub const PARAMS: &str = "params.json";
const SUBDIRS: [&str; 4] = ["cover", "base", "payload", "stego"];

/// One line of `triplets.jsonl`; paths are relative to that file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletEntry {
    pub cover: PathBuf,
    pub payload: PathBuf,
    pub stego: PathBuf,
}

#[derive(Serialize)]
struct ItemSeeds {
    cover: u64,
    base: u64,
    payload: u64,
}

#[derive(Serialize)]
struct NetParams {
    blocks: usize,
    weight_cap: f64,
    rho_bias: f64,
    seed: u64,
}

#[derive(Serialize)]
struct GenParams<'a> {
    tool: &'static str,
    mode: Mode,
    alpha: f64,
    n: usize,
    size: usize,
    seed: u64,
    cover_chroma: f64,
    payload_chroma: f64,
    mix_targets: Vec<String>,
    net: Option<NetParams>,
    seed_derivation: &'a str,
    items: Vec<ItemSeeds>,
}

fn check_collision(out: &Path, force: bool) -> CliResult<()> {
    let ours = [MANIFEST, TRIPLETS, PARAMS].into_iter().chain(SUBDIRS);
    let existing: Vec<PathBuf> = ours.map(|n| out.join(n)).filter(|p| p.exists()).collect();
    if existing.is_empty() {
        return Ok(());
    }
    if !force {
        return Err(CliError::Usage(format!(
            "{} already holds a corpus; pass --force to overwrite",
            out.display()
        )));
    }
    for p in existing {
        let res = if p.is_dir() { fs::remove_dir_all(&p) } else { fs::remove_file(&p) };
        res.map_err(|e| CliError::Data(format!("cannot remove {}: {e}", p.display())))?;
    }
    Ok(())
}

fn name(kind: &str, i: usize) -> PathBuf {
    Path::new(kind).join(format!("{kind}_{i:04}.png"))
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.size < 2 || args.size % 2 != 0 {
        return Err(CliError::Usage(format!("--size must be even and >= 2, got {}", args.size)));
    }
    let mix = MixParams::new(args.alpha);
    mix.validate()?;
    check_collision(&args.out, args.force)?;
    for d in SUBDIRS {
        let p = args.out.join(d);
        fs::create_dir_all(&p).map_err(|e| CliError::Data(format!("cannot create {}: {e}", p.display())))?;
    }

    let net_seed = derive_seed(args.seed, "net", 0);
    let net = match args.mode {
        Mode::Inn => Some(CouplingNet::<f64>::new(DEFAULT_NUM_BLOCKS, net_seed)?),
        Mode::Additive => None,
    };
    let seeds: Vec<ItemSeeds> = (0..args.n as u64)
        .map(|i| ItemSeeds {
            cover: derive_seed(args.seed, "cover", i),
            base: derive_seed(args.seed, "base", i),
            payload: derive_seed(args.seed, "payload", i),
        })
        .collect();

    let s = args.size;
    seeds
        .par_iter()
        .enumerate()
        .try_for_each(|(i, sd)| -> CliResult<()> {
            let cover: Image<f64> = synthetic_image_styled(s, s, sd.cover, SynthStyle::COVER);
            let base: Image<f64> = synthetic_image_styled(s, s, sd.base, SynthStyle::COVER);
            let payload: Image<f64> = synthetic_image_styled(s, s, sd.payload, SynthStyle::PAYLOAD);
            let stego = match &net {
                Some(net) => inn_embed(&base, &payload, net)?.0,
                None => additive_mix(&base, &payload, &mix)?,
            };
            save_png(&cover, args.out.join(name("cover", i)))?;
            save_png(&base, args.out.join(name("base", i)))?;
            save_png(&payload, args.out.join(name("payload", i)))?;
            save_png(&stego, args.out.join(name("stego", i)))?;
            Ok(())
        })?;

    let mut entries = Vec::with_capacity(2 * args.n);
    for i in 0..args.n {
        entries.push(ManifestEntry { path: name("cover", i), label: Label::Cover, scheme: None, role: Role::Unsplit });
    }
    for i in 0..args.n {
        entries.push(ManifestEntry {
            path: name("stego", i),
            label: Label::Stego,
            scheme: Some(args.mode.name().to_string()),
            role: Role::Unsplit,
        });
    }
    write_manifest(&DatasetManifest::new(entries)?, args.out.join(MANIFEST))?;

    let mut triplets = String::new();
    for i in 0..args.n {
        let t = TripletEntry { cover: name("base", i), payload: name("payload", i), stego: name("stego", i) };
        triplets.push_str(&serde_json::to_string(&t).expect("triplet serializes"));
        triplets.push('\n');
    }
    write_text(&args.out.join(TRIPLETS), &triplets)?;

    let params = GenParams {
        tool: concat!("bssteg ", env!("CARGO_PKG_VERSION")),
        mode: args.mode,
        alpha: args.alpha,
        n: args.n,
        size: args.size,
        seed: args.seed,
        cover_chroma: SynthStyle::COVER.chroma,
        payload_chroma: SynthStyle::PAYLOAD.chroma,
        mix_targets: mix.target_bands.iter().map(|s| s.label()).collect(),
        net: net.as_ref().map(|_| NetParams {
            blocks: DEFAULT_NUM_BLOCKS,
            weight_cap: DEFAULT_WEIGHT_CAP,
            rho_bias: DEFAULT_RHO_BIAS,
            seed: net_seed,
        }),
        seed_derivation: "derive_seed(seed, step, index) with steps net, cover, base, payload",
        items: seeds,
    };
    let mut json = serde_json::to_string_pretty(&params).expect("params serialize");
    json.push('\n');
    write_text(&args.out.join(PARAMS), &json)?;
    log::info!("wrote {} covers and {} stegos to {}", args.n, args.n, args.out.display());
    Ok(())
}
