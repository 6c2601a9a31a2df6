use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use bssteg::corpus::{read_manifest, DatasetManifest};

use crate::error::{CliError, CliResult};

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

/// Relative paths in a listing file are taken relative to that file.
pub fn resolve(listing: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        listing.parent().unwrap_or(Path::new("")).join(path)
    }
}

pub fn load_manifest(path: &Path) -> CliResult<DatasetManifest> {
    let manifest = read_manifest(path)?;
    if manifest.is_empty() {
        return Err(CliError::Data(format!("{} lists no images", path.display())));
    }
    Ok(manifest)
}

#[derive(Serialize)]
struct RunLog<'a, C> {
    tool: &'static str,
    command: &'a str,
    config: &'a C,
}

/// Writes `<output>.run.json` recording the configuration that produced `output`.
pub fn write_run_log<C: Serialize>(output: &Path, command: &str, config: &C) -> CliResult<()> {
    let mut name = output.as_os_str().to_owned();
    name.push(".run.json");
    let log = RunLog { tool: concat!("bssteg ", env!("CARGO_PKG_VERSION")), command, config };
    let mut json = serde_json::to_string_pretty(&log).expect("run config serializes");
    json.push('\n');
    write_text(Path::new(&name), &json)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_listing() {
        assert_eq!(resolve(Path::new("c/manifest.jsonl"), Path::new("x/a.png")), Path::new("c/x/a.png"));
        assert_eq!(resolve(Path::new("manifest.jsonl"), Path::new("a.png")), Path::new("a.png"));
        assert_eq!(resolve(Path::new("c/m.jsonl"), Path::new("/abs/a.png")), Path::new("/abs/a.png"));
    }
}
