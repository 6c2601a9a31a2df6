//! Line-delimited JSON dataset manifests.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Cover,
    Stego,
}

impl Label {
    /// 0 for cover, 1 for stego.
    pub fn as_index(self) -> u8 {
        match self {
            Label::Cover => 0,
            Label::Stego => 1,
        }
    }

    pub fn from_index(v: u8) -> Option<Self> {
        match v {
            0 => Some(Label::Cover),
            1 => Some(Label::Stego),
            _ => None,
        }
    }

    /// -1 for cover, +1 for stego.
    pub fn sign(self) -> i8 {
        match self {
            Label::Cover => -1,
            Label::Stego => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Cover => "cover",
            Label::Stego => "stego",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cover" => Ok(Label::Cover),
            "stego" => Ok(Label::Stego),
            other => Err(Error::InvalidParameter(format!(
                "unknown label {other:?} (expected cover or stego)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Eval,
    #[default]
    Unsplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(default)]
    pub role: Role,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub cover: usize,
    pub stego: usize,
}

impl ClassCounts {
    pub fn is_balanced(&self) -> bool {
        self.cover == self.stego
    }
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let m = Self { entries };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            if !seen.insert(&e.path) {
                return Err(Error::Manifest {
                    line: i + 1,
                    reason: format!("duplicate path {}", e.path.display()),
                });
            }
        }
        Ok(())
    }

    pub fn counts(&self) -> ClassCounts {
        self.entries
            .iter()
            .fold(ClassCounts::default(), |mut c, e| {
                match e.label {
                    Label::Cover => c.cover += 1,
                    Label::Stego => c.stego += 1,
                }
                c
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: ManifestEntry = serde_json::from_str(line).map_err(|e| Error::Manifest {
                line: i + 1,
                reason: e.to_string(),
            })?;
            entries.push(entry);
        }
        Self::new(entries)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("manifest entries serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    DatasetManifest::parse(&text)
}

pub fn write_manifest(manifest: &DatasetManifest, path: impl AsRef<Path>) -> Result<()> {
    manifest.validate()?;
    let path = path.as_ref();
    fs::write(path, manifest.to_jsonl()).map_err(|e| Error::io(path, e))
}
