//! On-disk cache of potentials: one canonical JSON file per potential plus a
//! `manifest.json` recording target, kind, cap, flex degree and a SHA-256
//! digest of each file. Writes go to a temporary file first and are renamed
//! into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use charnum::serial::{from_json, to_json};
use charnum::{Potential, PotentialKind, Target};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub file: String,
    pub target: String,
    pub kind: String,
    pub cap: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Manifest {
    engine: String,
    entries: Vec<Entry>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            engine: ENGINE_VERSION.to_string(),
            entries: Vec::new(),
        }
    }
}

/// Result of looking a potential up.
pub enum Lookup {
    Hit(Potential),
    Miss,
    Corrupt(String),
}

pub struct Cache {
    dir: PathBuf,
    manifest: Manifest,
}

pub fn file_name(target: Target, kind: PotentialKind, cap: u32, z: Option<u32>) -> String {
    match z {
        Some(z) => format!("{}-{}-z{z}-cap{cap}.json", target.id(), kind.as_str()),
        None => format!("{}-{}-cap{cap}.json", target.id(), kind.as_str()),
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    {
        let mut file =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
}

impl Cache {
    /// Opens (without creating) the cache in `dir`. A manifest written by a
    /// different engine version is treated as empty.
    pub fn open(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let manifest = if path.exists() {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let manifest: Manifest = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if manifest.engine == ENGINE_VERSION {
                manifest
            } else {
                Manifest::default()
            }
        } else {
            Manifest::default()
        };
        Ok(Cache {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.manifest.entries
    }

    fn find(
        &self,
        target: Target,
        kind: PotentialKind,
        cap: u32,
        z: Option<u32>,
    ) -> Option<&Entry> {
        self.manifest.entries.iter().find(|e| {
            e.target == target.id() && e.kind == kind.as_str() && e.cap == cap && e.z == z
        })
    }

    /// Largest cached cap for a target/kind/z.
    pub fn largest_cap(&self, target: Target, kind: PotentialKind, z: Option<u32>) -> Option<u32> {
        self.manifest
            .entries
            .iter()
            .filter(|e| e.target == target.id() && e.kind == kind.as_str() && e.z == z)
            .map(|e| e.cap)
            .max()
    }

    /// Reads and checks one manifest entry.
    pub fn load_entry(&self, entry: &Entry) -> Lookup {
        let path = self.dir.join(&entry.file);
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", entry.file)),
        };
        if digest(&bytes) != entry.digest {
            return Lookup::Corrupt(format!("{}: digest mismatch", entry.file));
        }
        let parsed = std::str::from_utf8(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|text| from_json(text).map_err(|e| e.to_string()));
        match parsed {
            Err(e) => Lookup::Corrupt(format!("{}: {e}", entry.file)),
            Ok(p) => {
                if p.target().id() != entry.target
                    || p.kind().as_str() != entry.kind
                    || p.cap() != entry.cap
                {
                    Lookup::Corrupt(format!("{}: header does not match manifest", entry.file))
                } else {
                    Lookup::Hit(p)
                }
            }
        }
    }

    pub fn lookup(&self, target: Target, kind: PotentialKind, cap: u32, z: Option<u32>) -> Lookup {
        match self.find(target, kind, cap, z) {
            None => Lookup::Miss,
            Some(entry) => self.load_entry(entry),
        }
    }

    /// Writes a potential and records it in the manifest.
    pub fn store(&mut self, p: &Potential, z: Option<u32>) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let file = file_name(p.target(), p.kind(), p.cap(), z);
        let text = to_json(p);
        write_atomic(&self.dir.join(&file), text.as_bytes())?;
        let entry = Entry {
            file: file.clone(),
            target: p.target().id().to_string(),
            kind: p.kind().as_str().to_string(),
            cap: p.cap(),
            z,
            digest: digest(text.as_bytes()),
        };
        self.manifest.entries.retain(|e| e.file != file);
        self.manifest.entries.push(entry);
        self.manifest.entries.sort_by(|a, b| a.file.cmp(&b.file));
        self.save_manifest()
    }

    fn save_manifest(&self) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        write_atomic(&self.dir.join(MANIFEST), text.as_bytes())
    }
}
