//! Report files, the run manifest and stdout tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anomeval::{Protocol, ProtocolReport};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to rerun a command and get the same numbers.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub inputs: Vec<InputDigest>,
    pub version: String,
    pub timestamp: String,
}

/// One command invocation: collects the manifest and writes outputs.
pub struct Run {
    out: Option<PathBuf>,
    manifest: RunManifest,
}

impl Run {
    pub fn new(out: Option<PathBuf>, command: &str, config: &impl Serialize) -> Result<Self> {
        Ok(Run {
            out,
            manifest: RunManifest {
                command: command.to_string(),
                args: std::env::args().collect(),
                config: serde_json::to_value(config)?,
                seeds: Vec::new(),
                inputs: Vec::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: chrono::Utc::now().to_rfc3339(),
            },
        })
    }

    pub fn has_out_dir(&self) -> bool {
        self.out.is_some()
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seeds.push(seed);
    }

    /// Records the SHA-256 digest of an input file.
    pub fn input(&mut self, role: &str, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        self.manifest.inputs.push(InputDigest {
            role: role.to_string(),
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    /// Writes `name` into the output directory, if there is one.
    pub fn write(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(dir) => write_atomic(&dir.join(name), bytes),
            None => Ok(()),
        }
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_vec_pretty(value)?;
        text.push(b'\n');
        self.write(name, &text)
    }

    /// Writes the manifest last, so its presence marks a complete run.
    pub fn finish(self) -> Result<()> {
        self.write_json(MANIFEST_FILE, &self.manifest)
    }
}

/// Temp file in the target directory, then rename over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)?;
    Ok(())
}

/// Renders CSV through a writer callback into memory.
pub fn csv_bytes(fill: impl FnOnce(&mut Vec<u8>) -> anomeval::Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    fill(&mut buf)?;
    Ok(buf)
}

/// Flat report row shared by JSON and CSV output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolRow {
    pub protocol: Protocol,
    pub deprecated_protocol: bool,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub far: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub tp_e: Option<usize>,
    pub fp_e: Option<usize>,
    pub fn_e: Option<usize>,
}

impl From<&ProtocolReport> for ProtocolRow {
    fn from(r: &ProtocolReport) -> Self {
        ProtocolRow {
            protocol: r.protocol,
            deprecated_protocol: r.deprecated(),
            precision: r.precision,
            recall: r.recall,
            f1: r.f1,
            far: r.far,
            tp: r.counts.tp,
            fp: r.counts.fp,
            fn_: r.counts.fn_,
            tn: r.counts.tn,
            tp_e: r.events.map(|e| e.tp_e),
            fp_e: r.events.map(|e| e.fp_e),
            fn_e: r.events.map(|e| e.fn_e),
        }
    }
}

pub fn rows_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn print_protocol_table(rows: &[ProtocolRow]) {
    println!(
        "{:<14} {:>9} {:>9} {:>9} {:>9} {:>7} {:>7}",
        "protocol", "precision", "recall", "f1", "far", "tp_e", "fp_e"
    );
    for r in rows {
        println!(
            "{:<14} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>7} {:>7}{}",
            r.protocol.name(),
            r.precision,
            r.recall,
            r.f1,
            r.far,
            opt(r.tp_e),
            opt(r.fp_e),
            if r.deprecated_protocol {
                "  (deprecated)"
            } else {
                ""
            }
        );
    }
}
