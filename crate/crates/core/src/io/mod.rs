//! File formats: embeddings in (CSV, JSONL, binary) and partition documents out.
//!
//! The binary layout is the 7-byte magic `SUBCP1\0`, then `N` and `d` as
//! little-endian `u32`, then `N*d` little-endian IEEE-754 `f32` values in
//! row-major order, then a UTF-8 JSON trailer `{"ids":[...],"labels":[...]}`
//! (`labels` may be `null`) running to the end of the file.

mod embeddings;
mod partition_file;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use embeddings::{from_bin_bytes, load_csv, load_jsonl, parse_csv, parse_jsonl, to_bin_bytes};
pub use partition_file::{
    read_partition, render_json, write_partition, BlockDoc, ObjectivesDoc, PartitionDoc, Real, ReportDoc,
    SCHEMA_VERSION,
};

use crate::error::{Error, Result};
use crate::types::EmbeddingMatrix;

pub const BIN_MAGIC: &[u8; 7] = b"SUBCP1\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
    Bin,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default()
            .to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "ndjson" => Ok(Format::Jsonl),
            "bin" => Ok(Format::Bin),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            "bin" => Ok(Format::Bin),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
            Format::Bin => "bin",
        })
    }
}

pub fn load_embeddings(path: impl AsRef<Path>, format: Option<Format>) -> Result<EmbeddingMatrix> {
    let path = path.as_ref();
    let format = match format {
        Some(f) => f,
        None => Format::from_path(path)?,
    };
    match format {
        Format::Csv => load_csv(path),
        Format::Jsonl => load_jsonl(path),
        Format::Bin => {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            from_bin_bytes(&bytes)
        }
    }
}

pub fn save_embeddings(path: impl AsRef<Path>, format: Format, emb: &EmbeddingMatrix) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        Format::Csv => embeddings::to_csv_bytes(emb)?,
        Format::Jsonl => embeddings::to_jsonl_bytes(emb),
        Format::Bin => to_bin_bytes(emb),
    };
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Hex FNV-1a of the canonical binary serialization of `emb`.
pub fn fingerprint(emb: &EmbeddingMatrix) -> String {
    format!("{:016x}", fnv1a64(&to_bin_bytes(emb)))
}
