use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use super::fingerprint;
use crate::error::{Error, Result};
use crate::metrics::{Objective, PartitionReport};
use crate::types::{EmbeddingMatrix, Partition, PartitionKind, StrategyConfig};

pub const SCHEMA_VERSION: &str = "1";

/// A real number written with 17 significant digits so documents are
/// byte-stable and parse back to the same `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let text = format!("{:.16e}", self.0);
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Real)
    }
}

fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

fn unreal(xs: &[Real]) -> Vec<f64> {
    xs.iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectivesDoc {
    #[serde(rename = "min-block")]
    pub min_block: Real,
    pub sum: Real,
    #[serde(rename = "sum-plus-union")]
    pub sum_plus_union: Real,
    #[serde(rename = "max-block")]
    pub max_block: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub strategy: String,
    pub per_block_f: Vec<Real>,
    pub min_f: Real,
    pub max_f: Real,
    pub sum_f: Real,
    pub union_f: Real,
    pub conditional_gains: Vec<Real>,
    pub intra_block_mean_sim: Vec<Real>,
    pub objectives: ObjectivesDoc,
}

impl From<&PartitionReport> for ReportDoc {
    fn from(r: &PartitionReport) -> Self {
        Self {
            strategy: r.strategy.clone(),
            per_block_f: reals(&r.per_block_f),
            min_f: Real(r.min_f),
            max_f: Real(r.max_f),
            sum_f: Real(r.sum_f),
            union_f: Real(r.union_f),
            conditional_gains: reals(&r.conditional_gains),
            intra_block_mean_sim: reals(&r.intra_block_mean_sim),
            objectives: ObjectivesDoc {
                min_block: Real(r.objective(Objective::MinBlock)),
                sum: Real(r.objective(Objective::Sum)),
                sum_plus_union: Real(r.objective(Objective::SumPlusUnion)),
                max_block: Real(r.objective(Objective::MaxBlock)),
            },
        }
    }
}

impl ReportDoc {
    pub fn to_report(&self) -> PartitionReport {
        PartitionReport {
            strategy: self.strategy.clone(),
            per_block_f: unreal(&self.per_block_f),
            min_f: self.min_f.0,
            max_f: self.max_f.0,
            sum_f: self.sum_f.0,
            union_f: self.union_f.0,
            conditional_gains: unreal(&self.conditional_gains),
            intra_block_mean_sim: unreal(&self.intra_block_mean_sim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub block_index: usize,
    pub ids: Vec<String>,
    pub indices: Vec<usize>,
    pub f_score: Real,
}

/// The partition document. Field order is the on-disk key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub schema_version: String,
    pub strategy: String,
    pub seed: u64,
    pub normalize: bool,
    pub k: usize,
    #[serde(rename = "B")]
    pub num_blocks: usize,
    pub blocks: Vec<BlockDoc>,
    pub report: ReportDoc,
    pub fingerprint: String,
    /// Per-block size limit the strategy worked under; `null` when uncapped.
    pub capacity: Option<usize>,
}

impl PartitionDoc {
    pub fn new(
        emb: &EmbeddingMatrix,
        p: &Partition,
        report: &PartitionReport,
        cfg: &StrategyConfig,
        k: usize,
    ) -> Result<Self> {
        p.validate(emb.len(), Some(k))?;
        let blocks = p
            .blocks
            .iter()
            .enumerate()
            .map(|(b, idx)| BlockDoc {
                block_index: b,
                ids: idx.iter().map(|&i| emb.ids()[i].clone()).collect(),
                indices: idx.clone(),
                f_score: Real(report.per_block_f[b]),
            })
            .collect();
        Ok(Self {
            schema_version: SCHEMA_VERSION.to_string(),
            strategy: p.kind.to_string(),
            seed: cfg.seed,
            normalize: cfg.normalize,
            k,
            num_blocks: p.num_blocks(),
            blocks,
            report: report.into(),
            fingerprint: fingerprint(emb),
            capacity: p.capacity,
        })
    }

    pub fn to_partition(&self) -> Result<Partition> {
        let kind: PartitionKind = self.strategy.parse()?;
        Ok(Partition {
            blocks: self.blocks.iter().map(|b| b.indices.clone()).collect(),
            kind,
            scores: Some(self.blocks.iter().map(|b| b.f_score.0).collect()),
            capacity: self.capacity,
        })
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn write_partition(path: impl AsRef<Path>, doc: &PartitionDoc) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_json(doc)).map_err(|e| Error::io(path, e))
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<PartitionDoc> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })
}
