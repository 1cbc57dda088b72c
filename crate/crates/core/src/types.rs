//! Shared domain types: the embedding pool, its similarity matrix, the
//! incremental coverage state of facility location, partitions, and the
//! constraints a partition must satisfy.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground set: `n` rows of `d`-dimensional embeddings with distinct ids
/// and optional class labels. Entries are held in 64-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
    ids: Vec<String>,
    labels: Option<Vec<String>>,
}

impl EmbeddingMatrix {
    pub fn new(rows: Vec<Vec<f64>>, ids: Vec<String>, labels: Option<Vec<String>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if ids.len() != rows.len() {
            return Err(Error::Parse {
                location: "ids".into(),
                message: format!("{} ids for {} rows", ids.len(), rows.len()),
            });
        }
        let d = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * d);
        for (row, id) in rows.iter().zip(&ids) {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    id: id.clone(),
                    expected: d,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, d, ids, labels)
    }

    /// Builds from a row-major buffer of `ids.len() * d` values.
    pub fn from_flat(
        data: Vec<f64>,
        d: usize,
        ids: Vec<String>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != n * d {
            return Err(Error::Parse {
                location: "embedding buffer".into(),
                message: format!("{} values for {n} rows of dimension {d}", data.len()),
            });
        }
        let emb = Self {
            data,
            n,
            d,
            ids,
            labels,
        };
        emb.check()?;
        Ok(emb)
    }

    fn check(&self) -> Result<()> {
        for (i, row) in self.data.chunks_exact(self.d).enumerate() {
            if let Some(column) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    id: self.ids[i].clone(),
                    column,
                });
            }
        }
        let mut seen = HashSet::with_capacity(self.n);
        for id in &self.ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(Error::LabelCount {
                    rows: self.n,
                    labels: labels.len(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Copy with every row scaled to unit L2 norm.
    pub fn normalized(&self) -> Result<Self> {
        let mut data = self.data.clone();
        for (i, row) in data.chunks_exact_mut(self.d).enumerate() {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroNorm(self.ids[i].clone()));
            }
            row.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(Self { data, ..self.clone() })
    }

    /// Reorders the rows so that new row `r` is old row `order[r]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for &i in order {
            data.extend_from_slice(self.row(i));
        }
        Self {
            data,
            n: self.n,
            d: self.d,
            ids: order.iter().map(|&i| self.ids[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| order.iter().map(|&i| l[i].clone()).collect()),
        }
    }
}

/// Dense `n x n` similarity matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    entries: Vec<f64>,
    n: usize,
}

impl SimilarityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    cols: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFiniteSimilarity(r, c));
            }
            entries.extend(row);
        }
        Ok(Self { entries, n })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { entries, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.entries[i * self.n..(i + 1) * self.n]
    }

    /// The principal submatrix on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let n = indices.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in indices {
            entries.extend(indices.iter().map(|&j| self.get(i, j)));
        }
        Self { entries, n }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }
}

/// Computes `S = E E^T`, optionally after L2-normalizing each row.
///
/// Only the upper triangle is computed; the lower one is mirrored, so the
/// result is exactly symmetric.
pub fn build_similarity(emb: &EmbeddingMatrix, normalize: bool) -> Result<SimilarityMatrix> {
    let normalized;
    let emb = if normalize {
        normalized = emb.normalized()?;
        &normalized
    } else {
        emb
    };
    let n = emb.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let a = emb.row(i);
        for j in i..n {
            let dot: f64 = a.iter().zip(emb.row(j)).map(|(x, y)| x * y).sum();
            entries[i * n + j] = dot;
            entries[j * n + i] = dot;
        }
    }
    Ok(SimilarityMatrix { entries, n })
}

/// Incremental state of the facility-location function for one selection:
/// `best_sim[j]` is the best similarity any selected item achieves to `j`,
/// floored at zero (the value for an empty selection).
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageState {
    pub(crate) best_sim: Vec<f64>,
    pub(crate) selected: Vec<usize>,
}

impl CoverageState {
    pub fn empty(n: usize) -> Self {
        Self {
            best_sim: vec![0.0; n],
            selected: Vec::new(),
        }
    }

    /// Coverage of `indices` recomputed from scratch.
    pub fn from_selection(s: &SimilarityMatrix, indices: &[usize]) -> Result<Self> {
        let mut cov = Self::empty(s.len());
        for &i in indices {
            cov.insert(s, i)?;
        }
        Ok(cov)
    }

    pub fn best_sim(&self) -> &[f64] {
        &self.best_sim
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn contains(&self, i: usize) -> bool {
        self.selected.contains(&i)
    }

    /// `f` of the selection: the summed coverage.
    pub fn value(&self) -> f64 {
        self.best_sim.iter().sum()
    }

    /// In-place form of [`crate::submodular::update_coverage`].
    pub fn insert(&mut self, s: &SimilarityMatrix, i: usize) -> Result<()> {
        s.check_index(i)?;
        if self.contains(i) {
            return Err(Error::AlreadySelected(i));
        }
        self.absorb_row(s.row(i));
        self.selected.push(i);
        Ok(())
    }

    pub(crate) fn absorb_row(&mut self, row: &[f64]) {
        for (b, &x) in self.best_sim.iter_mut().zip(row) {
            if x > *b {
                *b = x;
            }
        }
    }

    /// Elementwise maximum with another coverage over the same ground set.
    pub(crate) fn absorb(&mut self, other: &CoverageState) {
        self.absorb_row(&other.best_sim);
        self.selected.extend_from_slice(&other.selected);
    }
}

/// One of the four block-construction strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    GlobalDiverse,
    GlobalLocalDiverse,
    LocalDiverse,
    LocalCoherent,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::GlobalDiverse,
        Strategy::GlobalLocalDiverse,
        Strategy::LocalDiverse,
        Strategy::LocalCoherent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::GlobalDiverse => "global-diverse",
            Strategy::GlobalLocalDiverse => "global-local-diverse",
            Strategy::LocalDiverse => "local-diverse",
            Strategy::LocalCoherent => "local-coherent",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Where a partition came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    Strategy(Strategy),
    /// Seeded uniform-random baseline.
    Random,
    /// Exhaustive optimum.
    Oracle,
}

impl PartitionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionKind::Strategy(s) => s.as_str(),
            PartitionKind::Random => "random",
            PartitionKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(PartitionKind::Random),
            "oracle" => Ok(PartitionKind::Oracle),
            other => other.parse().map(PartitionKind::Strategy),
        }
    }
}

/// An ordered sequence of disjoint index blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
    pub kind: PartitionKind,
    /// Per-block facility-location values on the pristine similarity matrix.
    pub scores: Option<Vec<f64>>,
    /// The per-block size limit the producing strategy worked under, if any.
    pub capacity: Option<usize>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, kind: PartitionKind) -> Self {
        Self {
            blocks,
            kind,
            scores: None,
            capacity: None,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_selected(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn union(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Checks block count, index range and disjointness, plus the budget if given.
    pub fn validate(&self, n: usize, budget: Option<usize>) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let mut seen = vec![false; n];
        for &i in self.blocks.iter().flatten() {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::BlocksNotDisjoint(i));
            }
        }
        if let Some(k) = budget {
            let selected = self.total_selected();
            if selected > k {
                return Err(Error::OverBudget { selected, k });
            }
        }
        Ok(())
    }
}

/// Budget, block count and the optional label/cluster constraints.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSet {
    pub k: usize,
    pub blocks: usize,
    /// Per-block maximum count for each label.
    pub label_quotas: Option<BTreeMap<String, usize>>,
    /// Cluster id in `[0, blocks)` for every item.
    pub cluster_of: Option<Vec<usize>>,
}

impl ConstraintSet {
    pub fn new(k: usize, blocks: usize) -> Self {
        Self {
            k,
            blocks,
            ..Self::default()
        }
    }

    pub fn with_quotas(mut self, quotas: BTreeMap<String, usize>) -> Self {
        self.label_quotas = Some(quotas);
        self
    }

    pub fn with_clusters(mut self, cluster_of: Vec<usize>) -> Self {
        self.cluster_of = Some(cluster_of);
        self
    }

    /// Per-block capacity each strategy works under: `ceil(k/B)` for the
    /// sequential strategies, `floor(k/B)` for local-coherent. Global-diverse
    /// balances sizes through its min-score rule and only enforces
    /// `ceil(k/B)` when label quotas are active.
    pub fn capacity(&self, strategy: Strategy) -> usize {
        match strategy {
            Strategy::LocalCoherent => self.k / self.blocks,
            _ => self.k.div_ceil(self.blocks),
        }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if self.blocks == 0 {
            return Err(Error::NoBlocks);
        }
        if self.k == 0 {
            return Err(Error::ZeroBudget);
        }
        if self.blocks > self.k {
            return Err(Error::MoreBlocksThanBudget {
                blocks: self.blocks,
                k: self.k,
            });
        }
        if self.k > n {
            return Err(Error::BudgetExceedsGroundSet { k: self.k, n });
        }
        if let Some(clusters) = &self.cluster_of {
            if clusters.len() != n {
                return Err(Error::ClusterCount {
                    expected: n,
                    found: clusters.len(),
                });
            }
            if let Some(&id) = clusters.iter().find(|&&c| c >= self.blocks) {
                return Err(Error::ClusterOutOfRange {
                    id,
                    blocks: self.blocks,
                });
            }
        }
        Ok(())
    }
}

/// Strategy selection plus the knobs shared by every run. Ties are always
/// broken towards the lowest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    /// Seeds clustering initialization; the partitioners are seed-free.
    pub seed: u64,
    /// L2-normalize rows before building the similarity matrix.
    pub normalize: bool,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            seed: 0,
            normalize: true,
        }
    }
}

/// Checks the embedding and constraint invariants together, returning the
/// inputs untouched on success.
pub fn validate_inputs<'a>(
    emb: &'a EmbeddingMatrix,
    cons: &'a ConstraintSet,
) -> Result<(&'a EmbeddingMatrix, &'a ConstraintSet)> {
    emb.check()?;
    cons.check(emb.len())?;
    Ok((emb, cons))
}
