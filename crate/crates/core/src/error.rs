use std::path::PathBuf;

/// Errors raised by validation, selection, and file handling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty ground set: at least one embedding row is required")]
    EmptyGroundSet,
    #[error("zero embedding dimension")]
    ZeroDimension,
    #[error("dimension mismatch: row `{id}` has {found} entries, expected {expected}")]
    DimensionMismatch {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry in row `{id}` at column {column}")]
    NonFinite { id: String, column: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("label count {labels} does not match row count {rows}")]
    LabelCount { rows: usize, labels: usize },
    #[error("budget exceeds ground set: k = {k} > N = {n}")]
    BudgetExceedsGroundSet { k: usize, n: usize },
    #[error("more blocks than budget: B = {blocks} > k = {k}")]
    MoreBlocksThanBudget { blocks: usize, k: usize },
    #[error("block count must be at least 1")]
    NoBlocks,
    #[error("budget k must be at least 1")]
    ZeroBudget,
    #[error("zero-norm row `{0}` cannot be normalized")]
    ZeroNorm(String),
    #[error("similarity matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("similarity matrix has a non-finite entry at ({0}, {1})")]
    NonFiniteSimilarity(usize, usize),
    #[error("index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} is already selected")]
    AlreadySelected(usize),
    #[error("cannot select {k} items from {available} candidates")]
    NotEnoughCandidates { k: usize, available: usize },
    #[error("blocks not disjoint: index {0} appears more than once")]
    BlocksNotDisjoint(usize),
    #[error("partition selects {selected} items, exceeding budget {k}")]
    OverBudget { selected: usize, k: usize },
    #[error("unknown strategy `{0}` (expected global-diverse, global-local-diverse, local-diverse or local-coherent)")]
    UnknownStrategy(String),
    #[error("unknown objective `{0}` (expected best-subset, min-block, sum, sum-plus-union or max-block)")]
    UnknownObjective(String),
    #[error("cluster assignment has {found} entries, expected {expected}")]
    ClusterCount { expected: usize, found: usize },
    #[error("cluster id {id} out of range for {blocks} clusters")]
    ClusterOutOfRange { id: usize, blocks: usize },
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("more clusters than points: {clusters} > {n}")]
    TooManyClusters { clusters: usize, n: usize },
    #[error("label balancing requires labels but the embeddings carry none")]
    MissingLabels,
    #[error("unknown label `{0}` under strict quotas")]
    UnknownLabel(String),
    #[error("label quotas sum to {sum} per block, below the per-block capacity {capacity}")]
    QuotaBelowCapacity { sum: usize, capacity: usize },
    #[error("infeasible quota: block {block} could not place label `{label}` ({missing} short) because the pool ran out")]
    InfeasibleQuota {
        block: usize,
        label: String,
        missing: usize,
    },
    #[error("oracle guard exceeded: {count} candidates exceeds the limit of {limit}")]
    OracleTooLarge { count: u128, limit: u128 },
    #[error("oracle guard exceeded: ground set of {n} exceeds the limit of {limit} items")]
    OracleGroundSetTooLarge { n: usize, limit: usize },
    #[error("partition has no blocks")]
    EmptyPartition,
    #[error("unknown format `{0}` (expected csv, jsonl or bin)")]
    UnknownFormat(String),
    #[error("bad magic bytes: not a blocksel binary embedding file")]
    BadMagic,
    #[error("truncated binary embedding file")]
    Truncated,
    #[error("non-numeric embedding entry `{value}` in row `{id}`")]
    NonNumeric { id: String, value: String },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the filesystem rather than of the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
