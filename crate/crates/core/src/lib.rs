//! Submodular partitioning of an embedding pool into context blocks.
//!
//! Given `N` embeddings, a budget `k` and a block count `B`, the
//! [`partition`] strategies select `k` items and split them into `B`
//! disjoint blocks, ranging from blocks that each summarize the whole pool
//! (global-diverse) to blocks built around one semantic region
//! (local-coherent). Everything is built on the facility-location function
//! in [`submodular`]; [`metrics`] scores partitions and [`oracle`] provides
//! exhaustive references for small instances.

pub mod balance;
pub mod clustering;
pub mod error;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod partition;
pub mod submodular;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use metrics::{compare, report, Comparison, PartitionReport};
pub use partition::{run_strategy, run_strategy_balanced};
pub use submodular::{eval_fl, greedy, greedy_select, marginal_gain, update_coverage};
pub use types::{
    build_similarity, validate_inputs, ConstraintSet, CoverageState, EmbeddingMatrix, Partition,
    PartitionKind, SimilarityMatrix, Strategy, StrategyConfig,
};
