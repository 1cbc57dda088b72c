//! The four block-construction strategies, from globally diverse blocks to
//! locally coherent ones, and the dispatcher that runs them on embeddings.

mod global_diverse;
mod global_local;
mod local_coherent;
mod local_diverse;

pub use global_diverse::{partition_global_diverse, partition_global_diverse_balanced};
pub use global_local::{partition_global_local_diverse, partition_global_local_diverse_balanced};
pub use local_coherent::{partition_local_coherent, partition_local_coherent_balanced};
pub use local_diverse::{partition_local_diverse, partition_local_diverse_balanced};

use crate::balance::{default_quotas, LabelFilter, QuotaState};
use crate::error::{Error, Result};
use crate::submodular::eval_fl;
use crate::types::{
    build_similarity, validate_inputs, ConstraintSet, EmbeddingMatrix, Partition, SimilarityMatrix, Strategy,
    StrategyConfig,
};

/// The shared remaining-index set `R`, iterated in ascending order so that
/// first-wins scans break ties towards the lowest index.
#[derive(Debug, Clone)]
pub(crate) struct Pool {
    remaining: Vec<bool>,
    count: usize,
}

impl Pool {
    pub(crate) fn full(n: usize) -> Self {
        Self {
            remaining: vec![true; n],
            count: n,
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.remaining
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(i, _)| i)
    }

    pub(crate) fn remove(&mut self, i: usize) {
        debug_assert!(self.remaining[i]);
        self.remaining[i] = false;
        self.count -= 1;
    }
}

pub(crate) fn admits(filter: &Option<&mut LabelFilter<'_>>, block: usize, item: usize) -> bool {
    filter.as_ref().is_none_or(|f| f.admits(block, item))
}

pub(crate) fn charge(filter: &mut Option<&mut LabelFilter<'_>>, block: usize, item: usize) {
    if let Some(f) = filter.as_mut() {
        f.take(block, item);
    }
}

/// Per-block facility-location values on `s`.
pub fn block_scores(s: &SimilarityMatrix, blocks: &[Vec<usize>]) -> Result<Vec<f64>> {
    blocks.iter().map(|b| eval_fl(s, b)).collect()
}

/// Runs the configured strategy end to end: validation, similarity,
/// clustering for local-diverse, label quotas when configured, and block
/// scores on the pristine similarity matrix.
pub fn run_strategy(emb: &EmbeddingMatrix, cons: &ConstraintSet, cfg: &StrategyConfig) -> Result<Partition> {
    validate_inputs(emb, cons)?;
    let s = build_similarity(emb, cfg.normalize)?;
    let labels = match (&cons.label_quotas, emb.labels()) {
        (None, _) => None,
        (Some(_), None) => return Err(Error::MissingLabels),
        (Some(q), Some(labels)) => {
            let qs = QuotaState::uniform(q, cons.blocks, cons.capacity(cfg.strategy))?;
            Some(LabelFilter::new(qs, labels)?)
        }
    };
    run_on_similarity(&s, emb, cons, cfg, labels)
}

/// [`run_strategy`] with quotas derived from the labels by the ceiling rule.
pub fn run_strategy_balanced(
    emb: &EmbeddingMatrix,
    cons: &ConstraintSet,
    cfg: &StrategyConfig,
) -> Result<Partition> {
    validate_inputs(emb, cons)?;
    let labels = emb.labels().ok_or(Error::MissingLabels)?;
    let s = build_similarity(emb, cfg.normalize)?;
    let filter = LabelFilter::new(default_quotas(labels, cons, cfg.strategy), labels)?;
    run_on_similarity(&s, emb, cons, cfg, Some(filter))
}

fn run_on_similarity(
    s: &SimilarityMatrix,
    emb: &EmbeddingMatrix,
    cons: &ConstraintSet,
    cfg: &StrategyConfig,
    mut filter: Option<LabelFilter<'_>>,
) -> Result<Partition> {
    let mut partition = match (cfg.strategy, filter.as_mut()) {
        (Strategy::GlobalDiverse, None) => partition_global_diverse(s, cons)?,
        (Strategy::GlobalDiverse, Some(f)) => partition_global_diverse_balanced(s, cons, f)?,
        (Strategy::GlobalLocalDiverse, None) => partition_global_local_diverse(s, cons)?,
        (Strategy::GlobalLocalDiverse, Some(f)) => partition_global_local_diverse_balanced(s, cons, f)?,
        (Strategy::LocalCoherent, None) => partition_local_coherent(s, cons)?,
        (Strategy::LocalCoherent, Some(f)) => partition_local_coherent_balanced(s, cons, f)?,
        (Strategy::LocalDiverse, f) => {
            let points = if cfg.normalize {
                emb.normalized()?
            } else {
                emb.clone()
            };
            match f {
                None => partition_local_diverse(s, &points, cons, cfg.seed)?,
                Some(f) => partition_local_diverse_balanced(s, &points, cons, cfg.seed, f)?,
            }
        }
    };
    partition.scores = Some(block_scores(s, &partition.blocks)?);
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PartitionKind;

    fn identity_emb(n: usize) -> EmbeddingMatrix {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        EmbeddingMatrix::new(rows, (0..n).map(|i| format!("x{i}")).collect(), None).unwrap()
    }

    #[test]
    fn dispatch_attaches_scores_and_tag() {
        let p = run_strategy(
            &identity_emb(4),
            &ConstraintSet::new(4, 2),
            &StrategyConfig::new(Strategy::GlobalDiverse),
        )
        .unwrap();
        assert_eq!(p.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.scores, Some(vec![2.0, 2.0]));
        assert_eq!(p.kind, PartitionKind::Strategy(Strategy::GlobalDiverse));
    }

    #[test]
    fn dispatch_is_deterministic() {
        let e = identity_emb(6);
        let cons = ConstraintSet::new(4, 2);
        for st in Strategy::ALL {
            let cfg = StrategyConfig::new(st);
            assert_eq!(
                run_strategy(&e, &cons, &cfg).unwrap(),
                run_strategy(&e, &cons, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn quotas_without_labels_fail() {
        let cons = ConstraintSet::new(4, 2).with_quotas([("a".to_string(), 2)].into());
        let err = run_strategy(
            &identity_emb(4),
            &cons,
            &StrategyConfig::new(Strategy::GlobalDiverse),
        );
        assert!(matches!(err, Err(Error::MissingLabels)));
    }
}
