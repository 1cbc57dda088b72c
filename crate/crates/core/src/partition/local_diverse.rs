use crate::balance::LabelFilter;
use crate::clustering::{kmeans, members};
use crate::error::{Error, Result};
use crate::submodular::{clipped_gain, greater, pick};
use crate::types::{
    ConstraintSet, CoverageState, EmbeddingMatrix, Partition, PartitionKind, SimilarityMatrix, Strategy,
};

use super::{admits, charge, Pool};

/// One block per cluster: block `b` is a greedy facility-location selection
/// among cluster `b`'s members, with gains measured over the cluster's own
/// columns. Each block takes `min(ceil(k/B), |cluster|)` items, capped by
/// what is left of `k`.
///
/// Clusters come from `cons.cluster_of` when present, otherwise from
/// k-means on `emb` with `B` clusters seeded by `seed`.
pub fn partition_local_diverse(
    s: &SimilarityMatrix,
    emb: &EmbeddingMatrix,
    cons: &ConstraintSet,
    seed: u64,
) -> Result<Partition> {
    local_diverse(s, &clusters_for(emb, cons, seed)?, cons, None)
}

pub fn partition_local_diverse_balanced(
    s: &SimilarityMatrix,
    emb: &EmbeddingMatrix,
    cons: &ConstraintSet,
    seed: u64,
    filter: &mut LabelFilter<'_>,
) -> Result<Partition> {
    local_diverse(s, &clusters_for(emb, cons, seed)?, cons, Some(filter))
}

fn clusters_for(emb: &EmbeddingMatrix, cons: &ConstraintSet, seed: u64) -> Result<Vec<usize>> {
    match &cons.cluster_of {
        Some(c) => Ok(c.clone()),
        None => Ok(kmeans(emb, cons.blocks, seed)?.cluster_of),
    }
}

fn local_diverse(
    s: &SimilarityMatrix,
    cluster_of: &[usize],
    cons: &ConstraintSet,
    mut filter: Option<&mut LabelFilter<'_>>,
) -> Result<Partition> {
    let cons_checked = ConstraintSet {
        cluster_of: Some(cluster_of.to_vec()),
        ..cons.clone()
    };
    cons_checked.check(s.len())?;
    let capacity = cons.capacity(Strategy::LocalDiverse);
    let mut blocks = Vec::with_capacity(cons.blocks);
    let mut targets = Vec::with_capacity(cons.blocks);
    let mut selected = 0;

    for b in 0..cons.blocks {
        let cluster = members(cluster_of, b);
        if cluster.is_empty() {
            return Err(Error::EmptyCluster(b));
        }
        let budget = capacity.min(cluster.len()).min(cons.k - selected);
        targets.push(budget);

        let local = s.restrict(&cluster);
        let mut pool = Pool::full(cluster.len());
        let mut cov = CoverageState::empty(cluster.len());
        let mut block = Vec::with_capacity(budget);
        while block.len() < budget {
            let best = pick(
                pool.iter()
                    .filter(|&p| admits(&filter, b, cluster[p]))
                    .map(|p| (p, clipped_gain(local.row(p), cov.best_sim()))),
                greater,
            );
            let Some((p, _)) = best else { break };
            charge(&mut filter, b, cluster[p]);
            cov.insert(&local, p)?;
            pool.remove(p);
            block.push(cluster[p]);
        }
        selected += block.len();
        blocks.push(block);
    }

    if let Some(f) = filter.as_ref() {
        f.check_filled(&blocks, &targets)?;
    }
    Ok(Partition {
        blocks,
        kind: PartitionKind::Strategy(Strategy::LocalDiverse),
        scores: None,
        capacity: Some(capacity),
    })
}
