use crate::balance::LabelFilter;
use crate::error::Result;
use crate::submodular::{clipped_gain, greater, less, pick};
use crate::types::{ConstraintSet, CoverageState, Partition, PartitionKind, SimilarityMatrix, Strategy};

use super::{admits, charge, Pool};

/// Two phases. First `B` diverse centroids are seeded by greedy gain
/// against a shared coverage, one per block. Then each block in turn grows
/// to `floor(k/B)` items by taking the remaining item with the smallest
/// clipped gain against the block's coverage, i.e. the most redundant one.
///
/// Selection runs on a working copy of `s` whose chosen rows are zeroed.
pub fn partition_local_coherent(s: &SimilarityMatrix, cons: &ConstraintSet) -> Result<Partition> {
    local_coherent(s, cons, None)
}

pub fn partition_local_coherent_balanced(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    filter: &mut LabelFilter<'_>,
) -> Result<Partition> {
    local_coherent(s, cons, Some(filter))
}

fn local_coherent(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    mut filter: Option<&mut LabelFilter<'_>>,
) -> Result<Partition> {
    cons.check(s.len())?;
    let n = s.len();
    let per_block = cons.capacity(Strategy::LocalCoherent);
    let mut work = s.clone();
    let mut pool = Pool::full(n);
    let mut shared = CoverageState::empty(n);
    let mut covs = Vec::with_capacity(cons.blocks);
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(cons.blocks);

    for b in 0..cons.blocks {
        let seed = pick(
            pool.iter()
                .filter(|&i| admits(&filter, b, i))
                .map(|i| (i, clipped_gain(work.row(i), shared.best_sim()))),
            greater,
        );
        let mut cov = CoverageState::empty(n);
        let mut block = Vec::with_capacity(per_block);
        if let Some((i, _)) = seed {
            charge(&mut filter, b, i);
            shared.insert(&work, i)?;
            cov.insert(&work, i)?;
            pool.remove(i);
            block.push(i);
        }
        covs.push(cov);
        blocks.push(block);
    }

    for b in 0..cons.blocks {
        if blocks[b].is_empty() {
            continue;
        }
        while blocks[b].len() < per_block {
            let best = pick(
                pool.iter()
                    .filter(|&i| admits(&filter, b, i))
                    .map(|i| (i, clipped_gain(work.row(i), covs[b].best_sim()))),
                less,
            );
            let Some((i, _)) = best else { break };
            charge(&mut filter, b, i);
            covs[b].insert(&work, i)?;
            work.row_mut(i).fill(0.0);
            pool.remove(i);
            blocks[b].push(i);
        }
    }

    if let Some(f) = filter.as_ref() {
        f.check_filled(&blocks, &vec![per_block; cons.blocks])?;
    }
    Ok(Partition {
        blocks,
        kind: PartitionKind::Strategy(Strategy::LocalCoherent),
        scores: None,
        capacity: Some(per_block),
    })
}
