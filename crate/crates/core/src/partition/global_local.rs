use crate::balance::LabelFilter;
use crate::error::Result;
use crate::submodular::{clipped_gain, greater, pick};
use crate::types::{ConstraintSet, CoverageState, Partition, PartitionKind, SimilarityMatrix, Strategy};

use super::{admits, charge, Pool};

/// Fills blocks one after another. Each step takes the item maximizing
/// `gain_U(i) + gain_B(i)`: `gain_B` against the current block's coverage,
/// `gain_U` against the elementwise max of that and the coverage of every
/// completed block. A block closes at `ceil(k/B)` items; the total never
/// exceeds `k`, so trailing blocks may come out smaller.
pub fn partition_global_local_diverse(s: &SimilarityMatrix, cons: &ConstraintSet) -> Result<Partition> {
    global_local(s, cons, None)
}

pub fn partition_global_local_diverse_balanced(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    filter: &mut LabelFilter<'_>,
) -> Result<Partition> {
    global_local(s, cons, Some(filter))
}

fn global_local(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    mut filter: Option<&mut LabelFilter<'_>>,
) -> Result<Partition> {
    cons.check(s.len())?;
    let n = s.len();
    let capacity = cons.capacity(Strategy::GlobalLocalDiverse);
    let mut pool = Pool::full(n);
    let mut sim_a = CoverageState::empty(n);
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(cons.blocks);
    let mut targets = Vec::with_capacity(cons.blocks);
    let mut selected = 0;

    for b in 0..cons.blocks {
        let target = capacity.min(cons.k - selected);
        targets.push(target);
        let mut sim_b = CoverageState::empty(n);
        let mut block = Vec::with_capacity(target);
        let mut union = sim_a.best_sim().to_vec();
        while block.len() < target && !pool.is_empty() {
            let best = pick(
                pool.iter().filter(|&i| admits(&filter, b, i)).map(|i| {
                    let row = s.row(i);
                    (i, clipped_gain(row, &union) + clipped_gain(row, sim_b.best_sim()))
                }),
                greater,
            );
            let Some((i, _)) = best else { break };
            charge(&mut filter, b, i);
            sim_b.insert(s, i)?;
            for (u, &x) in union.iter_mut().zip(s.row(i)) {
                *u = u.max(x);
            }
            block.push(i);
            pool.remove(i);
        }
        selected += block.len();
        sim_a.absorb(&sim_b);
        blocks.push(block);
    }

    if let Some(f) = filter.as_ref() {
        f.check_filled(&blocks, &targets)?;
    }
    Ok(Partition {
        blocks,
        kind: PartitionKind::Strategy(Strategy::GlobalLocalDiverse),
        scores: None,
        capacity: Some(capacity),
    })
}
