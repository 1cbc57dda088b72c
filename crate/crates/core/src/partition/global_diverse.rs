use crate::balance::LabelFilter;
use crate::error::Result;
use crate::submodular::{clipped_gain, greater, less, pick};
use crate::types::{ConstraintSet, CoverageState, Partition, PartitionKind, SimilarityMatrix, Strategy};

use super::{admits, charge, Pool};

/// Repeatedly gives the least-covered block the remaining item with the
/// largest gain against that block's own coverage. Blocks keep separate
/// coverage; disjointness comes from the shared pool.
pub fn partition_global_diverse(s: &SimilarityMatrix, cons: &ConstraintSet) -> Result<Partition> {
    global_diverse(s, cons, None)
}

/// Balanced variant: blocks are capped at `ceil(k/B)` and may only take
/// items their label quotas admit. A block without admissible candidates is
/// saturated and the next least-covered block is served instead.
pub fn partition_global_diverse_balanced(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    filter: &mut LabelFilter<'_>,
) -> Result<Partition> {
    global_diverse(s, cons, Some(filter))
}

fn global_diverse(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    mut filter: Option<&mut LabelFilter<'_>>,
) -> Result<Partition> {
    cons.check(s.len())?;
    let n = s.len();
    let nb = cons.blocks;
    let mut pool = Pool::full(n);
    let mut covs = vec![CoverageState::empty(n); nb];
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nb];
    let mut saturated = vec![false; nb];
    let mut selected = 0;

    while selected < cons.k && !pool.is_empty() {
        let Some((b, _)) = pick(
            (0..nb).filter(|&b| !saturated[b]).map(|b| (b, covs[b].value())),
            less,
        ) else {
            break;
        };
        let best = pick(
            pool.iter()
                .filter(|&i| admits(&filter, b, i))
                .map(|i| (i, clipped_gain(s.row(i), covs[b].best_sim()))),
            greater,
        );
        let Some((i, _)) = best else {
            saturated[b] = true;
            continue;
        };
        charge(&mut filter, b, i);
        covs[b].insert(s, i)?;
        blocks[b].push(i);
        pool.remove(i);
        selected += 1;
    }

    let capacity = filter.as_ref().map(|_| cons.capacity(Strategy::GlobalDiverse));
    if let Some(f) = filter.as_ref() {
        // the unconstrained loop spreads k over the blocks as evenly as the
        // cap allows; anything short of k means some quota ran dry
        if selected < cons.k {
            let targets = even_targets(cons.k, nb, &blocks);
            f.check_filled(&blocks, &targets)?;
        }
    }
    Ok(Partition {
        blocks,
        kind: PartitionKind::Strategy(Strategy::GlobalDiverse),
        scores: None,
        capacity,
    })
}

/// Sizes `k` split over `nb` blocks, the larger shares going to the blocks
/// that fell shortest so a short block is always flagged.
fn even_targets(k: usize, nb: usize, blocks: &[Vec<usize>]) -> Vec<usize> {
    let base = k / nb;
    let extra = k % nb;
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by_key(|&b| blocks[b].len());
    let mut targets = vec![base; nb];
    for &b in order.iter().take(extra) {
        targets[b] += 1;
    }
    targets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::greedy;

    /// Literal step-by-step transcription of the loop, recomputing every
    /// coverage from the block contents.
    fn reference(s: &SimilarityMatrix, k: usize, nb: usize) -> Vec<Vec<usize>> {
        let n = s.len();
        let mut blocks: Vec<Vec<usize>> = vec![vec![]; nb];
        let mut remaining: Vec<usize> = (0..n).collect();
        let sim = |blk: &Vec<usize>, j: usize| blk.iter().map(|&i| s.get(i, j)).fold(0.0, f64::max);
        while blocks.iter().map(Vec::len).sum::<usize>() < k && !remaining.is_empty() {
            let scores: Vec<f64> = blocks.iter().map(|b| (0..n).map(|j| sim(b, j)).sum()).collect();
            let mut bstar = 0;
            for b in 1..nb {
                if less(scores[b], scores[bstar]) {
                    bstar = b;
                }
            }
            let gain = |i: usize| -> f64 {
                (0..n)
                    .map(|j| (s.get(i, j) - sim(&blocks[bstar], j)).max(0.0))
                    .sum()
            };
            let mut istar = remaining[0];
            for &i in &remaining[1..] {
                if greater(gain(i), gain(istar)) {
                    istar = i;
                }
            }
            blocks[bstar].push(istar);
            remaining.retain(|&i| i != istar);
        }
        blocks
    }

    #[test]
    fn identity_alternates_blocks() {
        let s = SimilarityMatrix::identity(4);
        let p = partition_global_diverse(&s, &ConstraintSet::new(4, 2)).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.blocks, reference(&s, 4, 2));
    }

    #[test]
    fn single_block_is_plain_greedy() {
        let s = SimilarityMatrix::from_rows(vec![
            vec![1.0, 0.9, 0.0, 0.2],
            vec![0.9, 1.0, 0.1, 0.0],
            vec![0.0, 0.1, 1.0, 0.5],
            vec![0.2, 0.0, 0.5, 1.0],
        ])
        .unwrap();
        let p = partition_global_diverse(&s, &ConstraintSet::new(3, 1)).unwrap();
        assert_eq!(p.blocks[0], greedy(&s, 3).unwrap());
    }

    #[test]
    fn duplicates_split_across_blocks() {
        let s = SimilarityMatrix::from_rows(vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let p = partition_global_diverse(&s, &ConstraintSet::new(2, 2)).unwrap();
        assert_eq!(p.blocks, vec![vec![0], vec![1]]);
        assert_eq!(p.blocks, reference(&s, 2, 2));
    }

    #[test]
    fn matches_reference_on_small_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(3..9);
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i..n {
                    let v: f64 = rng.gen_range(-0.3..1.0);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let s = SimilarityMatrix::from_rows(rows).unwrap();
            let k = rng.gen_range(1..=n);
            let nb = rng.gen_range(1..=k);
            let p = partition_global_diverse(&s, &ConstraintSet::new(k, nb)).unwrap();
            assert_eq!(p.blocks, reference(&s, k, nb));
        }
    }
}
