//! Exhaustive reference solvers for toy instances. Deliberately naive and
//! independent of the incremental machinery in [`crate::submodular`].

use crate::error::{Error, Result};
use crate::metrics::Objective;
use crate::submodular::greater;
use crate::types::{ConstraintSet, Partition, PartitionKind, SimilarityMatrix};

/// Upper bound on enumerated candidates (subsets or subset/assignment pairs).
pub const MAX_ENUMERATION: u128 = 1_000_000;
/// Upper bound on the ground-set size the oracle accepts.
pub const MAX_GROUND_SET: usize = 20;

/// Facility location straight from its definition, double loop over columns
/// then selected rows, with the empty selection worth 0.
pub fn fl_from_definition(s: &SimilarityMatrix, selection: &[usize]) -> f64 {
    let mut total = 0.0;
    for j in 0..s.len() {
        let mut best = 0.0f64;
        for &i in selection {
            if s.get(i, j) > best {
                best = s.get(i, j);
            }
        }
        total += best;
    }
    total
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn guard_ground_set(n: usize) -> Result<()> {
    if n > MAX_GROUND_SET {
        return Err(Error::OracleGroundSetTooLarge {
            n,
            limit: MAX_GROUND_SET,
        });
    }
    Ok(())
}

fn guard_count(count: u128) -> Result<()> {
    if count > MAX_ENUMERATION {
        return Err(Error::OracleTooLarge {
            count,
            limit: MAX_ENUMERATION,
        });
    }
    Ok(())
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Best `k`-subset by exhaustive search; ties go to the lexicographically
/// smallest subset.
pub fn brute_best_subset(s: &SimilarityMatrix, k: usize) -> Result<(Vec<usize>, f64)> {
    let n = s.len();
    guard_ground_set(n)?;
    if k > n {
        return Err(Error::BudgetExceedsGroundSet { k, n });
    }
    guard_count(binomial(n, k))?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for_each_subset(n, k, |sub| {
        let v = fl_from_definition(s, sub);
        if best.as_ref().is_none_or(|(_, b)| greater(v, *b)) {
            best = Some((sub.to_vec(), v));
        }
    });
    Ok(best.expect("at least the empty subset"))
}

/// Best assignment of `k` chosen items into `B` labeled blocks under
/// `objective`, searching every subset and every assignment. Blocks may be
/// left empty. Ties go to the first candidate in (subset, assignment)
/// lexicographic order.
pub fn brute_best_partition(
    s: &SimilarityMatrix,
    cons: &ConstraintSet,
    objective: Objective,
) -> Result<(Partition, f64)> {
    let n = s.len();
    guard_ground_set(n)?;
    cons.check(n)?;
    let (k, nb) = (cons.k, cons.blocks);
    let assignments = (nb as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    guard_count(binomial(n, k).saturating_mul(assignments))?;

    let mut best: Option<(Vec<Vec<usize>>, f64)> = None;
    let mut blocks: Vec<Vec<usize>> = vec![Vec::with_capacity(k); nb];
    let mut scores = vec![0.0; nb];
    for_each_subset(n, k, |sub| {
        let union_f = fl_from_definition(s, sub);
        let mut digits = vec![0usize; k];
        loop {
            blocks.iter_mut().for_each(Vec::clear);
            for (&item, &b) in sub.iter().zip(&digits) {
                blocks[b].push(item);
            }
            for (sc, blk) in scores.iter_mut().zip(&blocks) {
                *sc = fl_from_definition(s, blk);
            }
            let v = objective.from_scores(&scores, union_f);
            if best.as_ref().is_none_or(|(_, b)| objective.better(v, *b)) {
                best = Some((blocks.clone(), v));
            }
            // base-B counter, last digit fastest
            let Some(pos) = (0..k).rev().find(|&p| digits[p] + 1 < nb) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
    });
    let (blocks, value) = best.expect("k-subsets exist when k <= n");
    let mut p = Partition::new(blocks, PartitionKind::Oracle);
    p.scores = Some(p.blocks.iter().map(|b| fl_from_definition(s, b)).collect());
    Ok((p, value))
}
