//! Facility location and the plain greedy maximizer.
//!
//! `f(G) = sum_j max(0, max_{i in G} S[i][j])`, with `f({}) = 0`. The zero
//! floor is what makes the clipped gain `sum_j max(0, S[i][j] - best[j])`
//! the exact marginal gain even when similarities go negative.

use crate::error::{Error, Result};
use crate::types::{CoverageState, SimilarityMatrix};

/// Marginal gains over a candidate set, aligned with `indices`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector {
    pub indices: Vec<usize>,
    pub gains: Vec<f64>,
}

impl GainVector {
    /// Highest gain, lowest index on ties.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        pick(
            self.indices.iter().copied().zip(self.gains.iter().copied()),
            greater,
        )
    }

    /// Lowest gain, lowest index on ties.
    pub fn argmin(&self) -> Option<(usize, f64)> {
        pick(self.indices.iter().copied().zip(self.gains.iter().copied()), less)
    }
}

/// Relative slack under which two gains count as tied. Exact ties are
/// common (symmetric `S` makes `f(a | G)` and `f(b | G)` algebraically
/// equal) and rounding must not decide them.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// `a` beats `b` by more than the tie tolerance.
#[inline]
pub fn greater(a: f64, b: f64) -> bool {
    a > b + TIE_TOLERANCE * b.abs().max(1.0)
}

/// `a` is below `b` by more than the tie tolerance.
#[inline]
pub fn less(a: f64, b: f64) -> bool {
    a < b - TIE_TOLERANCE * b.abs().max(1.0)
}

/// Left-to-right scan keeping the first element that `better` prefers.
pub(crate) fn pick(
    items: impl Iterator<Item = (usize, f64)>,
    better: impl Fn(f64, f64) -> bool,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, g) in items {
        match best {
            Some((_, b)) if !better(g, b) => {}
            _ => best = Some((i, g)),
        }
    }
    best
}

pub fn eval_fl(s: &SimilarityMatrix, selection: &[usize]) -> Result<f64> {
    for &i in selection {
        s.check_index(i)?;
    }
    if selection.is_empty() {
        return Ok(0.0);
    }
    let mut best = vec![0.0f64; s.len()];
    for &i in selection {
        for (b, &x) in best.iter_mut().zip(s.row(i)) {
            *b = b.max(x);
        }
    }
    Ok(best.iter().sum())
}

/// Clipped gain of `row` against a coverage vector.
#[inline]
pub(crate) fn clipped_gain(row: &[f64], best: &[f64]) -> f64 {
    row.iter().zip(best).map(|(&x, &b)| (x - b).max(0.0)).sum()
}

pub fn marginal_gain(s: &SimilarityMatrix, cov: &CoverageState, i: usize) -> Result<f64> {
    s.check_index(i)?;
    if cov.contains(i) {
        return Err(Error::AlreadySelected(i));
    }
    Ok(clipped_gain(s.row(i), cov.best_sim()))
}

pub fn gains(s: &SimilarityMatrix, cov: &CoverageState, candidates: &[usize]) -> Result<GainVector> {
    let gains = candidates
        .iter()
        .map(|&i| marginal_gain(s, cov, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(GainVector {
        indices: candidates.to_vec(),
        gains,
    })
}

pub fn update_coverage(cov: &CoverageState, s: &SimilarityMatrix, i: usize) -> Result<CoverageState> {
    let mut next = cov.clone();
    next.insert(s, i)?;
    Ok(next)
}

/// Picks `k` of `candidates` by repeated argmax of marginal gain against
/// `init`, ties (see [`TIE_TOLERANCE`]) to the lowest index, and returns
/// them in selection order.
pub fn greedy_select(
    s: &SimilarityMatrix,
    k: usize,
    init: &CoverageState,
    candidates: &[usize],
) -> Result<Vec<usize>> {
    let mut pool = Vec::with_capacity(candidates.len());
    for &i in candidates {
        s.check_index(i)?;
        if init.contains(i) {
            return Err(Error::AlreadySelected(i));
        }
        pool.push(i);
    }
    pool.sort_unstable();
    pool.dedup();
    if k > pool.len() {
        return Err(Error::NotEnoughCandidates {
            k,
            available: pool.len(),
        });
    }
    let mut cov = init.clone();
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let (pos, _) = pick(
            pool.iter()
                .enumerate()
                .map(|(p, &i)| (p, clipped_gain(s.row(i), cov.best_sim()))),
            greater,
        )
        .expect("pool holds at least k candidates");
        let chosen = pool.remove(pos);
        cov.insert(s, chosen)?;
        order.push(chosen);
    }
    Ok(order)
}

/// `greedy_select` over the whole ground set from an empty selection.
pub fn greedy(s: &SimilarityMatrix, k: usize) -> Result<Vec<usize>> {
    let all: Vec<usize> = (0..s.len()).collect();
    greedy_select(s, k, &CoverageState::empty(s.len()), &all)
}
