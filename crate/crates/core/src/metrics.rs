//! Partition scoring: per-block facility location, the four partitioning
//! objectives, and coverage/redundancy/coherence diagnostics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::submodular::{eval_fl, greater, less};
use crate::types::{Partition, SimilarityMatrix};

/// A partitioning objective together with its optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Maximize the smallest block value.
    MinBlock,
    /// Maximize the summed block values.
    Sum,
    /// Minimize summed block values plus the value of the union.
    SumPlusUnion,
    /// Minimize the largest block value.
    MaxBlock,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::MinBlock,
        Objective::Sum,
        Objective::SumPlusUnion,
        Objective::MaxBlock,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::MinBlock => "min-block",
            Objective::Sum => "sum",
            Objective::SumPlusUnion => "sum-plus-union",
            Objective::MaxBlock => "max-block",
        }
    }

    pub fn maximize(self) -> bool {
        matches!(self, Objective::MinBlock | Objective::Sum)
    }

    /// Is `a` better than `b` by more than the tie tolerance?
    pub fn better(self, a: f64, b: f64) -> bool {
        if self.maximize() {
            greater(a, b)
        } else {
            less(a, b)
        }
    }

    /// Objective value computed from already-evaluated block and union scores.
    pub fn from_scores(self, per_block: &[f64], union: f64) -> f64 {
        match self {
            Objective::MinBlock => per_block.iter().copied().fold(f64::INFINITY, f64::min),
            Objective::Sum => per_block.iter().sum(),
            Objective::SumPlusUnion => per_block.iter().sum::<f64>() + union,
            Objective::MaxBlock => per_block.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::UnknownObjective(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub strategy: String,
    pub per_block_f: Vec<f64>,
    pub min_f: f64,
    pub max_f: f64,
    pub sum_f: f64,
    /// `f` of the union of all blocks.
    pub union_f: f64,
    /// `f(A_i | union of the other blocks)`.
    pub conditional_gains: Vec<f64>,
    /// Mean off-diagonal similarity inside each block; 0 for blocks of size < 2.
    pub intra_block_mean_sim: Vec<f64>,
}

impl PartitionReport {
    pub fn objective(&self, objective: Objective) -> f64 {
        objective.from_scores(&self.per_block_f, self.union_f)
    }

    pub fn num_blocks(&self) -> usize {
        self.per_block_f.len()
    }

    pub fn mean_intra_block_sim(&self) -> f64 {
        mean(&self.intra_block_mean_sim)
    }

    pub fn sum_conditional_gains(&self) -> f64 {
        self.conditional_gains.iter().sum()
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn intra_mean(s: &SimilarityMatrix, block: &[usize]) -> f64 {
    if block.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for &i in block {
        for &j in block {
            if i != j {
                total += s.get(i, j);
            }
        }
    }
    total / (block.len() * (block.len() - 1)) as f64
}

pub fn report(s: &SimilarityMatrix, p: &Partition) -> Result<PartitionReport> {
    p.validate(s.len(), None)?;
    let per_block_f: Vec<f64> = p.blocks.iter().map(|b| eval_fl(s, b)).collect::<Result<_>>()?;
    let union = p.union();
    let union_f = eval_fl(s, &union)?;
    let conditional_gains = (0..p.num_blocks())
        .map(|b| {
            let rest: Vec<usize> = p
                .blocks
                .iter()
                .enumerate()
                .filter(|&(o, _)| o != b)
                .flat_map(|(_, blk)| blk.iter().copied())
                .collect();
            Ok(union_f - eval_fl(s, &rest)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionReport {
        strategy: p.kind.to_string(),
        min_f: Objective::MinBlock.from_scores(&per_block_f, union_f),
        max_f: Objective::MaxBlock.from_scores(&per_block_f, union_f),
        sum_f: per_block_f.iter().sum(),
        union_f,
        conditional_gains,
        intra_block_mean_sim: p.blocks.iter().map(|b| intra_mean(s, b)).collect(),
        per_block_f,
    })
}

/// Reports for several partitions plus, per objective, partition positions
/// ordered best first (stable on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub reports: Vec<PartitionReport>,
    pub rankings: Vec<(Objective, Vec<usize>)>,
}

pub fn compare(s: &SimilarityMatrix, ps: &[Partition]) -> Result<Comparison> {
    let reports = ps.iter().map(|p| report(s, p)).collect::<Result<Vec<_>>>()?;
    let rankings = Objective::ALL
        .into_iter()
        .map(|o| {
            let mut order: Vec<usize> = (0..reports.len()).collect();
            order.sort_by(|&a, &b| {
                let (va, vb) = (reports[a].objective(o), reports[b].objective(o));
                let ord = va.total_cmp(&vb);
                if o.maximize() {
                    ord.reverse()
                } else {
                    ord
                }
            });
            (o, order)
        })
        .collect();
    Ok(Comparison { reports, rankings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{PartitionKind, Strategy};

    fn part(blocks: Vec<Vec<usize>>) -> Partition {
        Partition::new(blocks, PartitionKind::Strategy(Strategy::GlobalDiverse))
    }

    #[test]
    fn identity_report() {
        let s = SimilarityMatrix::identity(4);
        let r = report(&s, &part(vec![vec![0, 2], vec![1, 3]])).unwrap();
        assert_eq!(r.per_block_f, vec![2.0, 2.0]);
        assert_eq!(r.union_f, 4.0);
        assert_eq!(r.conditional_gains, vec![2.0, 2.0]);
        assert_eq!(r.intra_block_mean_sim, vec![0.0, 0.0]);
        assert_eq!((r.min_f, r.max_f, r.sum_f), (2.0, 2.0, 4.0));
        assert_eq!(r.objective(Objective::SumPlusUnion), 8.0);
        assert_eq!(r.strategy, "global-diverse");
    }

    #[test]
    fn empty_partition_rejected() {
        let s = SimilarityMatrix::identity(4);
        assert!(matches!(report(&s, &part(vec![])), Err(Error::EmptyPartition)));
        assert!(matches!(
            report(&s, &part(vec![vec![4]])),
            Err(Error::IndexOutOfRange { index: 4, n: 4 })
        ));
    }

    #[test]
    fn intra_similarity_excludes_diagonal() {
        let s = SimilarityMatrix::from_rows(vec![
            vec![1.0, 0.5, 0.1],
            vec![0.5, 1.0, 0.3],
            vec![0.1, 0.3, 1.0],
        ])
        .unwrap();
        let r = report(&s, &part(vec![vec![0, 1, 2]])).unwrap();
        assert!((r.intra_block_mean_sim[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rankings_follow_direction() {
        let s = SimilarityMatrix::identity(4);
        let balanced = part(vec![vec![0, 1], vec![2, 3]]);
        let skewed = part(vec![vec![0, 1, 2], vec![3]]);
        let c = compare(&s, &[skewed.clone(), balanced.clone()]).unwrap();
        let rank = |o| c.rankings.iter().find(|(x, _)| *x == o).unwrap().1.clone();
        assert_eq!(rank(Objective::MinBlock), vec![1, 0]);
        assert_eq!(rank(Objective::MaxBlock), vec![1, 0]);
        assert_eq!(rank(Objective::Sum), vec![0, 1]);

        let single = compare(&s, std::slice::from_ref(&balanced)).unwrap();
        assert!(single.rankings.iter().all(|(_, r)| r == &vec![0]));
        assert_eq!(
            compare(&s, &[balanced.clone(), balanced]).unwrap().reports.len(),
            2
        );
    }

    #[test]
    fn objective_tags() {
        for o in Objective::ALL {
            assert_eq!(o.as_str().parse::<Objective>().unwrap(), o);
        }
        assert!("best".parse::<Objective>().is_err());
    }
}
