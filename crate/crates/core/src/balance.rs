//! Per-block label quotas and size caps, enforced as hard candidate filters
//! inside the selection loops.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::types::{ConstraintSet, Strategy};

#[derive(Debug, Clone, PartialEq, Eq)]
struct BlockQuota {
    remaining: BTreeMap<String, usize>,
    capacity: usize,
}

/// Remaining label counts and capacity for every block of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaState {
    blocks: Vec<BlockQuota>,
    enabled: bool,
}

impl QuotaState {
    /// A state that admits everything.
    pub fn disabled(blocks: usize) -> Self {
        Self {
            blocks: vec![
                BlockQuota {
                    remaining: BTreeMap::new(),
                    capacity: usize::MAX,
                };
                blocks
            ],
            enabled: false,
        }
    }

    /// The same quota map for every block. Fails if the quotas cannot fill
    /// a block to `capacity`.
    pub fn uniform(quotas: &BTreeMap<String, usize>, blocks: usize, capacity: usize) -> Result<Self> {
        let sum: usize = quotas.values().sum();
        if sum < capacity {
            return Err(Error::QuotaBelowCapacity { sum, capacity });
        }
        Ok(Self {
            blocks: vec![
                BlockQuota {
                    remaining: quotas.clone(),
                    capacity,
                };
                blocks
            ],
            enabled: true,
        })
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn remaining_capacity(&self, block: usize) -> usize {
        self.blocks[block].capacity
    }

    pub fn remaining(&self, block: usize, label: &str) -> Option<usize> {
        self.blocks[block].remaining.get(label).copied()
    }

    /// True iff `block` has capacity left and quota left for `label`.
    pub fn admissible(&self, block: usize, label: &str) -> Result<bool> {
        if !self.enabled {
            return Ok(true);
        }
        let q = &self.blocks[block];
        match q.remaining.get(label) {
            None => Err(Error::UnknownLabel(label.to_string())),
            Some(&left) => Ok(q.capacity > 0 && left > 0),
        }
    }

    /// Charges one placement of `label` to `block`.
    pub fn take(&mut self, block: usize, label: &str) -> Result<()> {
        if !self.admissible(block, label)? {
            // callers filter first; reaching this is a logic error upstream
            return Err(Error::InfeasibleQuota {
                block,
                label: label.to_string(),
                missing: 1,
            });
        }
        if self.enabled {
            let q = &mut self.blocks[block];
            q.capacity -= 1;
            *q.remaining.get_mut(label).expect("checked above") -= 1;
        }
        Ok(())
    }
}

/// Quota of `ceil(capacity / L)` per label, `L` the number of distinct
/// labels, with the strategy's per-block capacity.
pub fn default_quotas(labels: &[String], cons: &ConstraintSet, strategy: Strategy) -> QuotaState {
    let capacity = cons.capacity(strategy);
    let distinct: BTreeSet<&String> = labels.iter().collect();
    let per_label = capacity.div_ceil(distinct.len().max(1));
    let quotas = distinct.into_iter().map(|l| (l.clone(), per_label)).collect();
    QuotaState::uniform(&quotas, cons.blocks, capacity).expect("ceiling quotas always cover capacity")
}

/// Quotas bound to the item labels of a ground set; what the partitioners see.
#[derive(Debug, Clone)]
pub struct LabelFilter<'a> {
    state: QuotaState,
    labels: &'a [String],
}

impl<'a> LabelFilter<'a> {
    /// Fails with the first item label missing from the quota map.
    pub fn new(state: QuotaState, labels: &'a [String]) -> Result<Self> {
        if state.enabled {
            let known = &state.blocks[0].remaining;
            if let Some(l) = labels.iter().find(|l| !known.contains_key(*l)) {
                return Err(Error::UnknownLabel(l.clone()));
            }
        }
        Ok(Self { state, labels })
    }

    pub fn state(&self) -> &QuotaState {
        &self.state
    }

    pub(crate) fn admits(&self, block: usize, item: usize) -> bool {
        self.state
            .admissible(block, &self.labels[item])
            .expect("labels checked at construction")
    }

    pub(crate) fn take(&mut self, block: usize, item: usize) {
        self.state
            .take(block, &self.labels[item])
            .expect("caller filtered with admits");
    }

    /// Reports the first block left short of its target while a label quota
    /// was still open, i.e. the pool ran out of that label.
    pub(crate) fn check_filled(&self, blocks: &[Vec<usize>], targets: &[usize]) -> Result<()> {
        for (b, (block, &target)) in blocks.iter().zip(targets).enumerate() {
            if block.len() >= target {
                continue;
            }
            let label = self.state.blocks[b]
                .remaining
                .iter()
                .find(|(_, &left)| left > 0)
                .map(|(l, _)| l.clone())
                .unwrap_or_default();
            return Err(Error::InfeasibleQuota {
                block: b,
                label,
                missing: target - block.len(),
            });
        }
        Ok(())
    }
}
