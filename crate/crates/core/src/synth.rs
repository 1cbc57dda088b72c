//! Seeded synthetic data: Gaussian embeddings, Gaussian mixtures, and the
//! uniform-random partition baseline.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::types::{EmbeddingMatrix, Partition, PartitionKind};

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("item-{i}")).collect()
}

/// `n` rows of i.i.d. standard normal coordinates.
pub fn gaussian_embeddings(n: usize, d: usize, seed: u64) -> EmbeddingMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    EmbeddingMatrix::from_flat(data, d, ids(n), None).expect("gaussian rows are finite")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mixture {
    pub n: usize,
    pub d: usize,
    pub components: usize,
    /// Standard deviation of the component means around the origin.
    pub spread: f64,
    /// Standard deviation of points around their component mean.
    pub noise: f64,
}

impl Mixture {
    pub fn new(n: usize, d: usize, components: usize) -> Self {
        Self {
            n,
            d,
            components,
            spread: 0.5,
            noise: 1.0,
        }
    }

    /// Samples the mixture. Points are dealt to components round-robin and
    /// labelled `c<component>`; the returned vector holds each point's
    /// component.
    pub fn sample(&self, seed: u64) -> (EmbeddingMatrix, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let means: Vec<Vec<f64>> = (0..self.components)
            .map(|_| {
                (0..self.d)
                    .map(|_| self.spread * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let component: Vec<usize> = (0..self.n).map(|i| i % self.components).collect();
        let mut data = Vec::with_capacity(self.n * self.d);
        for &c in &component {
            for &m in &means[c] {
                data.push(m + self.noise * rng.sample::<f64, _>(StandardNormal));
            }
        }
        let labels = component.iter().map(|c| format!("c{c}")).collect();
        let emb = EmbeddingMatrix::from_flat(data, self.d, ids(self.n), Some(labels))
            .expect("mixture rows are finite");
        (emb, component)
    }
}

/// Uniformly random disjoint blocks with the given sizes drawn from `0..n`.
pub fn random_partition(n: usize, sizes: &[usize], seed: u64) -> Partition {
    let total: usize = sizes.iter().sum();
    assert!(total <= n, "random partition of {total} items from {n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = sample(&mut rng, n, total).into_vec();
    let mut it = picked.into_iter();
    let blocks = sizes.iter().map(|&sz| it.by_ref().take(sz).collect()).collect();
    Partition::new(blocks, PartitionKind::Random)
}

/// Block sizes for `k` items over `blocks` blocks, differing by at most one.
pub fn even_sizes(k: usize, blocks: usize) -> Vec<usize> {
    (0..blocks)
        .map(|b| k / blocks + usize::from(b < k % blocks))
        .collect()
}
