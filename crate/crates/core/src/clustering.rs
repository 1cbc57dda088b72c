//! k-means with kmeans++ seeding, used to form the clusters behind
//! local-diverse blocks when no assignment is supplied.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::EmbeddingMatrix;

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub cluster_of: Vec<usize>,
    /// `clusters x d`, row-major.
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after every centroid update.
    pub inertia_history: Vec<f64>,
}

impl ClusterAssignment {
    pub fn num_clusters(&self) -> usize {
        self.centroids.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        members(&self.cluster_of, cluster)
    }
}

pub(crate) fn members(cluster_of: &[usize], cluster: usize) -> Vec<usize> {
    cluster_of
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == cluster)
        .map(|(i, _)| i)
        .collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared Euclidean inertia of an assignment.
pub fn inertia(emb: &EmbeddingMatrix, cluster_of: &[usize], centroids: &[Vec<f64>]) -> f64 {
    emb.rows()
        .zip(cluster_of)
        .map(|(x, &c)| sq_dist(x, &centroids[c]))
        .sum()
}

fn plus_plus_init(emb: &EmbeddingMatrix, clusters: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = emb.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![emb.row(first).to_vec()];
    let mut d2: Vec<f64> = emb.rows().map(|x| sq_dist(x, &centroids[0])).collect();
    while centroids.len() < clusters {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave acc a hair below target
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).expect("total > 0"))
        } else {
            (0..n).find(|&i| !chosen[i]).expect("clusters <= n")
        };
        chosen[next] = true;
        let c = emb.row(next).to_vec();
        for (w, x) in d2.iter_mut().zip(emb.rows()) {
            *w = w.min(sq_dist(x, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest(x: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(x, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// Moves the point farthest from its centroid (out of a cluster with more
/// than one member) into each empty cluster.
fn repair_empty(emb: &EmbeddingMatrix, cluster_of: &mut [usize], centroids: &[Vec<f64>]) {
    let clusters = centroids.len();
    loop {
        let mut sizes = vec![0usize; clusters];
        for &c in cluster_of.iter() {
            sizes[c] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, x) in emb.rows().enumerate() {
            let c = cluster_of[i];
            if sizes[c] < 2 {
                continue;
            }
            let d = sq_dist(x, &centroids[c]);
            if d > far_d {
                far = Some(i);
                far_d = d;
            }
        }
        cluster_of[far.expect("clusters <= n leaves a donor")] = empty;
    }
}

fn update_centroids(emb: &EmbeddingMatrix, cluster_of: &[usize], clusters: usize) -> Vec<Vec<f64>> {
    let d = emb.dim();
    let mut sums = vec![vec![0.0; d]; clusters];
    let mut counts = vec![0usize; clusters];
    for (x, &c) in emb.rows().zip(cluster_of) {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(x) {
            *s += v;
        }
    }
    for (s, &cnt) in sums.iter_mut().zip(&counts) {
        let cnt = cnt as f64;
        s.iter_mut().for_each(|v| *v /= cnt);
    }
    sums
}

/// Lloyd's algorithm with kmeans++ seeding. Stops when no assignment
/// changes or after [`MAX_ITERATIONS`]; ties go to the lowest cluster id.
pub fn kmeans(emb: &EmbeddingMatrix, clusters: usize, seed: u64) -> Result<ClusterAssignment> {
    let n = emb.len();
    if clusters > n {
        return Err(Error::TooManyClusters { clusters, n });
    }
    if clusters == 0 {
        return Err(Error::NoBlocks);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(emb, clusters, &mut rng);
    let mut cluster_of: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let mut next: Vec<usize> = emb.rows().map(|x| nearest(x, &centroids)).collect();
        repair_empty(emb, &mut next, &centroids);
        if next == cluster_of {
            break;
        }
        cluster_of = next;
        centroids = update_centroids(emb, &cluster_of, clusters);
        history.push(inertia(emb, &cluster_of, &centroids));
        iterations += 1;
    }
    Ok(ClusterAssignment {
        inertia: inertia(emb, &cluster_of, &centroids),
        cluster_of,
        centroids,
        iterations,
        inertia_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(rows: Vec<Vec<f64>>) -> EmbeddingMatrix {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        EmbeddingMatrix::new(rows, ids, None).unwrap()
    }

    fn pairs() -> EmbeddingMatrix {
        emb(vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.98, 0.05],
            vec![0.04, 0.99],
        ])
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let e = pairs();
        let a = kmeans(&e, 1, 7).unwrap();
        assert!(a.cluster_of.iter().all(|&c| c == 0));
        let mean_x = (1.0 + 0.0 + 0.98 + 0.04) / 4.0;
        assert!((a.centroids[0][0] - mean_x).abs() < 1e-12);
    }

    /// Minimum inertia over all 2-cluster assignments with both clusters used.
    fn exhaustive_min_inertia(e: &EmbeddingMatrix) -> f64 {
        let n = e.len();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) - 1 {
            let assign: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
            let cents = update_centroids(e, &assign, 2);
            best = best.min(inertia(e, &assign, &cents));
        }
        best
    }

    #[test]
    fn orthogonal_pairs_are_grouped() {
        let e = pairs();
        for seed in 0..20 {
            let a = kmeans(&e, 2, seed).unwrap();
            assert_eq!(a.cluster_of[0], a.cluster_of[2]);
            assert_eq!(a.cluster_of[1], a.cluster_of[3]);
            assert_ne!(a.cluster_of[0], a.cluster_of[1]);
            assert!((a.inertia - exhaustive_min_inertia(&e)).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_clusters_have_zero_inertia() {
        let e = pairs();
        let a = kmeans(&e, 4, 3).unwrap();
        let mut ids = a.cluster_of.clone();
        ids.sort();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        assert_eq!(a.inertia, 0.0);
    }

    #[test]
    fn duplicate_points_still_fill_every_cluster() {
        let e = emb(vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]]);
        let a = kmeans(&e, 3, 0).unwrap();
        for c in 0..3 {
            assert!(!a.members(c).is_empty());
        }
    }

    #[test]
    fn too_many_clusters() {
        assert!(matches!(
            kmeans(&pairs(), 5, 0),
            Err(Error::TooManyClusters { clusters: 5, n: 4 })
        ));
    }
}
