//! Shared fixtures for the criterion benchmarks.

use blocksel::synth::Mixture;
use blocksel::{build_similarity, EmbeddingMatrix, SimilarityMatrix};

/// A 4-component mixture of `n` points in 16 dimensions and its cosine
/// similarity matrix.
pub fn mixture_fixture(n: usize, seed: u64) -> (EmbeddingMatrix, SimilarityMatrix) {
    let (emb, _) = Mixture::new(n, 16, 4).sample(seed);
    let s = build_similarity(&emb, true).expect("mixture rows are non-zero");
    (emb, s)
}
