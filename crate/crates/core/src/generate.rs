//! Seeded random digraphs and the per-trial seed splitting rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Arc, Digraph, VertexId};
use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `index` under master seed `seed`: the SplitMix64 output for
/// state `seed + (index + 1) * 0x9E3779B97F4A7C15` (wrapping arithmetic).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` vertices `v0..v{n-1}`; each ordered pair of distinct vertices is an
/// arc with probability `p`, drawn tail-major then head order from a
/// ChaCha8 stream seeded with `seed`. Loops are drawn in the same pass only
/// when `allow_loops`.
pub fn random_digraph(n: usize, p: f64, allow_loops: bool, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<VertexId> = (0..n).map(|i| VertexId::from(format!("v{i}"))).collect();
    let mut arcs = Vec::new();
    for (i, t) in labels.iter().enumerate() {
        for (j, h) in labels.iter().enumerate() {
            if (i != j || allow_loops) && rng.random_bool(p) {
                arcs.push(Arc {
                    tail: t.clone(),
                    head: h.clone(),
                });
            }
        }
    }
    Ok(Digraph::new(labels, arcs))
}
