#![allow(dead_code)]

use lfn_core::{EconomyParams, HiringVector, LaborFlowNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random recursive tree plus each remaining pair
/// with probability `extra`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, extra: f64) -> LaborFlowNetwork {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.random_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < extra {
                edges.push((i, j));
            }
        }
    }
    LaborFlowNetwork::from_edges(n, &edges).unwrap()
}

pub fn random_hiring<R: Rng>(rng: &mut R, n: usize, lo: f64) -> HiringVector {
    HiringVector::new((0..n).map(|_| rng.random_range(lo..=1.0)).collect()).unwrap()
}

pub fn random_params<R: Rng>(rng: &mut R) -> EconomyParams {
    EconomyParams {
        lambda: rng.random_range(0.05..=0.95),
        v: rng.random_range(0.05..=0.95),
        ..EconomyParams::stylized()
    }
}
