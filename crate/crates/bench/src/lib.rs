//! Shared fixtures for the benchmarks.

use lfn_core::{EconomyParams, HiringVector, LaborFlowNetwork, Topology};

/// Preferential-attachment network with mean degree 6.
pub fn pareto(n: usize) -> LaborFlowNetwork {
    Topology::Pareto.generate(n, 6.0, 1).expect("benchmark network")
}

/// Stylized economy with the population scaled to 20 workers per firm.
pub fn economy(n: usize) -> EconomyParams {
    EconomyParams {
        population: 20 * n as u64,
        ..EconomyParams::stylized().with_c(0.5)
    }
}

/// Deterministic non-uniform policies in [0.2, 1].
pub fn policies(n: usize) -> HiringVector {
    HiringVector::new((0..n).map(|i| 0.2 + 0.8 * ((i * 7919) % 1000) as f64 / 999.0).collect())
        .expect("policies in range")
}
