//! Exact stationary distribution of a single worker's Markov chain, built by
//! enumerating every open/closed configuration of each firm's neighbors.
//!
//! This deliberately avoids the binomial collapse used by the closed forms in
//! [`crate::steady_state`] and serves as an independent check on them.

use crate::error::{LfnError, Result};
use crate::graph::LaborFlowNetwork;
use crate::params::EconomyParams;
use crate::steady_state::HiringVector;
use nalgebra::{DMatrix, DVector};

/// Largest degree the configuration enumeration accepts (2^k configurations
/// per firm).
pub const MAX_ORACLE_DEGREE: usize = 12;

/// Per-worker stationary probabilities `(p, q)`: employed at `i`, and
/// unemployed while associated to `i`.
pub fn exact_chain_oracle(
    net: &LaborFlowNetwork,
    h: &HiringVector,
    params: &EconomyParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    params.validate()?;
    let n = net.n();
    if h.len() != n {
        return Err(LfnError::InvalidHiring(format!("{} policies for {n} firms", h.len())));
    }
    if net.max_degree() > MAX_ORACLE_DEGREE {
        return Err(LfnError::DegreeTooLarge {
            found: net.max_degree(),
            max: MAX_ORACLE_DEGREE,
        });
    }
    let transition = transition_matrix(net, h.as_slice(), params);
    stationary(&transition).map(|pi| {
        let p = pi.rows(0, n).iter().copied().collect();
        let q = pi.rows(n, n).iter().copied().collect();
        (p, q)
    })
}

/// Row-stochastic transition matrix over states `0..n` (employed at i) and
/// `n..2n` (unemployed, associated to i).
pub fn transition_matrix(net: &LaborFlowNetwork, h: &[f64], params: &EconomyParams) -> DMatrix<f64> {
    let n = net.n();
    let (lambda, v) = (params.lambda, params.v);
    let mut t = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        t[(i, i)] += 1.0 - lambda;
        t[(i, n + i)] += lambda;
    }
    for j in 0..n {
        let nb = net.neighbors(j);
        let k = nb.len();
        for mask in 0u32..(1u32 << k) {
            let open = mask.count_ones() as usize;
            let prob = v.powi(open as i32) * (1.0 - v).powi((k - open) as i32);
            if open == 0 {
                t[(n + j, n + j)] += prob;
                continue;
            }
            let pick = prob / open as f64;
            for (bit, &r) in nb.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    t[(n + j, r)] += pick * h[r];
                    t[(n + j, n + j)] += pick * (1.0 - h[r]);
                }
            }
        }
    }
    t
}

/// Solves πT = π with Σπ = 1 by replacing one balance equation with the
/// normalization.
fn stationary(t: &DMatrix<f64>) -> Result<DVector<f64>> {
    let m = t.nrows();
    let mut a = t.transpose() - DMatrix::<f64>::identity(m, m);
    for col in 0..m {
        a[(m - 1, col)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(m);
    rhs[m - 1] = 1.0;
    let pi = a.lu().solve(&rhs).ok_or(LfnError::SingularSystem)?;
    if pi.iter().any(|x| !x.is_finite()) {
        return Err(LfnError::SingularSystem);
    }
    Ok(pi)
}
