//! Comparative experiments across network topologies: Beveridge sweeps over
//! the vacancy cost, topology dominance at equal mean degree, and
//! cross-sectional statistics of an equilibrium.

use crate::equilibrium::{solve_equilibrium, EquilibriumSolution, SolverOptions};
use crate::error::{LfnError, Result};
use crate::graph::{degree_distribution, LaborFlowNetwork, Topology};
use crate::params::EconomyParams;
use crate::stats::{mean, pearson, spearman, std_dev};
use crate::steady_state::aggregate_unemployment;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// One point of a Beveridge curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub topology: String,
    pub seed: u64,
    pub c: f64,
    /// Mean equilibrium hiring policy; NaN if the solve failed.
    pub h_bar: f64,
    pub u_agg: f64,
    #[serde(skip)]
    pub converged: bool,
}

/// Equilibrium `(c, mean h*, u)` for every cost in `c_values`, each solve
/// warm-started from the previous converged policy.
///
/// A failed solve is recorded with NaN values and the sweep continues from a
/// cold start.
pub fn beveridge_sweep(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    c_values: &[f64],
    solver: &SolverOptions,
    topology: &str,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if let Some(&c) = c_values.iter().find(|&&c| !(c > 0.0 && c < 1.0)) {
        return Err(LfnError::InvalidParameter {
            name: "c",
            reason: format!("sweep value {c} is not in (0, 1)"),
        });
    }
    let mut warm: Option<Vec<f64>> = solver.init.clone();
    let mut points = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let opts = SolverOptions {
            init: warm.clone(),
            ..solver.clone()
        };
        match solve_equilibrium(net, &params.with_c(c), &opts) {
            Ok(sol) => {
                points.push(SweepPoint {
                    topology: topology.to_string(),
                    seed,
                    c,
                    h_bar: mean(&sol.h_star),
                    u_agg: sol.steady.u_agg,
                    converged: true,
                });
                warm = Some(sol.h_star);
            }
            Err(LfnError::NoConvergence { .. }) => {
                points.push(SweepPoint {
                    topology: topology.to_string(),
                    seed,
                    c,
                    h_bar: f64::NAN,
                    u_agg: f64::NAN,
                    converged: false,
                });
                warm = solver.init.clone();
            }
            Err(e) => return Err(e),
        }
    }
    Ok(points)
}

/// Evenly spaced costs from `c_min` to `c_max` inclusive.
pub fn cost_grid(c_min: f64, c_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![c_min],
        _ => (0..steps)
            .map(|i| c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Beveridge sweeps for each (topology, seed) cell at equal mean degree.
/// Cells run in parallel; output is ordered by topology, then seed, then cost.
pub fn topology_sweep(
    params: &EconomyParams,
    n: usize,
    mean_degree: f64,
    topologies: &[Topology],
    seeds: &[u64],
    c_values: &[f64],
    solver: &SolverOptions,
) -> Result<Vec<SweepPoint>> {
    let cells: Vec<(Topology, u64)> = topologies
        .iter()
        .flat_map(|&t| seeds.iter().map(move |&s| (t, s)))
        .collect();
    let results: Vec<Result<Vec<SweepPoint>>> = cells
        .par_iter()
        .map(|&(t, seed)| {
            let net = t.generate(n, mean_degree, seed)?;
            beveridge_sweep(&net, params, c_values, solver, t.as_str(), seed)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// How firms set wages in a dominance comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WageMode {
    /// Wages from the labor supply; heterogeneous policies from the fixed point.
    Endogenous,
    /// Common wage `w`; unemployment aggregated over the degree distribution.
    Exogenous(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceRow {
    pub seed: u64,
    pub u_regular: f64,
    pub u_binomial: f64,
    pub u_pareto: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub rows: Vec<DominanceRow>,
    /// Seed means, ordered regular, binomial, Pareto.
    pub mean: [f64; 3],
    /// Standard errors of the seed means.
    pub std_err: [f64; 3],
    /// Whether the seed means satisfy regular < binomial < Pareto.
    pub ordered: bool,
    /// Share of seeds with that strict ordering.
    pub ordered_fraction: f64,
}

fn unemployment_on(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    mode: WageMode,
    solver: &SolverOptions,
) -> Result<f64> {
    match mode {
        WageMode::Endogenous => Ok(solve_equilibrium(net, params, solver)?.steady.u_agg),
        WageMode::Exogenous(w) => {
            let h = crate::equilibrium::optimal_hiring_exogenous(params, w);
            aggregate_unemployment(&degree_distribution(net), h, params)
        }
    }
}

/// Unemployment on regular, binomial and Pareto networks with the same size and
/// mean degree, one triple per seed.
pub fn dominance_compare(
    params: &EconomyParams,
    n: usize,
    mean_degree: f64,
    seeds: &[u64],
    mode: WageMode,
    solver: &SolverOptions,
) -> Result<DominanceReport> {
    let rows = seeds
        .par_iter()
        .map(|&seed| -> Result<DominanceRow> {
            let mut u = [0.0; 3];
            for (slot, t) in u.iter_mut().zip(Topology::ALL) {
                let net = t.generate(n, mean_degree, seed)?;
                *slot = unemployment_on(&net, params, mode, solver)?;
            }
            Ok(DominanceRow {
                seed,
                u_regular: u[0],
                u_binomial: u[1],
                u_pareto: u[2],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let column = |f: fn(&DominanceRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let cols = [
        column(|r| r.u_regular),
        column(|r| r.u_binomial),
        column(|r| r.u_pareto),
    ];
    let m = [mean(&cols[0]), mean(&cols[1]), mean(&cols[2])];
    let se = |c: &[f64]| {
        if c.len() < 2 {
            f64::NAN
        } else {
            std_dev(c) / (c.len() as f64).sqrt()
        }
    };
    let ordered_count = rows
        .iter()
        .filter(|r| r.u_regular < r.u_binomial && r.u_binomial < r.u_pareto)
        .count();
    Ok(DominanceReport {
        mean: m,
        std_err: [se(&cols[0]), se(&cols[1]), se(&cols[2])],
        ordered: m[0] < m[1] && m[1] < m[2],
        ordered_fraction: ordered_count as f64 / rows.len().max(1) as f64,
        rows,
    })
}

/// Relative spread (max − min) / mean of a set of unemployment rates.
pub fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / mean(values)
}

/// Firm-level averages for one degree value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBin {
    pub k: usize,
    pub count: usize,
    pub mean_h: f64,
    pub mean_l: f64,
    pub mean_u: f64,
    pub mean_w: f64,
}

/// Cross-sectional statistics of an equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelStats {
    /// Distinct `(L, w)` pairs sorted by firm size.
    pub size_premium: Vec<(f64, f64)>,
    /// Per-firm `(h*, h̄*)` pairs.
    pub neighbor_policy: Vec<(f64, f64)>,
    /// Pearson correlation of own and neighbor-mean policy; `None` if either
    /// is constant.
    pub pearson_h_neighbors: Option<f64>,
    /// Spearman correlation of degree and policy; `None` if either is constant.
    pub spearman_k_h: Option<f64>,
    pub constant_degree: bool,
    pub constant_policy: bool,
    pub degree_bins: Vec<DegreeBin>,
}

pub fn panel_statistics(eq: &EquilibriumSolution, net: &LaborFlowNetwork) -> PanelStats {
    let n = net.n();
    let steady = &eq.steady;
    let mut premium: Vec<(f64, f64)> = (0..n).map(|i| (steady.employment[i], eq.w_star[i])).collect();
    premium.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    premium.dedup_by(|a, b| a.0 == b.0);

    let degrees: Vec<f64> = (0..n).map(|i| net.degree(i) as f64).collect();
    let constant = |x: &[f64]| x.iter().all(|&v| v == x[0]);

    let mut bins: BTreeMap<usize, (usize, f64, f64, f64, f64)> = BTreeMap::new();
    for i in 0..n {
        let e = bins.entry(net.degree(i)).or_default();
        e.0 += 1;
        e.1 += eq.h_star[i];
        e.2 += steady.employment[i];
        e.3 += steady.unemployment[i];
        e.4 += eq.w_star[i];
    }
    let degree_bins = bins
        .into_iter()
        .map(|(k, (count, h, l, u, w))| {
            let c = count as f64;
            DegreeBin {
                k,
                count,
                mean_h: h / c,
                mean_l: l / c,
                mean_u: u / c,
                mean_w: w / c,
            }
        })
        .collect();

    PanelStats {
        size_premium: premium,
        neighbor_policy: eq.h_star.iter().copied().zip(steady.h_bar.iter().copied()).collect(),
        pearson_h_neighbors: pearson(&eq.h_star, &steady.h_bar),
        spearman_k_h: spearman(&degrees, &eq.h_star),
        constant_degree: constant(&degrees),
        constant_policy: constant(&eq.h_star),
        degree_bins,
    }
}
