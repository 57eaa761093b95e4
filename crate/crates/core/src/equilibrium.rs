//! Firm optimization: the exogenous-wage hiring rule and the endogenous-wage
//! fixed point over heterogeneous hiring policies.
//!
//! With wages set by the inverse labor supply `w = y·ℓ/(b + ℓ)` and labor
//! demand `ℓ = h·A = h·φ·h̄·k`, the first-order condition of the firm becomes
//! the quadratic `2φc·φ·h̄·k·h² + 2φc·b·h − ψ·y·b = 0` in its own policy `h`,
//! where `φc` is the effective vacancy cost. [`best_response_sweep`] evaluates
//! its positive root for every firm from a frozen input vector (Jacobi), and
//! [`solve_equilibrium`] iterates the sweep to a fixed point.

use crate::error::{LfnError, Result};
use crate::graph::LaborFlowNetwork;
use crate::params::EconomyParams;
use crate::steady_state::{assemble, varphi_with_means, HiringVector, SteadyStateSolution};
use rayon::prelude::*;
use serde::Serialize;

/// Below this many firms a sweep runs on the calling thread.
const PAR_MIN_FIRMS: usize = 4096;

/// ψ(y − w) / (2φc) before clamping.
pub fn unclamped_hiring(params: &EconomyParams, w: f64) -> f64 {
    params.psi() * (params.y - w) / (2.0 * params.phi_cost())
}

/// Profit-maximizing hiring policy under a common exogenous wage, clamped to
/// `[0, 1]`. Independent of the firm's degree.
pub fn optimal_hiring_exogenous(params: &EconomyParams, w: f64) -> f64 {
    unclamped_hiring(params, w).clamp(0.0, 1.0)
}

/// Per-period profit of a firm with degree `k` hiring at `h` while its
/// neighbors average `h_bar`, given the normalizer `varphi` and wage `w`.
pub fn profit(params: &EconomyParams, w: f64, varphi: f64, k: f64, h: f64, h_bar: f64) -> f64 {
    let size = varphi / params.lambda * h * h_bar * k;
    let applications = varphi * h_bar * k;
    let (lambda, v, c, kappa) = (params.lambda, params.v, params.c, params.kappa);
    let surplus = params.y - w;
    (1.0 - lambda) * surplus * size + v * surplus * h * applications
        - v * c * size * h
        - (1.0 - v) * kappa * c * size * h
}

/// Optimal profit φψ³(y − w)³k / (8λφc²) of a firm whose neighbors also play
/// the interior optimum.
///
/// Returns [`LfnError::CornerSolution`] when the optimum is clamped at one; use
/// [`profit`] at `h = 1` there instead.
pub fn profit_at_optimum(k: f64, params: &EconomyParams, w: f64, varphi: f64) -> Result<f64> {
    let unclamped = unclamped_hiring(params, w);
    if unclamped > 1.0 {
        return Err(LfnError::CornerSolution { unclamped });
    }
    let phi_c = params.phi_cost();
    Ok(varphi * params.psi().powi(3) / (8.0 * params.lambda * phi_c * phi_c)
        * (params.y - w).powi(3)
        * k)
}

/// Inverse labor supply `y·ℓ / (b + ℓ)`.
pub fn supply_wage(ell: f64, params: &EconomyParams) -> f64 {
    params.y * ell / (params.b + ell)
}

/// Positive root of `2φc·a·h² + 2φc·b·h − ψyb = 0` with `a = φ·h̄·k`, clamped
/// to `[0, 1]`. Written in rationalized form to stay accurate when `a` is small.
#[inline]
fn endogenous_policy(params: &EconomyParams, a: f64) -> f64 {
    let phi_c = params.phi_cost();
    let b = params.b;
    let num = params.psi() * params.y * b;
    let root = num / (phi_c * b + (phi_c * phi_c * b * b + 2.0 * phi_c * a * num).sqrt());
    root.clamp(0.0, 1.0)
}

/// One simultaneous best-response update of every firm.
///
/// The normalizer and neighbor means are computed once from `h` and held fixed
/// for the whole sweep.
pub fn best_response_sweep(
    h: &HiringVector,
    net: &LaborFlowNetwork,
    params: &EconomyParams,
) -> Result<HiringVector> {
    params.validate()?;
    let h_bar = h.neighbor_means(net);
    let varphi = varphi_with_means(net, h.as_slice(), &h_bar, params)?;
    HiringVector::new(sweep_values(net, params, &h_bar, varphi))
}

fn sweep_values(net: &LaborFlowNetwork, params: &EconomyParams, h_bar: &[f64], varphi: f64) -> Vec<f64> {
    let policy = |i: usize| endogenous_policy(params, varphi * h_bar[i] * net.degree(i) as f64);
    if net.n() < PAR_MIN_FIRMS {
        (0..net.n()).map(policy).collect()
    } else {
        (0..net.n()).into_par_iter().with_min_len(1024).map(policy).collect()
    }
}

/// Closed-form equilibrium policy on a `k`-regular network of `n` firms.
/// `k` may be fractional.
pub fn regular_closed_form(params: &EconomyParams, k: f64, n: usize) -> f64 {
    let (b, y, lambda) = (params.b, params.y, params.lambda);
    let nn = n as f64;
    let pop = params.population_f64();
    let psi = params.psi();
    let phi_c = params.phi_cost();
    let theta = params.theta(k);
    let num = b * nn * (y * psi * theta - 2.0 * lambda * phi_c)
        + (b * b * nn * nn * (2.0 * lambda * phi_c + y * psi * theta).powi(2)
            + 8.0 * b * y * nn * pop * lambda * lambda * phi_c * psi * theta)
            .sqrt();
    let den = 4.0 * phi_c * theta * (b * nn + pop * lambda);
    (num / den).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Starting policy; uniform 0.5 when absent.
    pub init: Option<Vec<f64>>,
    /// Convergence threshold on sup|T(h) − h|.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial step α in `h ← (1 − α)h + αT(h)`.
    pub damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            init: None,
            tol: 1e-10,
            max_iter: 10_000,
            damping: 1.0,
        }
    }
}

const MIN_DAMPING: f64 = 1.0 / 16.0;
const STALL_LIMIT: usize = 10;

/// Equilibrium policies, wages and the induced steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSolution {
    pub h_star: Vec<f64>,
    pub w_star: Vec<f64>,
    /// Labor demand (hires per period).
    pub ell: Vec<f64>,
    pub profit: Vec<f64>,
    pub iterations: usize,
    /// sup|T(h*) − h*| at the returned policy.
    pub residual: f64,
    /// Firms hiring every applicant.
    pub corner_count: usize,
    pub steady: SteadyStateSolution,
}

/// Iterates [`best_response_sweep`] to a fixed point.
///
/// The step size halves (down to 1/16) whenever the residual has failed to
/// improve on its best value for ten consecutive sweeps.
pub fn solve_equilibrium(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    opts: &SolverOptions,
) -> Result<EquilibriumSolution> {
    params.validate()?;
    if !(opts.tol > 0.0) {
        return Err(LfnError::InvalidParameter {
            name: "tol",
            reason: format!("{} must be positive", opts.tol),
        });
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(LfnError::InvalidParameter {
            name: "damping",
            reason: format!("{} is not in (0, 1]", opts.damping),
        });
    }
    let mut h = match &opts.init {
        Some(init) => HiringVector::for_network(init.clone(), net)?.into_inner(),
        None => vec![0.5; net.n()],
    };
    let mut alpha = opts.damping;
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let h_bar: Vec<f64> = (0..net.n()).map(|i| net.neighbor_mean(i, &h)).collect();
        let varphi = varphi_with_means(net, &h, &h_bar, params)?;
        let next = sweep_values(net, params, &h_bar, varphi);
        residual = h
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual < opts.tol {
            return Ok(finish(net, params, h, h_bar, varphi, iter, residual));
        }
        if residual < best {
            best = residual;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_LIMIT && alpha > MIN_DAMPING {
                alpha = (alpha / 2.0).max(MIN_DAMPING);
                stalled = 0;
            }
        }
        for (x, t) in h.iter_mut().zip(&next) {
            *x = (1.0 - alpha) * *x + alpha * t;
        }
    }
    Err(LfnError::NoConvergence {
        iterations: opts.max_iter,
        residual,
        last: h,
    })
}

fn finish(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    h: Vec<f64>,
    h_bar: Vec<f64>,
    varphi: f64,
    iterations: usize,
    residual: f64,
) -> EquilibriumSolution {
    let steady = assemble(net, &h, h_bar, varphi, params);
    let n = net.n();
    let mut w_star = Vec::with_capacity(n);
    let mut ell = Vec::with_capacity(n);
    let mut profits = Vec::with_capacity(n);
    for (i, &hi) in h.iter().enumerate() {
        let demand = hi * steady.applications[i];
        let w = supply_wage(demand, params);
        let k = net.degree(i) as f64;
        profits.push(profit(params, w, varphi, k, hi, steady.h_bar[i]));
        w_star.push(w);
        ell.push(demand);
    }
    EquilibriumSolution {
        corner_count: h.iter().filter(|&&x| x >= 1.0).count(),
        h_star: h,
        w_star,
        ell,
        profit: profits,
        iterations,
        residual,
        steady,
    }
}

/// Steady state under a common exogenous wage `w`: every firm plays
/// [`optimal_hiring_exogenous`].
pub fn exogenous_equilibrium(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    w: f64,
) -> Result<EquilibriumSolution> {
    params.validate()?;
    if !(0.0..=params.y).contains(&w) {
        return Err(LfnError::InvalidParameter {
            name: "w",
            reason: format!("{w} is not in [0, y]"),
        });
    }
    let h_star = optimal_hiring_exogenous(params, w);
    let h = vec![h_star; net.n()];
    let h_bar: Vec<f64> = (0..net.n()).map(|i| net.neighbor_mean(i, &h)).collect();
    let varphi = varphi_with_means(net, &h, &h_bar, params)?;
    let steady = assemble(net, &h, h_bar, varphi, params);
    let ell: Vec<f64> = (0..net.n()).map(|i| h[i] * steady.applications[i]).collect();
    let profits = (0..net.n())
        .map(|i| profit(params, w, varphi, net.degree(i) as f64, h[i], steady.h_bar[i]))
        .collect();
    Ok(EquilibriumSolution {
        corner_count: if h_star >= 1.0 { net.n() } else { 0 },
        h_star: h,
        w_star: vec![w; net.n()],
        ell,
        profit: profits,
        iterations: 0,
        residual: 0.0,
        steady,
    })
}
