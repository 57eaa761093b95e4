//! Closed-form steady state of the on-network job search process for a given
//! vector of hiring policies.
//!
//! For firm `i` with degree `k`, own policy `h`, neighbor-mean policy `h̄` and
//! `θ = 1 − (1 − v)^k`, the steady-state stocks are
//!
//! ```text
//! L = (φ/λ)·h·h̄·k      employment
//! A = φ·h̄·k            applications per period
//! U = φ·h·k / θ        unemployed whose last employer was i
//! O = φ·h·h̄·k          unemployed leaving the pool of i per period
//! ```
//!
//! with the normalizer `φ` fixed by `Σ(L + U) = H`. All sums here run
//! sequentially in firm order so results are bit-for-bit reproducible.

use crate::error::{LfnError, Result};
use crate::graph::{DegreeDistribution, LaborFlowNetwork};
use crate::params::EconomyParams;
use serde::Serialize;

/// Per-firm hiring probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct HiringVector(Vec<f64>);

impl HiringVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, &h)) = values
            .iter()
            .enumerate()
            .find(|(_, &h)| !(0.0..=1.0).contains(&h))
        {
            return Err(LfnError::InvalidHiring(format!(
                "h[{i}] = {h} is outside [0, 1]"
            )));
        }
        Ok(Self(values))
    }

    /// Checks that the vector covers every firm of `net`.
    pub fn for_network(values: Vec<f64>, net: &LaborFlowNetwork) -> Result<Self> {
        if values.len() != net.n() {
            return Err(LfnError::InvalidHiring(format!(
                "{} policies for {} firms",
                values.len(),
                net.n()
            )));
        }
        Self::new(values)
    }

    pub fn uniform(n: usize, h: f64) -> Result<Self> {
        Self::new(vec![h; n])
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// h̄_Γi for every firm.
    pub fn neighbor_means(&self, net: &LaborFlowNetwork) -> Vec<f64> {
        (0..net.n()).map(|i| net.neighbor_mean(i, &self.0)).collect()
    }
}

impl std::ops::Index<usize> for HiringVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Steady-state stocks and flows, one entry per firm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyStateSolution {
    /// Normalizing constant φ = H·χ.
    pub varphi: f64,
    pub h: Vec<f64>,
    /// Neighbor-mean hiring policy h̄_Γi.
    pub h_bar: Vec<f64>,
    /// Per-worker probability of being employed at i.
    pub p: Vec<f64>,
    /// Per-worker probability of being unemployed and associated to i.
    pub q: Vec<f64>,
    pub employment: Vec<f64>,
    pub unemployment: Vec<f64>,
    pub applications: Vec<f64>,
    pub outflows: Vec<f64>,
    /// U / (U + L) per firm.
    pub unemployment_rate: Vec<f64>,
    /// Mean unemployment spell length of a worker last employed at i.
    pub duration: Vec<f64>,
    /// Aggregate unemployment ΣU / H.
    pub u_agg: f64,
}

impl SteadyStateSolution {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn total_employment(&self) -> f64 {
        self.employment.iter().sum()
    }

    pub fn total_unemployment(&self) -> f64 {
        self.unemployment.iter().sum()
    }
}

fn check_inputs(net: &LaborFlowNetwork, h: &HiringVector, params: &EconomyParams) -> Result<()> {
    params.validate()?;
    if h.len() != net.n() {
        return Err(LfnError::InvalidHiring(format!(
            "{} policies for {} firms",
            h.len(),
            net.n()
        )));
    }
    Ok(())
}

/// Normalizer φ = H / Σ_i h_i·h̄_i·k_i·[1/λ + 1/(h̄_i·θ_i)].
pub fn compute_varphi(net: &LaborFlowNetwork, h: &HiringVector, params: &EconomyParams) -> Result<f64> {
    check_inputs(net, h, params)?;
    let h_bar = h.neighbor_means(net);
    varphi_with_means(net, h.as_slice(), &h_bar, params)
}

pub(crate) fn varphi_with_means(
    net: &LaborFlowNetwork,
    h: &[f64],
    h_bar: &[f64],
    params: &EconomyParams,
) -> Result<f64> {
    let mut denom = 0.0;
    for i in 0..net.n() {
        if h[i] == 0.0 {
            continue;
        }
        if h_bar[i] == 0.0 {
            return Err(LfnError::DegenerateHiring(format!(
                "firm {i} hires (h = {}) but all of its neighbors have h = 0",
                h[i]
            )));
        }
        let k = net.degree(i) as f64;
        // h·h̄·k·[1/λ + 1/(h̄θ)] expanded to avoid dividing by h̄.
        denom += h[i] * k * (h_bar[i] / params.lambda + 1.0 / params.theta(k));
    }
    if denom == 0.0 {
        return Err(LfnError::DegenerateHiring(
            "every firm has a zero hiring policy".into(),
        ));
    }
    Ok(params.population_f64() / denom)
}

/// Full steady-state solution.
pub fn steady_state(
    net: &LaborFlowNetwork,
    h: &HiringVector,
    params: &EconomyParams,
) -> Result<SteadyStateSolution> {
    check_inputs(net, h, params)?;
    let h_bar = h.neighbor_means(net);
    let varphi = varphi_with_means(net, h.as_slice(), &h_bar, params)?;
    Ok(assemble(net, h.as_slice(), h_bar, varphi, params))
}

pub(crate) fn assemble(
    net: &LaborFlowNetwork,
    h: &[f64],
    h_bar: Vec<f64>,
    varphi: f64,
    params: &EconomyParams,
) -> SteadyStateSolution {
    let n = net.n();
    let pop = params.population_f64();
    let lambda = params.lambda;
    let mut sol = SteadyStateSolution {
        varphi,
        h: h.to_vec(),
        h_bar: Vec::new(),
        p: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        employment: Vec::with_capacity(n),
        unemployment: Vec::with_capacity(n),
        applications: Vec::with_capacity(n),
        outflows: Vec::with_capacity(n),
        unemployment_rate: Vec::with_capacity(n),
        duration: Vec::with_capacity(n),
        u_agg: 0.0,
    };
    for i in 0..n {
        let k = net.degree(i) as f64;
        let theta = params.theta(k);
        let applications = varphi * h_bar[i] * k;
        let outflows = h[i] * applications;
        let employment = outflows / lambda;
        let unemployment = varphi * h[i] * k / theta;
        sol.p.push(employment / pop);
        sol.q.push(unemployment / pop);
        sol.employment.push(employment);
        sol.unemployment.push(unemployment);
        sol.applications.push(applications);
        sol.outflows.push(outflows);
        // U/(U+L) simplifies to λ/(λ + h̄θ), defined even when h_i = 0.
        sol.unemployment_rate.push(lambda / (lambda + h_bar[i] * theta));
        sol.duration.push(1.0 / (h_bar[i] * theta));
    }
    sol.u_agg = sol.unemployment.iter().sum::<f64>() / pop;
    sol.h_bar = h_bar;
    sol
}

/// Unemployment rate λ / (λ + h*·θ(k)) of a firm with degree `k` in an economy
/// where every firm hires with probability `h_star`. `k` may be fractional.
pub fn firm_unemployment_rate(k: f64, h_star: f64, params: &EconomyParams) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(LfnError::InvalidDegree(k));
    }
    if !(h_star > 0.0 && h_star <= 1.0) {
        return Err(LfnError::InvalidHiring(format!(
            "h* = {h_star} is outside (0, 1]"
        )));
    }
    Ok(params.lambda / (params.lambda + h_star * params.theta(k)))
}

/// Aggregate rate Σ_k u_k·P(k) over a degree distribution at a common policy.
pub fn aggregate_unemployment(
    dist: &DegreeDistribution,
    h_star: f64,
    params: &EconomyParams,
) -> Result<f64> {
    let mut u = 0.0;
    for (&k, &p) in dist.support.iter().zip(&dist.mass) {
        u += p * firm_unemployment_rate(k as f64, h_star, params)?;
    }
    Ok(u)
}
