//! CSV and JSON writers for solutions, simulations and sweeps.
//!
//! Floats are written in Rust's shortest round-trip form so that output is
//! byte-identical across runs.

use crate::equilibrium::EquilibriumSolution;
use crate::error::Result;
use crate::experiments::SweepPoint;
use crate::graph::LaborFlowNetwork;
use crate::params::EconomyParams;
use crate::sim::SimResult;
use crate::steady_state::SteadyStateSolution;
use serde::Serialize;
use std::io::Write;

/// Per-firm steady state: `firm,k,h,L,U,A,O,u,t_u`, followed by `w,ell,profit`
/// when an equilibrium is given.
pub fn write_solution_csv<W: Write>(
    net: &LaborFlowNetwork,
    steady: &SteadyStateSolution,
    eq: Option<&EquilibriumSolution>,
    mut out: W,
) -> Result<()> {
    write!(out, "firm,k,h,L,U,A,O,u,t_u")?;
    if eq.is_some() {
        write!(out, ",w,ell,profit")?;
    }
    writeln!(out)?;
    for i in 0..steady.n() {
        write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            i,
            net.degree(i),
            steady.h[i],
            steady.employment[i],
            steady.unemployment[i],
            steady.applications[i],
            steady.outflows[i],
            steady.unemployment_rate[i],
            steady.duration[i]
        )?;
        if let Some(eq) = eq {
            write!(out, ",{},{},{}", eq.w_star[i], eq.ell[i], eq.profit[i])?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Time-averaged firm stocks from a simulation, with batch-means standard errors.
pub fn write_sim_csv<W: Write>(result: &SimResult, mut out: W) -> Result<()> {
    writeln!(out, "firm,mean_L,mean_U,mean_A,mean_O,se_L,se_U,se_A,se_O")?;
    for i in 0..result.n() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            i,
            result.mean_l[i],
            result.mean_u[i],
            result.mean_a[i],
            result.mean_o[i],
            result.se_l[i],
            result.se_u[i],
            result.se_a[i],
            result.se_o[i]
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Aggregate unemployment rate per recorded period.
pub fn write_u_series_csv<W: Write>(result: &SimResult, mut out: W) -> Result<()> {
    writeln!(out, "period,u")?;
    for (t, u) in result.u_series.iter().enumerate() {
        writeln!(out, "{},{}", result.burnin + t, u)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], mut out: W) -> Result<()> {
    writeln!(out, "topology,seed,c,h_bar,u_agg")?;
    for p in points {
        writeln!(out, "{},{},{},{},{}", p.topology, p.seed, p.c, p.h_bar, p.u_agg)?;
    }
    out.flush()?;
    Ok(())
}

/// Scalar companion to a solution CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionSummary {
    pub varphi: f64,
    pub u_agg: f64,
    pub total_employment: f64,
    pub total_unemployment: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corner_count: Option<usize>,
    pub params: EconomyParams,
}

impl SolutionSummary {
    pub fn new(steady: &SteadyStateSolution, eq: Option<&EquilibriumSolution>, params: &EconomyParams) -> Self {
        Self {
            varphi: steady.varphi,
            u_agg: steady.u_agg,
            total_employment: steady.total_employment(),
            total_unemployment: steady.total_unemployment(),
            iterations: eq.map(|e| e.iterations),
            residual: eq.map(|e| e.residual),
            corner_count: eq.map(|e| e.corner_count),
            params: *params,
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady_state::{steady_state, HiringVector};

    #[test]
    fn solution_csv_layout() {
        let net = LaborFlowNetwork::from_edges(2, &[(0, 1)]).unwrap();
        let p = EconomyParams::stylized();
        let s = steady_state(&net, &HiringVector::uniform(2, 0.5).unwrap(), &p).unwrap();
        let mut buf = Vec::new();
        write_solution_csv(&net, &s, None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "firm,k,h,L,U,A,O,u,t_u");
        assert!(lines[1].starts_with("0,1,0.5,"));
        assert_eq!(lines[2].split(',').count(), 9);
    }

    #[test]
    fn summary_json_echoes_params() {
        let net = LaborFlowNetwork::from_edges(2, &[(0, 1)]).unwrap();
        let p = EconomyParams::stylized();
        let s = steady_state(&net, &HiringVector::uniform(2, 0.5).unwrap(), &p).unwrap();
        let mut buf = Vec::new();
        write_json(&SolutionSummary::new(&s, None, &p), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["params"]["H"], 4000);
        assert!(v.get("iterations").is_none());
    }
}
