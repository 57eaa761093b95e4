//! Estimating the separation rate from firm panels, fitting the investment
//! probability to an observed unemployment rate, and the homogeneous-network
//! counterfactual.

use crate::equilibrium::{regular_closed_form, solve_equilibrium, SolverOptions};
use crate::error::{LfnError, Result};
use crate::graph::LaborFlowNetwork;
use crate::params::EconomyParams;
use crate::steady_state::firm_unemployment_rate;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One firm's observed mean size and mean outflow from its unemployment pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub firm: usize,
    #[serde(rename = "L")]
    pub size: f64,
    #[serde(rename = "O")]
    pub outflow: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FirmPanel {
    pub rows: Vec<PanelRow>,
}

impl FirmPanel {
    /// Builds a panel without validation.
    pub fn from_rows(rows: Vec<(usize, f64, f64)>) -> Self {
        Self {
            rows: rows
                .into_iter()
                .map(|(firm, size, outflow)| PanelRow {
                    firm,
                    size,
                    outflow,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() < 3 {
            return Err(LfnError::DegeneratePanel(format!(
                "need at least 3 rows, got {}",
                self.rows.len()
            )));
        }
        for r in &self.rows {
            if !(r.size >= 0.0 && r.size.is_finite()) || !(r.outflow >= 0.0 && r.outflow.is_finite()) {
                return Err(LfnError::DegeneratePanel(format!(
                    "firm {} has invalid values L={}, O={}",
                    r.firm, r.size, r.outflow
                )));
            }
        }
        Ok(())
    }

    /// Reads a CSV with header `firm,L,O`.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| LfnError::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["firm", "L", "O"] {
            return Err(LfnError::Parse {
                line: 1,
                reason: format!("expected header `firm,L,O`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<PanelRow>, _>>()?;
        let panel = Self { rows };
        panel.validate()?;
        Ok(panel)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Least-squares fit of `O = β·L` without an intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaFit {
    pub beta: f64,
    /// HC1 heteroskedasticity-robust standard error.
    pub se_robust: f64,
    /// Uncentered R², 1 − Σe²/ΣO².
    pub r2: f64,
}

pub fn estimate_lambda(panel: &FirmPanel) -> Result<LambdaFit> {
    panel.validate()?;
    let sxx: f64 = panel.rows.iter().map(|r| r.size * r.size).sum();
    if sxx == 0.0 {
        return Err(LfnError::DegeneratePanel("every firm has L = 0".into()));
    }
    let sxy: f64 = panel.rows.iter().map(|r| r.size * r.outflow).sum();
    let beta = sxy / sxx;
    let mut meat = 0.0;
    let mut sse = 0.0;
    let mut syy = 0.0;
    for r in &panel.rows {
        let e = r.outflow - beta * r.size;
        meat += r.size * r.size * e * e;
        sse += e * e;
        syy += r.outflow * r.outflow;
    }
    let n = panel.rows.len() as f64;
    let se_robust = (n / (n - 1.0) * meat).sqrt() / sxx;
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { f64::NAN };
    Ok(LambdaFit { beta, se_robust, r2 })
}

/// Converts an annual separation probability to the daily probability with the
/// same one-year survival: 1 − (1 − β)^(1/365).
pub fn to_daily_rate(beta_annual: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta_annual) {
        return Err(LfnError::OutOfRange {
            value: beta_annual,
            reason: "annual rate must be in [0, 1)".into(),
        });
    }
    Ok(-((-beta_annual).ln_1p() / 365.0).exp_m1())
}

/// Inverse of [`to_daily_rate`].
pub fn from_daily_rate(beta_daily: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta_daily) {
        return Err(LfnError::OutOfRange {
            value: beta_daily,
            reason: "daily rate must be in [0, 1)".into(),
        });
    }
    Ok(-((-beta_daily).ln_1p() * 365.0).exp_m1())
}

/// Investment probabilities probed before bisection.
const V_GRID: [f64; 21] = [
    1e-3, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8,
    0.85, 0.9, 0.95, 1.0,
];

/// Which root [`fit_v`] reports when the target is reached at several `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    #[default]
    Highest,
    Lowest,
    /// The root closest to the given `v`.
    Nearest(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Stop once |u(v) − target| falls below this.
    pub tol: f64,
    pub solver: SolverOptions,
    pub choice: RootChoice,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tol: 1e-5,
            solver: SolverOptions::default(),
            choice: RootChoice::Highest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VFit {
    pub v_hat: f64,
    pub u_achieved: f64,
    /// Every root found, ascending; more than one means `v` is not identified
    /// by the target alone.
    pub roots: Vec<f64>,
    pub evaluations: usize,
}

/// Aggregate equilibrium unemployment on `net` as a function of `v`.
pub fn equilibrium_unemployment(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    solver: &SolverOptions,
) -> Result<f64> {
    Ok(solve_equilibrium(net, params, solver)?.steady.u_agg)
}

/// Finds the investment probability whose equilibrium unemployment on `net`
/// matches `target_u`.
///
/// Unemployment need not be monotone in `v`: a higher `v` opens more firms but
/// also raises the vacancy cost, which lowers hiring. The model is evaluated on
/// a fixed grid, every grid interval straddling the target is bisected, and
/// `opts.choice` picks among the resulting roots.
pub fn fit_v(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    target_u: f64,
    opts: &FitOptions,
) -> Result<VFit> {
    if !(target_u > 0.0 && target_u < 1.0) {
        return Err(LfnError::OutOfRange {
            value: target_u,
            reason: "target unemployment must be in (0, 1)".into(),
        });
    }
    let mut evaluations = 0;
    let mut eval = |v: f64| -> Result<f64> {
        evaluations += 1;
        equilibrium_unemployment(net, &params.with_v(v), &opts.solver)
    };
    let mut grid = Vec::with_capacity(V_GRID.len());
    for &v in &V_GRID {
        grid.push((v, eval(v)?));
    }
    let brackets: Vec<_> = grid
        .windows(2)
        .filter(|w| (w[0].1 - target_u) * (w[1].1 - target_u) <= 0.0)
        .map(|w| (w[0], w[1]))
        .collect();
    if brackets.is_empty() {
        let (lo, hi) = grid
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(_, u)| (a.min(u), b.max(u)));
        return Err(LfnError::TargetOutOfBracket {
            target: target_u,
            lo,
            hi,
        });
    }
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for ((mut lo, mut u_lo), (mut hi, u_hi)) in brackets {
        let mut best = if (u_lo - target_u).abs() <= (u_hi - target_u).abs() {
            (lo, u_lo)
        } else {
            (hi, u_hi)
        };
        while (best.1 - target_u).abs() >= opts.tol && hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            let u_mid = eval(mid)?;
            if (u_mid - target_u).abs() < (best.1 - target_u).abs() {
                best = (mid, u_mid);
            }
            if (u_lo - target_u) * (u_mid - target_u) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                u_lo = u_mid;
            }
        }
        // a grid point hit exactly closes two adjacent brackets
        if roots.last().is_none_or(|r| r.0 != best.0) {
            roots.push(best);
        }
    }
    let pick = match opts.choice {
        RootChoice::Highest => *roots.last().unwrap(),
        RootChoice::Lowest => roots[0],
        RootChoice::Nearest(v) => *roots
            .iter()
            .min_by(|a, b| (a.0 - v).abs().total_cmp(&(b.0 - v).abs()))
            .unwrap(),
    };
    Ok(VFit {
        v_hat: pick.0,
        u_achieved: pick.1,
        roots: roots.iter().map(|r| r.0).collect(),
        evaluations,
    })
}

/// Unemployment of a regular network with (possibly fractional) degree
/// `k_bar`, everything else unchanged.
pub fn counterfactual_regular(params: &EconomyParams, k_bar: f64, n: usize) -> Result<f64> {
    params.validate()?;
    let h = regular_closed_form(params, k_bar, n);
    firm_unemployment_rate(k_bar, h, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub beta_lambda: f64,
    pub se_robust: f64,
    pub r2: f64,
    pub beta_daily: f64,
    pub v_hat: f64,
    pub u_model: f64,
    pub u_counterfactual: f64,
    /// Number of `v` reaching the target; the fit is ambiguous above one.
    #[serde(skip)]
    pub v_roots: usize,
}

/// Full pipeline: estimate λ from the panel, fit `v` on `net` to `target_u`,
/// and evaluate the regular-network counterfactual at the fitted parameters.
///
/// With `daily` the model runs on the daily conversion of the estimated rate;
/// otherwise the panel's own period is the model period.
pub fn calibrate(
    panel: &FirmPanel,
    net: &LaborFlowNetwork,
    base: &EconomyParams,
    target_u: f64,
    daily: bool,
    opts: &FitOptions,
) -> Result<CalibrationResult> {
    let fit = estimate_lambda(panel)?;
    if !(fit.beta > 0.0 && fit.beta < 1.0) {
        return Err(LfnError::OutOfRange {
            value: fit.beta,
            reason: "estimated separation rate must be in (0, 1)".into(),
        });
    }
    let beta_daily = to_daily_rate(fit.beta)?;
    let lambda = if daily { beta_daily } else { fit.beta };
    let params = base.with_lambda(lambda);
    let vfit = fit_v(net, &params, target_u, opts)?;
    let fitted = params.with_v(vfit.v_hat);
    Ok(CalibrationResult {
        v_roots: vfit.roots.len(),
        beta_lambda: fit.beta,
        se_robust: fit.se_robust,
        r2: fit.r2,
        beta_daily,
        v_hat: vfit.v_hat,
        u_model: vfit.u_achieved,
        u_counterfactual: counterfactual_regular(&fitted, net.mean_degree(), net.n())?,
    })
}
