//! Economy-wide scalar parameters and the JSON parameter file.

use crate::error::{LfnError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Scalar parameters shared by every firm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomyParams {
    /// Per-period separation probability.
    pub lambda: f64,
    /// Per-period probability that a firm receives an investment (is open).
    pub v: f64,
    /// Vacancy cost.
    pub c: f64,
    /// Sunk-cost fraction paid while closed.
    pub kappa: f64,
    /// Productivity; also the wage ceiling of the labor supply.
    pub y: f64,
    /// Labor-supply elasticity parameter.
    pub b: f64,
    /// Worker population.
    #[serde(rename = "H")]
    pub population: u64,
}

impl EconomyParams {
    /// The stylized-network calibration: N=200, H=4000, λ=.05, y=1, v=.8,
    /// c=.1, κ=.5, b=1.
    pub fn stylized() -> Self {
        Self {
            lambda: 0.05,
            v: 0.8,
            c: 0.1,
            kappa: 0.5,
            y: 1.0,
            b: 1.0,
            population: 4000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_open_closed("lambda", self.lambda)?;
        check_unit_open_closed("v", self.v)?;
        self.validate_common()
    }

    /// Like [`validate`](Self::validate) but admits `lambda = 0` and `v = 0`,
    /// which the agent simulation handles as absorbing cases.
    pub fn validate_for_simulation(&self) -> Result<()> {
        for (name, x) in [("lambda", self.lambda), ("v", self.v)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(invalid(name, format!("{x} is not in [0, 1]")));
            }
        }
        self.validate_common()
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(invalid("c", format!("{} is not in (0, 1)", self.c)));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(invalid("kappa", format!("{} is not in [0, 1]", self.kappa)));
        }
        if !(self.y > 0.0 && self.y.is_finite()) {
            return Err(invalid("y", format!("{} must be positive", self.y)));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(invalid("b", format!("{} must be positive", self.b)));
        }
        if self.population == 0 {
            return Err(invalid("H", "population must be at least 1".into()));
        }
        Ok(())
    }

    /// ψ = 1 − λ + vλ.
    #[inline]
    pub fn psi(&self) -> f64 {
        1.0 - self.lambda + self.v * self.lambda
    }

    /// Effective vacancy cost c(v + κ − vκ).
    #[inline]
    pub fn phi_cost(&self) -> f64 {
        self.c * (self.v + self.kappa - self.v * self.kappa)
    }

    /// Probability that at least one of `k` neighbors is open, 1 − (1 − v)^k.
    /// `k` may be fractional.
    #[inline]
    pub fn theta(&self, k: f64) -> f64 {
        if self.v >= 1.0 {
            return 1.0;
        }
        -(k * (-self.v).ln_1p()).exp_m1()
    }

    #[inline]
    pub fn population_f64(&self) -> f64 {
        self.population as f64
    }

    pub fn with_v(self, v: f64) -> Self {
        Self { v, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn with_b(self, b: f64) -> Self {
        Self { b, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }
}

fn invalid(name: &'static str, reason: String) -> LfnError {
    LfnError::InvalidParameter { name, reason }
}

fn check_unit_open_closed(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is not in (0, 1]")))
    }
}

/// On-disk parameter file: the economy plus optional solver settings and an
/// exogenous wage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub lambda: f64,
    pub v: f64,
    pub c: f64,
    pub kappa: f64,
    pub y: f64,
    pub b: f64,
    #[serde(rename = "H")]
    pub population: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
}

impl ParamFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LfnError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Economy parameters, without range validation beyond `H` being a
    /// positive integer.
    pub fn economy(&self) -> Result<EconomyParams> {
        let h = self.population;
        if !(h >= 1.0) || h.fract() != 0.0 || h > u64::MAX as f64 {
            return Err(invalid("H", format!("{h} is not a positive integer")));
        }
        Ok(EconomyParams {
            lambda: self.lambda,
            v: self.v,
            c: self.c,
            kappa: self.kappa,
            y: self.y,
            b: self.b,
            population: h as u64,
        })
    }

    pub fn from_economy(p: &EconomyParams) -> Self {
        Self {
            lambda: p.lambda,
            v: p.v,
            c: p.c,
            kappa: p.kappa,
            y: p.y,
            b: p.b,
            population: p.population as f64,
            w: None,
            tol: None,
            max_iter: None,
            damping: None,
        }
    }
}
