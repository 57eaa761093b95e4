//! Unemployment on labor flow networks.
//!
//! Workers search for jobs by moving across an exogenous network of firms:
//! after separating from a firm they may only apply to that firm's neighbors,
//! and only to those that are open in the current period. This crate provides
//!
//! - [`graph`]: the network type, edge-list I/O and stylized generators;
//! - [`steady_state`]: closed-form per-firm stocks and flows for given hiring
//!   policies, with [`oracle`] as an exact Markov-chain cross-check;
//! - [`equilibrium`]: optimal hiring under exogenous and endogenous wages;
//! - [`sim`]: an agent-level Monte Carlo of the search process;
//! - [`calibration`]: separation-rate regression, fitting the investment
//!   probability, and regular-network counterfactuals;
//! - [`experiments`]: Beveridge sweeps and topology comparisons;
//! - [`export`]: CSV and JSON writers for all of the above.

// `!(x > 0.0)` is used on purpose so that NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod equilibrium;
pub mod error;
pub mod experiments;
pub mod export;
pub mod graph;
pub mod oracle;
pub mod params;
pub mod sim;
pub mod stats;
pub mod steady_state;

pub use calibration::{RootChoice, 
    calibrate, counterfactual_regular, estimate_lambda, fit_v, to_daily_rate, CalibrationResult,
    FirmPanel, FitOptions,
};
pub use equilibrium::{
    best_response_sweep, optimal_hiring_exogenous, regular_closed_form, solve_equilibrium,
    EquilibriumSolution, SolverOptions,
};
pub use error::{LfnError, Result};
pub use experiments::{beveridge_sweep, dominance_compare, panel_statistics, SweepPoint, WageMode};
pub use graph::{degree_distribution, DegreeDistribution, LaborFlowNetwork, Topology};
pub use oracle::exact_chain_oracle;
pub use params::{EconomyParams, ParamFile};
pub use sim::{simulate, synth_panel, SimConfig, SimResult};
pub use steady_state::{
    compute_varphi, firm_unemployment_rate, steady_state, HiringVector, SteadyStateSolution,
};
