//! Agent-level Monte Carlo of on-network job search.
//!
//! Each period, in order:
//! 1. every firm is open with probability `v`;
//! 2. every employed worker separates with probability `λ` and stays
//!    associated to its last employer;
//! 3. every worker that was already unemployed at the start of the period
//!    looks at the open neighbors of its associated firm, applies to one of
//!    them uniformly at random, and is hired there with that firm's `h`.
//!
//! Workers draw from independent per-worker generators derived from the master
//! seed and tallies are integer counts, so results do not depend on the number
//! of threads.

use crate::calibration::FirmPanel;
use crate::error::{LfnError, Result};
use crate::graph::LaborFlowNetwork;
use crate::params::EconomyParams;
use crate::stats::BatchMeans;
use crate::steady_state::HiringVector;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

/// Worker count above which the worker phase of a period runs on the rayon pool.
const PAR_MIN_WORKERS: usize = 32_768;

pub const DEFAULT_BATCH_LEN: usize = 1000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn substream(seed: u64, index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(splitmix64(seed) ^ index))
}

#[derive(Debug, Clone)]
struct Worker {
    firm: u32,
    employed: bool,
    rng: Xoshiro256PlusPlus,
}

/// What a worker did in one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Idle,
    Separated { firm: u32 },
    Rejected { from: u32, to: u32 },
    Hired { from: u32, to: u32 },
}

/// Per-firm counts for one period, measured at the end of the period.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodTally {
    pub employed: Vec<u32>,
    pub unemployed: Vec<u32>,
    pub applications: Vec<u32>,
    pub outflows: Vec<u32>,
}

/// Mutable state of a running simulation.
pub struct Simulation<'a> {
    net: &'a LaborFlowNetwork,
    params: EconomyParams,
    h: Vec<f64>,
    workers: Vec<Worker>,
    outcomes: Vec<Outcome>,
    firm_rng: Xoshiro256PlusPlus,
    firm_open: Vec<bool>,
    open_offsets: Vec<usize>,
    open_targets: Vec<u32>,
    tally: PeriodTally,
    period: u64,
}

impl<'a> Simulation<'a> {
    /// All workers start employed, spread across firms in proportion to the
    /// analytic firm sizes `h_i·h̄_i·k_i` (largest remainders go to the
    /// largest firms).
    pub fn new(
        net: &'a LaborFlowNetwork,
        params: &EconomyParams,
        h: &HiringVector,
        seed: u64,
    ) -> Result<Self> {
        params.validate_for_simulation()?;
        if h.len() != net.n() {
            return Err(LfnError::InvalidHiring(format!(
                "{} policies for {} firms",
                h.len(),
                net.n()
            )));
        }
        if net.n() > u32::MAX as usize {
            return Err(LfnError::InvalidParameter {
                name: "n",
                reason: "too many firms for the simulator".into(),
            });
        }
        let pop = usize::try_from(params.population).map_err(|_| LfnError::InvalidParameter {
            name: "H",
            reason: "population does not fit in memory".into(),
        })?;
        let allocation = initial_allocation(net, h.as_slice(), pop);
        let mut workers = Vec::with_capacity(pop);
        let mut tally = PeriodTally {
            employed: vec![0; net.n()],
            unemployed: vec![0; net.n()],
            applications: vec![0; net.n()],
            outflows: vec![0; net.n()],
        };
        for (firm, &count) in allocation.iter().enumerate() {
            tally.employed[firm] = count as u32;
            for _ in 0..count {
                let id = workers.len() as u64;
                workers.push(Worker {
                    firm: firm as u32,
                    employed: true,
                    rng: substream(seed, id),
                });
            }
        }
        Ok(Self {
            net,
            params: *params,
            h: h.as_slice().to_vec(),
            outcomes: vec![Outcome::Idle; workers.len()],
            workers,
            firm_rng: substream(seed, u64::MAX),
            firm_open: vec![false; net.n()],
            open_offsets: vec![0; net.n() + 1],
            open_targets: Vec::with_capacity(2 * net.edge_count()),
            tally,
            period: 0,
        })
    }

    /// Advances one period and returns the end-of-period tallies.
    pub fn step(&mut self) -> &PeriodTally {
        let v = self.params.v;
        for open in self.firm_open.iter_mut() {
            *open = self.firm_rng.random::<f64>() < v;
        }
        self.open_targets.clear();
        for i in 0..self.net.n() {
            self.open_targets.extend(
                self.net
                    .neighbors(i)
                    .iter()
                    .filter(|&&j| self.firm_open[j])
                    .map(|&j| j as u32),
            );
            self.open_offsets[i + 1] = self.open_targets.len();
        }

        let lambda = self.params.lambda;
        let h = &self.h;
        let offsets = &self.open_offsets;
        let targets = &self.open_targets;
        let act = |worker: &mut Worker, outcome: &mut Outcome| {
            *outcome = if worker.employed {
                if worker.rng.random::<f64>() < lambda {
                    worker.employed = false;
                    Outcome::Separated { firm: worker.firm }
                } else {
                    Outcome::Idle
                }
            } else {
                let from = worker.firm as usize;
                let open = &targets[offsets[from]..offsets[from + 1]];
                if open.is_empty() {
                    Outcome::Idle
                } else {
                    let to = open[worker.rng.random_range(0..open.len())];
                    if worker.rng.random::<f64>() < h[to as usize] {
                        worker.firm = to;
                        worker.employed = true;
                        Outcome::Hired { from: from as u32, to }
                    } else {
                        Outcome::Rejected { from: from as u32, to }
                    }
                }
            };
        };
        if self.workers.len() >= PAR_MIN_WORKERS {
            self.workers
                .par_iter_mut()
                .zip(self.outcomes.par_iter_mut())
                .with_min_len(8192)
                .for_each(|(w, o)| act(w, o));
        } else {
            for (w, o) in self.workers.iter_mut().zip(self.outcomes.iter_mut()) {
                act(w, o);
            }
        }

        let t = &mut self.tally;
        t.applications.iter_mut().for_each(|x| *x = 0);
        t.outflows.iter_mut().for_each(|x| *x = 0);
        for outcome in &self.outcomes {
            match *outcome {
                Outcome::Idle => {}
                Outcome::Separated { firm } => {
                    t.employed[firm as usize] -= 1;
                    t.unemployed[firm as usize] += 1;
                }
                Outcome::Rejected { to, .. } => t.applications[to as usize] += 1,
                Outcome::Hired { from, to } => {
                    t.applications[to as usize] += 1;
                    t.outflows[from as usize] += 1;
                    t.unemployed[from as usize] -= 1;
                    t.employed[to as usize] += 1;
                }
            }
        }
        self.period += 1;
        &self.tally
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn tally(&self) -> &PeriodTally {
        &self.tally
    }

    /// Outcome of every worker in the last period.
    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Firm each worker is currently associated to.
    pub fn associations(&self) -> Vec<usize> {
        self.workers.iter().map(|w| w.firm as usize).collect()
    }

    pub fn employment_flags(&self) -> Vec<bool> {
        self.workers.iter().map(|w| w.employed).collect()
    }

    pub fn firm_open(&self) -> &[bool] {
        &self.firm_open
    }

    pub fn unemployment_rate(&self) -> f64 {
        let u: u64 = self.tally.unemployed.iter().map(|&x| x as u64).sum();
        u as f64 / self.workers.len() as f64
    }
}

fn initial_allocation(net: &LaborFlowNetwork, h: &[f64], pop: usize) -> Vec<usize> {
    let n = net.n();
    let mut weights: Vec<f64> = (0..n)
        .map(|i| h[i] * net.neighbor_mean(i, h) * net.degree(i) as f64)
        .collect();
    if weights.iter().sum::<f64>() <= 0.0 {
        weights = (0..n).map(|i| net.degree(i) as f64).collect();
    }
    let total: f64 = weights.iter().sum();
    let mut counts: Vec<usize> = weights
        .iter()
        .map(|w| (pop as f64 * w / total).floor() as usize)
        .collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut remainder = pop.saturating_sub(assigned);
    for &i in order.iter().cycle() {
        if remainder == 0 {
            break;
        }
        counts[i] += 1;
        remainder -= 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub periods: usize,
    pub burnin: usize,
    pub seed: u64,
    pub batch_len: usize,
}

impl SimConfig {
    /// Burn-in defaults to 10% of the periods.
    pub fn new(periods: usize, seed: u64) -> Self {
        Self {
            periods,
            burnin: periods / 10,
            seed,
            batch_len: DEFAULT_BATCH_LEN,
        }
    }
}

/// Time averages over the post-burn-in periods with batch-means standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub mean_l: Vec<f64>,
    pub mean_u: Vec<f64>,
    pub mean_a: Vec<f64>,
    pub mean_o: Vec<f64>,
    pub se_l: Vec<f64>,
    pub se_u: Vec<f64>,
    pub se_a: Vec<f64>,
    pub se_o: Vec<f64>,
    /// Aggregate unemployment rate at the end of every period, burn-in included.
    pub u_series: Vec<f64>,
    pub periods: usize,
    pub burnin: usize,
    pub seed: u64,
    pub batch_len: usize,
}

impl SimResult {
    pub fn n(&self) -> usize {
        self.mean_l.len()
    }
}

pub fn simulate(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    h: &HiringVector,
    config: &SimConfig,
) -> Result<SimResult> {
    if config.periods <= config.burnin {
        return Err(LfnError::InvalidParameter {
            name: "periods",
            reason: format!(
                "periods ({}) must exceed burn-in ({})",
                config.periods, config.burnin
            ),
        });
    }
    if config.batch_len == 0 {
        return Err(LfnError::InvalidParameter {
            name: "batch_len",
            reason: "must be positive".into(),
        });
    }
    let mut sim = Simulation::new(net, params, h, config.seed)?;
    let n = net.n();
    let new_acc = || vec![BatchMeans::new(config.batch_len); n];
    let (mut acc_l, mut acc_u, mut acc_a, mut acc_o) = (new_acc(), new_acc(), new_acc(), new_acc());
    let mut u_series = Vec::with_capacity(config.periods);
    for period in 1..=config.periods {
        sim.step();
        u_series.push(sim.unemployment_rate());
        if period > config.burnin {
            let t = sim.tally();
            for i in 0..n {
                acc_l[i].push(t.employed[i] as f64);
                acc_u[i].push(t.unemployed[i] as f64);
                acc_a[i].push(t.applications[i] as f64);
                acc_o[i].push(t.outflows[i] as f64);
            }
        }
    }
    let means = |acc: &[BatchMeans]| acc.iter().map(BatchMeans::mean).collect();
    let errors = |acc: &[BatchMeans]| acc.iter().map(BatchMeans::std_error).collect();
    Ok(SimResult {
        mean_l: means(&acc_l),
        mean_u: means(&acc_u),
        mean_a: means(&acc_a),
        mean_o: means(&acc_o),
        se_l: errors(&acc_l),
        se_u: errors(&acc_u),
        se_a: errors(&acc_a),
        se_o: errors(&acc_o),
        u_series,
        periods: config.periods,
        burnin: config.burnin,
        seed: config.seed,
        batch_len: config.batch_len,
    })
}

/// Simulates and reports each firm's mean size and mean outflow from
/// unemployment, in the shape of a calibration panel.
pub fn synth_panel(
    net: &LaborFlowNetwork,
    params: &EconomyParams,
    h: &HiringVector,
    periods: usize,
    seed: u64,
) -> Result<FirmPanel> {
    let result = simulate(net, params, h, &SimConfig::new(periods, seed))?;
    Ok(panel_from_result(&result))
}

pub fn panel_from_result(result: &SimResult) -> FirmPanel {
    FirmPanel::from_rows(
        (0..result.n())
            .map(|i| (i, result.mean_l[i], result.mean_o[i]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_pareto;

    fn small() -> (LaborFlowNetwork, EconomyParams) {
        let net = generate_pareto(30, 4.0, 5).unwrap();
        let mut p = EconomyParams::stylized();
        p.population = 600;
        (net, p)
    }

    #[test]
    fn allocation_sums_to_population() {
        let (net, _) = small();
        let h: Vec<f64> = (0..30).map(|i| 0.2 + 0.02 * i as f64).collect();
        let counts = initial_allocation(&net, &h, 1001);
        assert_eq!(counts.iter().sum::<usize>(), 1001);
    }

    #[test]
    fn population_conserved_every_period() {
        let (net, p) = small();
        let h = HiringVector::uniform(30, 0.4).unwrap();
        let mut sim = Simulation::new(&net, &p, &h, 3).unwrap();
        for _ in 0..500 {
            let t = sim.step();
            let total: u32 = t.employed.iter().chain(&t.unemployed).sum();
            assert_eq!(total, 600);
        }
    }

    #[test]
    fn no_separation_means_no_unemployment() {
        let (net, p) = small();
        let p = p.with_lambda(0.0);
        let res = simulate(&net, &p, &HiringVector::uniform(30, 0.5).unwrap(), &SimConfig::new(300, 1)).unwrap();
        assert!(res.u_series.iter().all(|&u| u == 0.0));
        assert!(res.mean_u.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn closed_firms_trap_the_unemployed() {
        let (net, p) = small();
        let p = p.with_v(0.0);
        let res = simulate(&net, &p, &HiringVector::uniform(30, 0.5).unwrap(), &SimConfig::new(300, 1)).unwrap();
        assert!(res.u_series.windows(2).all(|w| w[1] >= w[0]));
        assert!(res.mean_a.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn moves_follow_edges() {
        let (net, p) = small();
        let h = HiringVector::uniform(30, 0.7).unwrap();
        let mut sim = Simulation::new(&net, &p, &h, 11).unwrap();
        for _ in 0..300 {
            let before = sim.associations();
            let was_employed = sim.employment_flags();
            sim.step();
            let after = sim.associations();
            for (w, outcome) in sim.outcomes().iter().enumerate() {
                match *outcome {
                    Outcome::Hired { from, to } => {
                        assert!(!was_employed[w], "fresh separations never search");
                        assert_eq!(before[w], from as usize);
                        assert_eq!(after[w], to as usize);
                        assert!(net.has_edge(from as usize, to as usize));
                        assert!(sim.firm_open()[to as usize]);
                    }
                    _ => assert_eq!(before[w], after[w]),
                }
            }
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let (net, p) = small();
        let h = HiringVector::uniform(30, 0.6).unwrap();
        let cfg = SimConfig {
            batch_len: 100,
            ..SimConfig::new(2000, 9)
        };
        let a = simulate(&net, &p, &h, &cfg).unwrap();
        let b = simulate(&net, &p, &h, &cfg).unwrap();
        assert!(a.se_l.iter().all(|s| s.is_finite()));
        assert_eq!(a, b);
        let c = simulate(&net, &p, &h, &SimConfig::new(2000, 10)).unwrap();
        assert_ne!(a.u_series, c.u_series);
    }

    #[test]
    fn rejects_bad_config() {
        let (net, p) = small();
        let h = HiringVector::uniform(30, 0.6).unwrap();
        let cfg = SimConfig {
            periods: 10,
            burnin: 10,
            seed: 0,
            batch_len: 5,
        };
        assert!(simulate(&net, &p, &h, &cfg).is_err());
    }
}
