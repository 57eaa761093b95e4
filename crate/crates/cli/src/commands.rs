use crate::artifacts::{input_digest, Artifacts};
use crate::{
    CalibrateArgs, CounterfactualArgs, GenerateArgs, Mode, RootArg, SimulateArgs, SolveArgs, SolverArgs,
    SweepArgs, TopologyArg,
};
use lfn_core::calibration::RootChoice;
use lfn_core::equilibrium::optimal_hiring_exogenous;
use lfn_core::experiments::{beveridge_sweep, cost_grid, panel_statistics, topology_sweep};
use lfn_core::export::{
    write_sim_csv, write_solution_csv, write_sweep_csv, write_u_series_csv, SolutionSummary,
};
use lfn_core::graph::{read_edge_list, write_edge_list_to};
use lfn_core::stats::{mean, std_dev};
use lfn_core::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("settings are always objects"),
    }
}

struct Loaded {
    file: ParamFile,
    economy: EconomyParams,
}

fn load_params(path: Option<&Path>, inputs: &mut Map<String, Value>) -> Result<Loaded> {
    let file = match path {
        Some(p) => {
            inputs.insert("params".into(), input_digest(p)?);
            ParamFile::read(p)?
        }
        None => ParamFile::from_economy(&EconomyParams::stylized()),
    };
    let economy = file.economy()?;
    economy.validate()?;
    Ok(Loaded { file, economy })
}

fn load_edges(path: &Path, inputs: &mut Map<String, Value>) -> Result<LaborFlowNetwork> {
    inputs.insert("edges".into(), input_digest(path)?);
    read_edge_list(path)
}

fn solver_options(args: &SolverArgs, file: &ParamFile) -> SolverOptions {
    let d = SolverOptions::default();
    SolverOptions {
        init: None,
        tol: args.tol.or(file.tol).unwrap_or(d.tol),
        max_iter: args.max_iter.or(file.max_iter).unwrap_or(d.max_iter),
        damping: file.damping.unwrap_or(d.damping),
    }
}

/// Parameter file echo with solver settings resolved.
fn effective_params(loaded: &Loaded, solver: &SolverOptions) -> Value {
    let mut file = loaded.file.clone();
    file.tol = Some(solver.tol);
    file.max_iter = Some(solver.max_iter);
    file.damping = Some(solver.damping);
    serde_json::to_value(file).expect("parameter file serializes")
}

fn exogenous_wage(file: &ParamFile) -> Result<f64> {
    match file.w {
        Some(w) if w.is_finite() && w >= 0.0 => Ok(w),
        Some(w) => Err(LfnError::InvalidParameter {
            name: "w",
            reason: format!("{w} is not a nonnegative wage"),
        }),
        None => Err(LfnError::InvalidParameter {
            name: "w",
            reason: "exogenous mode needs `w` in the parameter file".into(),
        }),
    }
}

fn single_topology(t: TopologyArg) -> Result<Topology> {
    match t {
        TopologyArg::Regular => Ok(Topology::Regular),
        TopologyArg::Binomial => Ok(Topology::Binomial),
        TopologyArg::Pareto => Ok(Topology::Pareto),
        TopologyArg::All => Err(LfnError::InvalidParameter {
            name: "topology",
            reason: "`all` is only valid for sweeps".into(),
        }),
    }
}

pub fn generate(a: &GenerateArgs, threads: Option<usize>) -> Result<()> {
    let topology = single_topology(a.topology)?;
    let net = topology.generate(a.n, a.mean_degree, a.seed)?;
    let mut out = Artifacts::create(&a.out)?;
    out.write("edges.txt", |buf| write_edge_list_to(&net, buf))?;
    let settings = json!({
        "topology": topology,
        "n": a.n,
        "mean_degree": a.mean_degree,
        "seed": a.seed,
        "threads": threads,
        "realized": { "n": net.n(), "edges": net.edge_count(), "mean_degree": net.mean_degree() },
    });
    out.finish("generate", object(settings), Map::new())
}

pub fn solve(a: &SolveArgs, threads: Option<usize>) -> Result<()> {
    let mut inputs = Map::new();
    let net = load_edges(&a.edges, &mut inputs)?;
    let loaded = load_params(a.params.as_deref(), &mut inputs)?;
    let solver = solver_options(&a.solver, &loaded.file);
    let p = loaded.economy;
    let mut out = Artifacts::create(&a.out)?;
    match a.mode {
        Mode::Endogenous => {
            let eq = solve_equilibrium(&net, &p, &solver)?;
            out.write("solution.csv", |buf| write_solution_csv(&net, &eq.steady, Some(&eq), buf))?;
            out.write_json("solution.json", &SolutionSummary::new(&eq.steady, Some(&eq), &p))?;
            let stats = panel_statistics(&eq, &net);
            out.write("size_premium.csv", |buf| {
                writeln!(buf, "L,w")?;
                for (l, w) in &stats.size_premium {
                    writeln!(buf, "{l},{w}")?;
                }
                Ok(())
            })?;
            out.write_json("panel_stats.json", &stats)?;
        }
        Mode::Exogenous => {
            let w = exogenous_wage(&loaded.file)?;
            let h = HiringVector::uniform(net.n(), optimal_hiring_exogenous(&p, w))?;
            let steady = steady_state(&net, &h, &p)?;
            out.write("solution.csv", |buf| write_solution_csv(&net, &steady, None, buf))?;
            out.write_json("solution.json", &SolutionSummary::new(&steady, None, &p))?;
        }
    }
    let settings = json!({
        "mode": a.mode,
        "params": effective_params(&loaded, &solver),
        "threads": threads,
    });
    out.finish("solve", object(settings), inputs)
}

fn hiring_for(
    net: &LaborFlowNetwork,
    loaded: &Loaded,
    mode: Mode,
    solver: &SolverOptions,
) -> Result<(HiringVector, SteadyStateSolution)> {
    let p = &loaded.economy;
    match mode {
        Mode::Endogenous => {
            let eq = solve_equilibrium(net, p, solver)?;
            Ok((HiringVector::new(eq.h_star)?, eq.steady))
        }
        Mode::Exogenous => {
            let w = exogenous_wage(&loaded.file)?;
            let h = HiringVector::uniform(net.n(), optimal_hiring_exogenous(p, w))?;
            let steady = steady_state(net, &h, p)?;
            Ok((h, steady))
        }
    }
}

#[derive(Serialize)]
struct SimSummary {
    mean_u_agg: f64,
    analytic_u_agg: f64,
    /// Share of firms whose mean L and U both lie within 3 standard errors of
    /// the analytic steady state.
    coverage_3se: f64,
    periods: usize,
    burnin: usize,
    seed: u64,
    batch_len: usize,
}

pub fn simulate(a: &SimulateArgs, threads: Option<usize>) -> Result<()> {
    let mut inputs = Map::new();
    let net = load_edges(&a.edges, &mut inputs)?;
    let loaded = load_params(a.params.as_deref(), &mut inputs)?;
    let solver = solver_options(&a.solver, &loaded.file);
    let (h, steady) = hiring_for(&net, &loaded, a.mode, &solver)?;
    let cfg = SimConfig {
        periods: a.periods,
        burnin: a.burnin.unwrap_or(a.periods / 10),
        seed: a.seed,
        batch_len: a.batch_len,
    };
    let result = lfn_core::simulate(&net, &loaded.economy, &h, &cfg)?;
    let inside = (0..net.n())
        .filter(|&i| {
            (result.mean_l[i] - steady.employment[i]).abs() <= 3.0 * result.se_l[i]
                && (result.mean_u[i] - steady.unemployment[i]).abs() <= 3.0 * result.se_u[i]
        })
        .count();
    let mut out = Artifacts::create(&a.out)?;
    out.write("sim.csv", |buf| write_sim_csv(&result, buf))?;
    out.write("u_series.csv", |buf| write_u_series_csv(&result, buf))?;
    out.write_json(
        "sim.json",
        &SimSummary {
            mean_u_agg: mean(&result.u_series),
            analytic_u_agg: steady.u_agg,
            coverage_3se: inside as f64 / net.n() as f64,
            periods: cfg.periods,
            burnin: cfg.burnin,
            seed: cfg.seed,
            batch_len: cfg.batch_len,
        },
    )?;
    let settings = json!({
        "mode": a.mode,
        "params": effective_params(&loaded, &solver),
        "seed": cfg.seed,
        "periods": cfg.periods,
        "burnin": cfg.burnin,
        "batch_len": cfg.batch_len,
        "threads": threads,
    });
    out.finish("simulate", object(settings), inputs)
}

#[derive(Serialize)]
struct SweepCell {
    topology: String,
    c: f64,
    replicates: usize,
    converged: usize,
    mean_h_bar: f64,
    mean_u_agg: f64,
    se_u_agg: Option<f64>,
}

fn summarize(points: &[SweepPoint]) -> Vec<SweepCell> {
    let mut cells: BTreeMap<(String, u64), Vec<&SweepPoint>> = BTreeMap::new();
    for p in points {
        cells.entry((p.topology.clone(), p.c.to_bits())).or_default().push(p);
    }
    cells
        .into_iter()
        .map(|((topology, c), pts)| {
            let ok: Vec<&&SweepPoint> = pts.iter().filter(|p| p.converged).collect();
            let u: Vec<f64> = ok.iter().map(|p| p.u_agg).collect();
            let h: Vec<f64> = ok.iter().map(|p| p.h_bar).collect();
            SweepCell {
                topology,
                c: f64::from_bits(c),
                replicates: pts.len(),
                converged: ok.len(),
                mean_h_bar: mean(&h),
                mean_u_agg: mean(&u),
                se_u_agg: (u.len() >= 2).then(|| std_dev(&u) / (u.len() as f64).sqrt()),
            }
        })
        .collect()
}

pub fn sweep(a: &SweepArgs, threads: Option<usize>) -> Result<()> {
    if !(a.c_min > 0.0 && a.c_max < 1.0 && a.c_min <= a.c_max && a.c_steps > 0) {
        return Err(LfnError::InvalidParameter {
            name: "c",
            reason: format!("need 0 < c-min <= c-max < 1 and c-steps >= 1, got [{}, {}] x {}", a.c_min, a.c_max, a.c_steps),
        });
    }
    let mut inputs = Map::new();
    let loaded = load_params(a.params.as_deref(), &mut inputs)?;
    let solver = solver_options(&a.solver, &loaded.file);
    let costs = cost_grid(a.c_min, a.c_max, a.c_steps);
    let seeds = a.seeds.clone().unwrap_or_else(|| vec![a.seed]);
    let (points, network) = match &a.edges {
        Some(path) => {
            let net = load_edges(path, &mut inputs)?;
            let pts = beveridge_sweep(&net, &loaded.economy, &costs, &solver, "custom", 0)?;
            (pts, json!({ "source": "edges" }))
        }
        None => {
            let topologies: Vec<Topology> = match a.topology {
                TopologyArg::All => Topology::ALL.to_vec(),
                t => vec![single_topology(t)?],
            };
            let pts = topology_sweep(&loaded.economy, a.n, a.mean_degree, &topologies, &seeds, &costs, &solver)?;
            let network = json!({
                "source": "generated",
                "topologies": topologies,
                "n": a.n,
                "mean_degree": a.mean_degree,
                "seeds": seeds,
            });
            (pts, network)
        }
    };
    let mut out = Artifacts::create(&a.out)?;
    out.write("sweep.csv", |buf| write_sweep_csv(&points, buf))?;
    out.write_json("sweep_summary.json", &summarize(&points))?;
    let settings = json!({
        "params": effective_params(&loaded, &solver),
        "network": network,
        "c_min": a.c_min,
        "c_max": a.c_max,
        "c_steps": a.c_steps,
        "threads": threads,
    });
    out.finish("sweep", object(settings), inputs)
}

pub fn calibrate(a: &CalibrateArgs, threads: Option<usize>) -> Result<()> {
    let mut inputs = Map::new();
    inputs.insert("panel".into(), input_digest(&a.panel)?);
    let panel = calibration::FirmPanel::read_csv(&a.panel)?;
    let net = load_edges(&a.edges, &mut inputs)?;
    let loaded = load_params(a.params.as_deref(), &mut inputs)?;
    let solver = solver_options(&a.solver, &loaded.file);
    let opts = FitOptions {
        tol: a.fit_tol,
        solver: solver.clone(),
        choice: match a.root {
            RootArg::Highest => RootChoice::Highest,
            RootArg::Lowest => RootChoice::Lowest,
        },
    };
    let result = lfn_core::calibrate(&panel, &net, &loaded.economy, a.target_u, a.daily, &opts)?;
    let mut out = Artifacts::create(&a.out)?;
    out.write_json("calibration.json", &result)?;
    let settings = json!({
        "params": effective_params(&loaded, &solver),
        "target_u": a.target_u,
        "daily": a.daily,
        "root": a.root,
        "fit_tol": a.fit_tol,
        "v_roots_found": result.v_roots,
        "threads": threads,
    });
    out.finish("calibrate", object(settings), inputs)
}

pub fn counterfactual(a: &CounterfactualArgs, threads: Option<usize>) -> Result<()> {
    let mut inputs = Map::new();
    let net = load_edges(&a.edges, &mut inputs)?;
    let loaded = load_params(a.params.as_deref(), &mut inputs)?;
    let solver = solver_options(&a.solver, &loaded.file);
    let p = &loaded.economy;
    let model = solve_equilibrium(&net, p, &solver)?.steady.u_agg;
    let regular = counterfactual_regular(p, net.mean_degree(), net.n())?;
    let mut out = Artifacts::create(&a.out)?;
    out.write_json(
        "counterfactual.json",
        &json!({
            "n": net.n(),
            "mean_degree": net.mean_degree(),
            "u_model": model,
            "u_counterfactual": regular,
            "gap": model - regular,
        }),
    )?;
    let settings = json!({
        "params": effective_params(&loaded, &solver),
        "threads": threads,
    });
    out.finish("counterfactual", object(settings), inputs)
}
