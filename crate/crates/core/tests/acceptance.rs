//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own line; exits nonzero if any fails.

mod common;

use common::{random_connected, random_hiring, random_params, rng};
use lfn_core::calibration::{from_daily_rate, RootChoice};
use lfn_core::equilibrium::optimal_hiring_exogenous;
use lfn_core::experiments::{cost_grid, panel_statistics, relative_spread};
use lfn_core::sim::panel_from_result;
use lfn_core::steady_state::aggregate_unemployment;
use lfn_core::*;
use rand::Rng;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn figure_params() -> EconomyParams {
    EconomyParams::stylized()
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    let mut graphs = 0;
    while graphs < 240 {
        let n = r.random_range(2..=8);
        let extra = r.random_range(0.0..0.7);
        let net = random_connected(&mut r, n, extra);
        if net.max_degree() > 7 {
            continue;
        }
        let h = random_hiring(&mut r, n, 0.1);
        let p = random_params(&mut r);
        let (op, oq) = exact_chain_oracle(&net, &h, &p).unwrap();
        let s = steady_state(&net, &h, &p).unwrap();
        for i in 0..n {
            worst = worst.max((op[i] - s.p[i]).abs()).max((oq[i] - s.q[i]).abs());
        }
        graphs += 1;
    }
    outcome(worst < 1e-10, format!("{graphs} graphs, max |Δ| = {worst:.2e}"))
}

fn conservation_and_balance() -> Outcome {
    let mut worst_rel: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    for (i, t) in [Topology::Binomial, Topology::Pareto].into_iter().enumerate() {
        let net = t.generate(10_000, 6.0, 40 + i as u64).unwrap();
        let mut r = rng(i as u64);
        let h = random_hiring(&mut r, net.n(), 0.05);
        let p = EconomyParams {
            population: 200_000,
            ..random_params(&mut r)
        };
        let s = steady_state(&net, &h, &p).unwrap();
        let total = s.total_employment() + s.total_unemployment();
        worst_rel = worst_rel.max((total - p.population_f64()).abs() / p.population_f64());
        for j in 0..net.n() {
            worst_abs = worst_abs
                .max((p.lambda * s.employment[j] - h[j] * s.applications[j]).abs())
                .max((s.outflows[j] - p.lambda * s.employment[j]).abs());
        }
    }
    outcome(
        worst_rel < 1e-8 && worst_abs < 1e-12,
        format!("conservation rel {worst_rel:.2e}, balance abs {worst_abs:.2e}"),
    )
}

fn monte_carlo() -> Outcome {
    let net = Topology::Pareto.generate(200, 6.0, 3).unwrap();
    let p = figure_params().with_c(0.5);
    let eq = solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap();
    let h = HiringVector::new(eq.h_star.clone()).unwrap();
    let cfg = SimConfig {
        periods: 200_000,
        burnin: 20_000,
        seed: 11,
        batch_len: 1000,
    };
    let sim = simulate(&net, &p, &h, &cfg).unwrap();
    let s = &eq.steady;
    let inside = (0..net.n())
        .filter(|&i| {
            (sim.mean_l[i] - s.employment[i]).abs() <= 3.0 * sim.se_l[i]
                && (sim.mean_u[i] - s.unemployment[i]).abs() <= 3.0 * sim.se_u[i]
        })
        .count();
    let share = inside as f64 / net.n() as f64;
    outcome(share >= 0.95, format!("{inside}/{} firms inside 3 SE", net.n()))
}

fn closed_form_agreement() -> Outcome {
    let net = Topology::Regular.generate(200, 6.0, 5).unwrap();
    let mut worst: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for c in [0.1, 0.5, 0.9] {
        let p = figure_params().with_c(c);
        let target = regular_closed_form(&p, 6.0, 200);
        let eq = solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap();
        worst = eq.h_star.iter().map(|h| (h - target).abs()).fold(worst, f64::max);
        let mut r = rng(77);
        let solutions: Vec<Vec<f64>> = (0..20)
            .map(|_| {
                let init = (0..200).map(|_| r.random_range(0.01..=1.0)).collect();
                let opts = SolverOptions {
                    init: Some(init),
                    ..SolverOptions::default()
                };
                solve_equilibrium(&net, &p, &opts).unwrap().h_star
            })
            .collect();
        for s in &solutions[1..] {
            spread = s.iter().zip(&solutions[0]).map(|(a, b)| (a - b).abs()).fold(spread, f64::max);
        }
    }
    outcome(
        worst < 1e-8 && spread < 1e-6,
        format!("max |h − closed form| {worst:.2e}, 20-start spread {spread:.2e}"),
    )
}

fn topology_ordering() -> Outcome {
    let p = figure_params();
    let seeds: Vec<u64> = (1..=10).collect();
    let mut ordered_everywhere = true;
    let mut gap_ok = false;
    let mut collapse = f64::NAN;
    let mut best_h = f64::NEG_INFINITY;
    let mut note = String::new();
    for c in cost_grid(0.1, 0.9, 9) {
        let q = p.with_c(c);
        let report =
            dominance_compare(&q, 200, 6.0, &seeds, WageMode::Endogenous, &SolverOptions::default()).unwrap();
        let [reg, bin, par] = report.mean;
        ordered_everywhere &= par > bin && bin > reg;
        if (c - 0.1).abs() < 1e-12 {
            let se = report.std_err[0].hypot(report.std_err[2]);
            gap_ok = par - reg >= 2.0 * se;
            note = format!("gap at c=.1 {:.2e} vs 2 SE {:.2e}", par - reg, 2.0 * se);
        }
        // the highest mean policy is reached on the regular net at the cheapest cost
        let h = experiments::beveridge_sweep(
            &Topology::Regular.generate(200, 6.0, 1).unwrap(),
            &q,
            &[c],
            &SolverOptions::default(),
            "regular",
            1,
        )
        .unwrap()[0]
            .h_bar;
        if h > best_h {
            best_h = h;
            collapse = relative_spread(&report.mean);
        }
    }
    outcome(
        ordered_everywhere && gap_ok && collapse < 0.10,
        format!("ordered at every c: {ordered_everywhere}; {note}; spread at top h̄ {collapse:.3}"),
    )
}

fn panel_signs() -> Outcome {
    let p = figure_params().with_c(0.5);
    let mut pearson_neg = 0;
    let mut spearman_neg = 0;
    for seed in 1..=10 {
        let net = Topology::Pareto.generate(200, 6.0, seed).unwrap();
        let eq = solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap();
        let stats = panel_statistics(&eq, &net);
        pearson_neg += stats.pearson_h_neighbors.is_some_and(|r| r < 0.0) as usize;
        spearman_neg += stats.spearman_k_h.is_some_and(|r| r < 0.0) as usize;
    }
    outcome(
        pearson_neg >= 9 && spearman_neg >= 9,
        format!("corr(h, h̄) < 0 in {pearson_neg}/10, rank corr(k, h) < 0 in {spearman_neg}/10"),
    )
}

fn size_premium() -> Outcome {
    let mut curves = 0;
    let mut points = 0;
    let mut monotone = true;
    for seed in 1..=5 {
        for t in [Topology::Binomial, Topology::Pareto] {
            let net = t.generate(200, 6.0, seed).unwrap();
            for c in [0.3, 0.6, 0.9] {
                let eq = solve_equilibrium(&net, &figure_params().with_c(c), &SolverOptions::default()).unwrap();
                let curve = panel_statistics(&eq, &net).size_premium;
                monotone &= curve.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
                curves += 1;
                points += curve.len();
            }
        }
    }
    outcome(monotone, format!("{curves} curves, {points} distinct sizes, strictly increasing: {monotone}"))
}

fn calibration_round_trip() -> Outcome {
    let truth = figure_params().with_c(0.5);
    let net = Topology::Pareto.generate(200, 6.0, 4).unwrap();
    let eq = solve_equilibrium(&net, &truth, &SolverOptions::default()).unwrap();
    let h = HiringVector::new(eq.h_star.clone()).unwrap();
    let sim = simulate(&net, &truth, &h, &SimConfig::new(110_000, 21)).unwrap();
    let fit = estimate_lambda(&panel_from_result(&sim)).unwrap();
    let lambda_err = (fit.beta - truth.lambda).abs() / truth.lambda;

    let opts = FitOptions {
        tol: 1e-12,
        ..FitOptions::default()
    };
    let vfit = fit_v(&net, &truth.with_lambda(fit.beta), eq.steady.u_agg, &opts).unwrap();
    let v_err = (vfit.v_hat - truth.v).abs();

    let mut daily_err: f64 = 0.0;
    for beta in [1e-6, 0.01, 0.05, 0.188, 0.5, 0.9] {
        daily_err = daily_err.max((from_daily_rate(to_daily_rate(beta).unwrap()).unwrap() - beta).abs());
    }
    let lowest = fit_v(
        &net,
        &truth.with_lambda(fit.beta),
        eq.steady.u_agg,
        &FitOptions {
            choice: RootChoice::Lowest,
            ..opts
        },
    )
    .unwrap();
    outcome(
        lambda_err < 0.02 && v_err < 1e-3 && daily_err < 1e-12,
        format!(
            "λ rel err {lambda_err:.2e}, |v̂ − v| {v_err:.2e} (roots {:?}, lowest {:.3}), daily round trip {daily_err:.1e}",
            vfit.roots
                .iter()
                .map(|r| (r * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            lowest.v_hat
        ),
    )
}

fn counterfactual_direction() -> Outcome {
    let gaps = |b: f64| -> Vec<f64> {
        let p = figure_params().with_b(b);
        (1..=10)
            .map(|seed| {
                let net = Topology::Pareto.generate(200, 6.0, seed).unwrap();
                let model = solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap().steady.u_agg;
                model - counterfactual_regular(&p, net.mean_degree(), net.n()).unwrap()
            })
            .collect()
    };
    let inelastic = gaps(0.1);
    let elastic = gaps(100.0);
    let positive = inelastic.iter().filter(|g| **g > 0.0).count();
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let ratio = mean(&inelastic) / mean(&elastic).abs();
    outcome(
        positive == 10 && ratio >= 5.0,
        format!("gap > 0 in {positive}/10 at b=0.1; mean gap shrinks {ratio:.1}× at b=100"),
    )
}

fn dominance_pairs() -> Outcome {
    let mut r = rng(10);
    let mut fosd = 0;
    let mut mps = 0;
    for _ in 0..50 {
        let p = EconomyParams {
            lambda: r.random_range(0.01..0.2),
            v: r.random_range(0.05..0.5),
            ..figure_params()
        };
        let h = optimal_hiring_exogenous(&p, r.random_range(0.8..0.99));
        let support: Vec<usize> = (2..=18).collect();
        let mass: Vec<f64> = support.iter().map(|_| r.random_range(0.0..1.0)).collect();
        let base = DegreeDistribution::new(support.clone(), mass.clone()).unwrap();

        // move part of one atom up by a random number of links
        let from = r.random_range(0..support.len());
        let shift = r.random_range(1..=2);
        let moved = mass[from] * r.random_range(0.2..1.0);
        let mut up_support = support.clone();
        up_support.push(support[from] + shift);
        let mut up_mass = mass.clone();
        up_mass[from] -= moved;
        up_mass.push(moved);
        let dominating = DegreeDistribution::new(up_support, up_mass).unwrap();
        fosd += (aggregate_unemployment(&dominating, h, &p).unwrap()
            < aggregate_unemployment(&base, h, &p).unwrap()) as usize;

        // split part of one atom symmetrically around it
        let at = r.random_range(1..support.len() - 1);
        let d = r.random_range(1..support[at].min(20 - support[at]));
        let split = mass[at] * r.random_range(0.2..1.0);
        let mut s_support = support.clone();
        let mut s_mass = mass.clone();
        s_mass[at] -= split;
        s_support.extend([support[at] - d, support[at] + d]);
        s_mass.extend([split / 2.0, split / 2.0]);
        let spread = DegreeDistribution::new(s_support, s_mass).unwrap();
        assert!((spread.mean - base.mean).abs() < 1e-12);
        mps += (aggregate_unemployment(&spread, h, &p).unwrap() > aggregate_unemployment(&base, h, &p).unwrap())
            as usize;
    }
    outcome(fosd == 50 && mps == 50, format!("FOSD strict in {fosd}/50, MPS strict in {mps}/50"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("conservation and balance", conservation_and_balance, Duration::from_secs(30)),
        ("monte carlo validation", monte_carlo, Duration::from_secs(600)),
        ("regular closed form", closed_form_agreement, Duration::from_secs(60)),
        ("topology ordering", topology_ordering, Duration::from_secs(900)),
        ("neighbor and degree correlation signs", panel_signs, Duration::from_secs(300)),
        ("size premium", size_premium, Duration::from_secs(300)),
        ("calibration round trip", calibration_round_trip, Duration::from_secs(600)),
        ("counterfactual direction", counterfactual_direction, Duration::from_secs(300)),
        ("dominance propositions", dominance_pairs, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let Outcome { pass, detail } = check();
        let elapsed = start.elapsed();
        let ok = pass && elapsed <= *budget;
        failed += !ok as usize;
        println!(
            "[{}] {:>2}. {name}: {detail} ({:.1}s, budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
