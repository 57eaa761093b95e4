mod common;

use common::{random_hiring, rng};
use lfn_core::equilibrium::best_response_sweep;
use lfn_core::experiments::{beveridge_sweep, cost_grid};
use lfn_core::graph::{generate_pareto, generate_regular};
use lfn_core::sim::{panel_from_result, synth_panel};
use lfn_core::*;
use rand::Rng;

fn figure() -> EconomyParams {
    EconomyParams::stylized()
}

#[test]
fn pareto_tail_reaches_twice_the_mean() {
    for seed in 0..5 {
        let d = degree_distribution(&generate_pareto(1000, 6.0, seed).unwrap());
        assert!(d.ccdf(2.0 * 6.0) > 0.0);
    }
}

#[test]
fn regular_figure_calibration_conserves_population() {
    let net = generate_regular(200, 6, 11).unwrap();
    for c in [0.1, 0.3, 0.5, 0.9] {
        let p = figure().with_c(c);
        let h = HiringVector::uniform(200, regular_closed_form(&p, 6.0, 200)).unwrap();
        let s = steady_state(&net, &h, &p).unwrap();
        let total = s.total_employment() + s.total_unemployment();
        assert!((total - 4000.0).abs() < 4000.0 * 1e-12, "c={c}: {total}");
    }
}

#[test]
fn closed_form_is_a_fixed_point_on_regular_nets() {
    let net = generate_regular(200, 6, 2).unwrap();
    for c in [0.1, 0.3, 0.5, 0.9] {
        let p = figure().with_c(c);
        let h = regular_closed_form(&p, 6.0, 200);
        assert!(h > 0.0 && h <= 1.0);
        // the cheapest cost sits at the full-hiring corner
        if c < 0.2 {
            assert_eq!(h, 1.0);
        } else {
            assert!(h < 1.0);
        }
        let next = best_response_sweep(&HiringVector::uniform(200, h).unwrap(), &net, &p).unwrap();
        for &x in next.as_slice() {
            assert!((x - h).abs() < 1e-10, "c={c}: {x} vs {h}");
        }
    }
}

#[test]
fn closed_form_saturates_in_degree() {
    let p = figure().with_c(0.5);
    assert!((regular_closed_form(&p, 50.0, 200) - regular_closed_form(&p, 500.0, 200)).abs() < 1e-15);
}

#[test]
fn path_of_three_matches_oracle() {
    let net = LaborFlowNetwork::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let p = figure();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let mut r = rng(seed);
        let h = HiringVector::new((0..3).map(|_| r.random_range(0.2..=0.9)).collect()).unwrap();
        let (op, oq) = exact_chain_oracle(&net, &h, &p).unwrap();
        let s = steady_state(&net, &h, &p).unwrap();
        for i in 0..3 {
            worst = worst.max((op[i] - s.p[i]).abs()).max((oq[i] - s.q[i]).abs());
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn unemployment_ratio_matches_oracle() {
    let mut r = rng(4);
    for _ in 0..20 {
        let n = r.random_range(3..=8);
        let net = common::random_connected(&mut r, n, 0.3);
        let p = EconomyParams {
            v: r.random_range(0.05..0.95),
            ..figure()
        };
        let h = HiringVector::uniform(n, r.random_range(0.1..=1.0)).unwrap();
        let (_, q) = exact_chain_oracle(&net, &h, &p).unwrap();
        let weight = |i: usize| net.degree(i) as f64 / p.theta(net.degree(i) as f64);
        for i in 1..n {
            assert!((q[i] / q[0] - weight(i) / weight(0)).abs() < 1e-9);
        }
    }
}

#[test]
fn multi_start_on_pareto_net() {
    let net = generate_pareto(200, 6.0, 9).unwrap();
    for c in [0.1, 0.5] {
        let p = figure().with_c(c);
        let reference = solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap().h_star;
        let mut r = rng(c.to_bits());
        for _ in 0..20 {
            let init = random_hiring(&mut r, 200, 0.01).into_inner();
            let opts = SolverOptions {
                init: Some(init),
                ..SolverOptions::default()
            };
            let h = solve_equilibrium(&net, &p, &opts).unwrap().h_star;
            let sup = h.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(sup < 1e-6, "c={c}: {sup}");
        }
    }
}

#[test]
fn single_edge_simulation_matches_steady_state() {
    let net = LaborFlowNetwork::from_edges(2, &[(0, 1)]).unwrap();
    let p = EconomyParams {
        population: 2000,
        ..figure()
    };
    let h = HiringVector::uniform(2, 0.5).unwrap();
    let s = steady_state(&net, &h, &p).unwrap();
    let cfg = SimConfig {
        periods: 200_000,
        burnin: 20_000,
        seed: 8,
        batch_len: 1000,
    };
    let sim = simulate(&net, &p, &h, &cfg).unwrap();
    for i in 0..2 {
        assert!((sim.mean_u[i] - s.unemployment[i]).abs() <= 3.0 * sim.se_u[i]);
        assert!((sim.mean_l[i] - s.employment[i]).abs() <= 3.0 * sim.se_l[i]);
    }
    let outflow: f64 = sim.mean_o.iter().sum();
    let employed: f64 = sim.mean_l.iter().sum();
    let se_o = sim.se_o.iter().map(|x| x * x).sum::<f64>().sqrt();
    let se_l = sim.se_l.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((outflow - p.lambda * employed).abs() <= 3.0 * se_o.hypot(p.lambda * se_l));
}

#[test]
fn synthetic_panel_recovers_separation_rate() {
    let net = generate_pareto(200, 6.0, 6).unwrap();
    let p = figure().with_c(0.5);
    let h = HiringVector::new(solve_equilibrium(&net, &p, &SolverOptions::default()).unwrap().h_star).unwrap();
    let panel = synth_panel(&net, &p, &h, 50_000, 2).unwrap();
    let fit = estimate_lambda(&panel).unwrap();
    assert!((fit.beta - 0.05).abs() < 0.02 * 0.05, "{fit:?}");
    assert!(fit.r2 > 0.99);
    let sim = simulate(&net, &p, &h, &SimConfig::new(20_000, 2)).unwrap();
    assert_eq!(panel_from_result(&sim).rows.len(), 200);
}

#[test]
fn unemployment_falls_with_mean_policy_along_sweeps() {
    let p = figure();
    let costs = cost_grid(0.05, 0.95, 19);
    for t in Topology::ALL {
        let net = t.generate(200, 6.0, 12).unwrap();
        let mut pts = beveridge_sweep(&net, &p, &costs, &SolverOptions::default(), t.as_str(), 12).unwrap();
        pts.sort_by(|a, b| a.h_bar.total_cmp(&b.h_bar));
        for w in pts.windows(2) {
            assert!(w[1].u_agg <= w[0].u_agg + 1e-12, "{t}: {:?} then {:?}", w[0], w[1]);
        }
    }
}

#[test]
fn exogenous_mode_orders_topologies() {
    let seeds: Vec<u64> = (1..=10).collect();
    for w in [0.9, 0.97] {
        let report = dominance_compare(
            &EconomyParams::stylized().with_v(0.3),
            200,
            6.0,
            &seeds,
            WageMode::Exogenous(w),
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(report.ordered, "w={w}: {:?}", report.mean);
        assert!(report.ordered_fraction >= 0.9);
    }
}
