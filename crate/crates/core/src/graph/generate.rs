//! Random network generators with a controlled mean degree.
//!
//! All generators are deterministic for a fixed seed and only ever return
//! connected simple graphs.

use super::LaborFlowNetwork;
use crate::error::{LfnError, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

const MAX_ATTEMPTS: usize = 1000;

/// Degree-distribution family of a stylized network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Every firm has the same degree.
    Regular,
    /// Erdős–Rényi, binomial degrees.
    Binomial,
    /// Preferential attachment, Pareto-tailed degrees.
    Pareto,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Regular, Topology::Binomial, Topology::Pareto];

    pub fn generate(self, n: usize, mean_degree: f64, seed: u64) -> Result<LaborFlowNetwork> {
        match self {
            Topology::Regular => {
                if mean_degree.fract() != 0.0 || mean_degree < 1.0 {
                    return Err(LfnError::InfeasibleDegree(format!(
                        "regular networks need a positive integer degree, got {mean_degree}"
                    )));
                }
                generate_regular(n, mean_degree as usize, seed)
            }
            Topology::Binomial => generate_binomial(n, mean_degree, seed),
            Topology::Pareto => generate_pareto(n, mean_degree, seed),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Regular => "regular",
            Topology::Binomial => "binomial",
            Topology::Pareto => "pareto",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = LfnError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(Topology::Regular),
            "binomial" => Ok(Topology::Binomial),
            "pareto" => Ok(Topology::Pareto),
            other => Err(LfnError::InvalidParameter {
                name: "topology",
                reason: format!("unknown topology `{other}` (expected regular, binomial or pareto)"),
            }),
        }
    }
}

fn adjacency_from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Uniformly random connected `k`-regular simple graph on `n` nodes.
///
/// Stubs are paired in rounds; pairs that would create a loop or a multi-edge
/// are returned to the pool and re-shuffled (Steger–Wormald). Stuck or
/// disconnected attempts are discarded and restarted.
pub fn generate_regular(n: usize, k: usize, seed: u64) -> Result<LaborFlowNetwork> {
    if k == 0 || k >= n || !(n * k).is_multiple_of(2) {
        return Err(LfnError::InfeasibleDegree(format!(
            "no simple {k}-regular graph on {n} nodes (need 1 <= k < n and n*k even)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let Some(edges) = try_regular_pairing(n, k, &mut rng) else {
            continue;
        };
        let net = LaborFlowNetwork::from_sorted_adjacency(adjacency_from_pairs(n, edges));
        if net.check_connected().is_ok() {
            return Ok(net);
        }
    }
    Err(LfnError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("could not build a connected {k}-regular graph on {n} nodes"),
    })
}

fn try_regular_pairing(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n * k / 2);
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(n * k / 2);
    let mut stubs: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, k)).collect();
    while !stubs.is_empty() {
        // BTreeMap keeps the leftover order independent of hashing.
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && edges.insert((a, b)) {
                order.push((a, b));
            } else {
                *leftover.entry(a).or_default() += 1;
                *leftover.entry(b).or_default() += 1;
            }
        }
        if !leftover.is_empty() {
            let nodes: Vec<usize> = leftover.keys().copied().collect();
            let any_pairable = nodes.iter().enumerate().any(|(x, &a)| {
                nodes[x + 1..].iter().any(|&b| !edges.contains(&(a, b)))
            });
            if !any_pairable {
                return None;
            }
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(node, count)| std::iter::repeat_n(node, count))
            .collect();
    }
    Some(order)
}

/// Erdős–Rényi `G(n, p)` with `p = mean_degree / (n - 1)`, restricted to its
/// largest component.
///
/// Samples whose giant component misses more than 1% of the nodes, or whose
/// realized mean degree is off by more than 10%, are discarded and redrawn.
/// Nodes of the retained component are relabeled densely in their original order.
pub fn generate_binomial(n: usize, mean_degree: f64, seed: u64) -> Result<LaborFlowNetwork> {
    if n < 2 || !(mean_degree > 0.0) || mean_degree > (n - 1) as f64 {
        return Err(LfnError::InfeasibleDegree(format!(
            "binomial networks need 0 < mean_degree <= n - 1, got n={n}, mean_degree={mean_degree}"
        )));
    }
    let p = mean_degree / (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let pairs = sample_gnp(n, p, &mut rng);
        let full = LaborFlowNetwork::from_sorted_adjacency(adjacency_from_pairs(n, pairs));
        let net = largest_component(&full);
        if (net.n() as f64) < 0.99 * n as f64 || net.n() < 2 {
            continue;
        }
        if (net.mean_degree() - mean_degree).abs() > 0.1 * mean_degree {
            continue;
        }
        return Ok(net);
    }
    Err(LfnError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("G(n={n}, p={p}) never produced a giant component covering 99% of nodes"),
    })
}

/// Geometric skipping over the lower triangle (Batagelj & Brandes), `O(n + m)`.
fn sample_gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                pairs.push((w, v));
            }
        }
        return pairs;
    }
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            pairs.push((w as usize, v));
        }
    }
    pairs
}

fn largest_component(net: &LaborFlowNetwork) -> LaborFlowNetwork {
    let labels = net.component_labels();
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    let giant = (0..count).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))).unwrap();
    let mut new_id = vec![usize::MAX; net.n()];
    let mut next = 0;
    for (i, &l) in labels.iter().enumerate() {
        if l == giant {
            new_id[i] = next;
            next += 1;
        }
    }
    let mut adj = vec![Vec::new(); next];
    for i in 0..net.n() {
        if new_id[i] == usize::MAX {
            continue;
        }
        adj[new_id[i]] = net.neighbors(i).iter().map(|&j| new_id[j]).collect();
    }
    LaborFlowNetwork::from_sorted_adjacency(adj)
}

/// Preferential attachment with `m = mean_degree / 2` edges per arriving node.
///
/// Growth starts from a complete graph on `m + 1` nodes; every later node links
/// to `m` distinct existing nodes chosen with probability proportional to
/// degree. The minimum degree is therefore `m` and the graph is connected.
pub fn generate_pareto(n: usize, mean_degree: f64, seed: u64) -> Result<LaborFlowNetwork> {
    let half = mean_degree / 2.0;
    if !(half >= 1.0) || half.fract() != 0.0 {
        return Err(LfnError::InfeasibleDegree(format!(
            "preferential attachment needs an even integer mean degree >= 2, got {mean_degree}"
        )));
    }
    let m = half as usize;
    if n <= m + 1 {
        return Err(LfnError::InfeasibleDegree(format!(
            "preferential attachment with m={m} needs more than {} nodes, got {n}",
            m + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(m * n);
    // Each endpoint appears once per incident edge, so uniform draws from it
    // are degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * n);
    for a in 0..=m {
        for b in (a + 1)..=m {
            pairs.push((a, b));
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for node in (m + 1)..n {
        chosen.clear();
        while chosen.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            pairs.push((t, node));
            endpoints.push(t);
            endpoints.push(node);
        }
    }
    Ok(LaborFlowNetwork::from_sorted_adjacency(adjacency_from_pairs(n, pairs)))
}
