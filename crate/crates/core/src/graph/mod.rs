//! Labor flow networks: undirected, unweighted, simple and connected graphs of
//! firms, stored as a compressed adjacency list.

mod generate;
mod io;

pub use generate::{generate_binomial, generate_pareto, generate_regular, Topology};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, write_edge_list_to};

use crate::error::{LfnError, Result};
use serde::Serialize;

/// An undirected simple connected graph of `n` firms.
///
/// Neighbor lists are sorted and stored back to back; `offsets[i]..offsets[i+1]`
/// indexes the neighbors of firm `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaborFlowNetwork {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl LaborFlowNetwork {
    /// Builds a network from a list of undirected edges over nodes `0..n`.
    ///
    /// Duplicate edges (in either orientation) are collapsed. The result must be
    /// a single connected component with no self-loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(LfnError::InvalidParameter {
                name: "n",
                reason: "a network needs at least one firm".into(),
            });
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            for node in [a, b] {
                if node >= n {
                    return Err(LfnError::OutOfRangeId { node, n });
                }
            }
            if a == b {
                return Err(LfnError::SelfLoop { node: a });
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let net = Self::from_sorted_adjacency(adj);
        net.check_connected()?;
        Ok(net)
    }

    /// Assembles a network from per-node neighbor lists that are already sorted,
    /// deduplicated and symmetric. Connectivity is not checked.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(adj.iter().map(Vec::len).sum());
        for list in adj {
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.n();
        if n == 1 {
            return Err(LfnError::IsolatedNode { node: 0 });
        }
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        if count <= 1 {
            return Ok(());
        }
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        // Largest component, ties broken towards the lowest label.
        let giant = (0..count).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))).unwrap();
        let node = labels.iter().position(|&l| l != giant).unwrap();
        Err(LfnError::Disconnected {
            node,
            unreachable: n - sizes[giant],
        })
    }

    /// Connected-component label per node, labels numbered in order of first
    /// appearance.
    pub(crate) fn component_labels(&self) -> Vec<usize> {
        let n = self.n();
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if labels[w] == usize::MAX {
                        labels[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        labels
    }

    /// Number of firms.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbor list of firm `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        self.targets.len() as f64 / self.n() as f64
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    /// Each undirected edge once, as `(smaller, larger)`, in sorted order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n() {
            for &j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Checks every structural invariant. Networks built through the public
    /// constructors always pass; this exists for tests and for ingesting
    /// untrusted data.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            let nb = self.neighbors(i);
            if nb.is_empty() {
                return Err(LfnError::IsolatedNode { node: i });
            }
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(LfnError::InvalidParameter {
                        name: "adjacency",
                        reason: format!("neighbors of {i} not strictly sorted"),
                    });
                }
            }
            for &j in nb {
                if j >= n {
                    return Err(LfnError::OutOfRangeId { node: j, n });
                }
                if j == i {
                    return Err(LfnError::SelfLoop { node: i });
                }
                if !self.has_edge(j, i) {
                    return Err(LfnError::InvalidParameter {
                        name: "adjacency",
                        reason: format!("edge {i}-{j} is not symmetric"),
                    });
                }
            }
        }
        self.check_connected()
    }

    /// Mean of `values` over the neighbors of `i`.
    #[inline]
    pub fn neighbor_mean(&self, i: usize, values: &[f64]) -> f64 {
        let nb = self.neighbors(i);
        nb.iter().map(|&j| values[j]).sum::<f64>() / nb.len() as f64
    }
}

/// Empirical degree distribution of a network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    /// Distinct degree values, ascending.
    pub support: Vec<usize>,
    /// Fraction of firms with each degree.
    pub mass: Vec<f64>,
    pub mean: f64,
}

impl DegreeDistribution {
    /// Builds a distribution from explicit support and mass, normalizing the mass.
    pub fn new(support: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() || support.is_empty() {
            return Err(LfnError::InvalidParameter {
                name: "mass",
                reason: "support and mass must be non-empty and of equal length".into(),
            });
        }
        if mass.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(LfnError::InvalidParameter {
                name: "mass",
                reason: "mass must be finite and nonnegative".into(),
            });
        }
        let total: f64 = mass.iter().sum();
        if total <= 0.0 {
            return Err(LfnError::InvalidParameter {
                name: "mass",
                reason: "total mass is zero".into(),
            });
        }
        let mass: Vec<f64> = mass.iter().map(|m| m / total).collect();
        let mean = support.iter().zip(&mass).map(|(&k, &p)| k as f64 * p).sum();
        Ok(Self {
            support,
            mass,
            mean,
        })
    }

    pub fn variance(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.mass)
            .map(|(&k, &p)| p * (k as f64 - self.mean).powi(2))
            .sum()
    }

    /// Probability that a firm has degree strictly greater than `k`.
    pub fn ccdf(&self, k: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.mass)
            .filter(|(&d, _)| d as f64 > k)
            .map(|(_, &p)| p)
            .sum()
    }
}

pub fn degree_distribution(net: &LaborFlowNetwork) -> DegreeDistribution {
    let mut counts = std::collections::BTreeMap::new();
    for i in 0..net.n() {
        *counts.entry(net.degree(i)).or_insert(0usize) += 1;
    }
    let n = net.n() as f64;
    let support: Vec<usize> = counts.keys().copied().collect();
    let mass: Vec<f64> = counts.values().map(|&c| c as f64 / n).collect();
    DegreeDistribution {
        support,
        mass,
        mean: net.mean_degree(),
    }
}
