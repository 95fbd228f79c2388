//! Reduction from lexicographically first maximal matching (LFMM) on
//! degree-3 bipartite graphs to Fixed-Order Round-Robin. The reduction shows
//! Round-Robin is as sequential as LFMM; here it is built and checked
//! empirically.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::allocate::{round_robin_trace, AgentOrder};
use crate::error::{Error, Result};
use crate::model::generate::rng;
use crate::model::{Instance, ValuationClass};

/// Bipartite graph with left vertices `0..left` and right vertices
/// `0..right`. Edges are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
    degree_bound: Option<usize>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, mut edges: Vec<(usize, usize)>, degree_bound: Option<usize>) -> Result<Self> {
        if left == 0 {
            return Err(Error::InvalidGraph("need at least one left vertex".into()));
        }
        if left < right {
            return Err(Error::InvalidGraph(format!(
                "need at least as many left vertices as right ones, got {left} < {right}"
            )));
        }
        for &(x, y) in &edges {
            if x >= left || y >= right {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside {left}x{right}",
                    x + 1,
                    y + 1
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = BipartiteGraph {
            left,
            right,
            edges,
            degree_bound,
        };
        if let Some(bound) = degree_bound {
            if g.max_degree() > bound {
                return Err(Error::InvalidGraph(format!(
                    "maximum degree {} exceeds the bound {bound}",
                    g.max_degree()
                )));
            }
        }
        Ok(g)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.edges.binary_search(&(x, y)).is_ok()
    }

    /// Right neighbours of `x` in increasing order.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.edges.partition_point(|&(a, _)| a < x);
        self.edges[start..].iter().take_while(move |&&(a, _)| a == x).map(|&(_, y)| y)
    }

    pub fn max_degree(&self) -> usize {
        let mut deg_l = vec![0; self.left];
        let mut deg_r = vec![0; self.right];
        for &(x, y) in &self.edges {
            deg_l[x] += 1;
            deg_r[y] += 1;
        }
        deg_l.into_iter().chain(deg_r).max().unwrap_or(0)
    }
}

/// On-disk graph format with 1-based edge endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let edges = file
        .edges
        .iter()
        .map(|&(x, y)| {
            if x == 0 || y == 0 {
                Err(Error::InvalidGraph("edge endpoints are 1-based".into()))
            } else {
                Ok((x - 1, y - 1))
            }
        })
        .collect::<Result<_>>()?;
    BipartiteGraph::new(file.left, file.right, edges, file.degree_bound)
}

pub fn format_graph(g: &BipartiteGraph) -> String {
    let file = GraphFile {
        left: g.left,
        right: g.right,
        edges: g.edges.iter().map(|&(x, y)| (x + 1, y + 1)).collect(),
        degree_bound: g.degree_bound,
    };
    let mut out = serde_json::to_string(&file).expect("graph serializes");
    out.push('\n');
    out
}

/// Greedy matching: each left vertex in index order takes its smallest free
/// neighbour. `result[x]` is `x`'s partner.
pub fn lfmm(g: &BipartiteGraph) -> Vec<Option<usize>> {
    let mut taken = vec![false; g.right];
    (0..g.left)
        .map(|x| {
            let y = g.neighbors(x).find(|&y| !taken[y])?;
            taken[y] = true;
            Some(y)
        })
        .collect()
}

/// One agent per left vertex, one item per right vertex; agent `x` values
/// item `y` at `right - y` when they are adjacent and 0 otherwise. Agents
/// pick in index order.
pub fn reduce_lfmm_to_rr(g: &BipartiteGraph) -> Result<(Instance, AgentOrder)> {
    if g.max_degree() > 3 {
        log::warn!(
            "graph has degree {} > 3; the reduced instance exceeds the degree-3 setting",
            g.max_degree()
        );
    }
    let m = g.right;
    let mut rows = vec![vec![0u64; m]; g.left];
    for &(x, y) in &g.edges {
        rows[x][y] = (m - y) as u64;
    }
    let inst = Instance::from_rows(g.left, m, ValuationClass::RestrictedAdditive, rows)?;
    Ok((inst, AgentOrder::identity(g.left)))
}

/// Whether every agent's first Round-Robin pick on the reduced instance is
/// its LFMM partner (no pick exactly when unmatched).
pub fn check_equivalence(g: &BipartiteGraph) -> Result<bool> {
    let (inst, order) = reduce_lfmm_to_rr(g)?;
    let trace = round_robin_trace(&inst, &order)?;
    let matching = lfmm(g);
    Ok((0..g.left).all(|x| trace.first_round_pick(x) == matching[x]))
}

/// A seeded random bipartite graph with every degree at most `bound`.
/// Candidate edges are tried in shuffled order and kept while both endpoints
/// have room.
pub fn random_bounded_graph(left: usize, right: usize, bound: usize, density: f64, seed: u64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParams(format!("density {density} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let mut candidates: Vec<(usize, usize)> = (0..left).flat_map(|x| (0..right).map(move |y| (x, y))).collect();
    candidates.shuffle(&mut rng);
    let mut deg_l = vec![0; left];
    let mut deg_r = vec![0; right];
    let mut edges = Vec::new();
    for (x, y) in candidates {
        if deg_l[x] < bound && deg_r[y] < bound && rng.gen_bool(density) {
            deg_l[x] += 1;
            deg_r[y] += 1;
            edges.push((x, y));
        }
    }
    BipartiteGraph::new(left, right, edges, Some(bound))
}
