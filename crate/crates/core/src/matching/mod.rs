//! EF1 + PO for restricted additive valuations through a maximum-weight
//! perfect matching on a bucketed item/agent-copy graph, and alpha-rounding,
//! which trades exactness for fewer buckets when values are spread out.
//!
//! Copy weights grow linearly (`c`) inside a bucket and geometrically
//! (`m^(t-f)`) across buckets, so an optimal matching hands out high-value
//! items first and spreads them evenly over agents' copies.

mod graph;
mod hungarian;
mod rounding;

pub use graph::{build_bucketed_graph, BucketedGraph};
pub use hungarian::max_weight_assignment;
pub use rounding::{alpha_round, Alpha, AlphaRounding};

use crate::error::Result;
use crate::model::{Allocation, Instance};

/// A perfect matching of a [`BucketedGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatching {
    /// Item vertex -> agent-copy column.
    pub pairs: Vec<usize>,
    pub total_weight: i128,
}

pub fn max_weight_perfect_matching(g: &BucketedGraph) -> Result<PerfectMatching> {
    let (pairs, total_weight) = max_weight_assignment(g.size(), |v, c| g.weight(v, c))?;
    Ok(PerfectMatching { pairs, total_weight })
}

/// Everything `ef1_po_restricted` computed on the way to its allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedOutcome {
    pub allocation: Allocation,
    pub graph: BucketedGraph,
    pub matching: PerfectMatching,
    // column -> original item (None for a dummy)
    copy_items: Vec<Option<usize>>,
}

impl RestrictedOutcome {
    /// Original item matched to copy `copy` (0-based) of `agent`; `None` when
    /// it is a dummy.
    pub fn copy_item(&self, agent: usize, copy: usize) -> Option<usize> {
        self.copy_items[self.graph.copy_column(agent, copy)]
    }
}

pub fn ef1_po_restricted(inst: &Instance) -> Result<Allocation> {
    Ok(ef1_po_restricted_detailed(inst)?.allocation)
}

pub fn ef1_po_restricted_detailed(inst: &Instance) -> Result<RestrictedOutcome> {
    let graph = build_bucketed_graph(inst)?;
    let matching = max_weight_perfect_matching(&graph)?;
    let mut owners = vec![None; inst.m()];
    let mut copy_items = vec![None; graph.size()];
    for (vertex, &column) in matching.pairs.iter().enumerate() {
        if let Some(item) = graph.item_of(vertex) {
            let (agent, _) = graph.copy_of(column);
            owners[item] = Some(agent);
            copy_items[column] = Some(item);
        }
    }
    Ok(RestrictedOutcome {
        allocation: Allocation::from_owners(&owners, inst.n())?,
        graph,
        matching,
        copy_items,
    })
}

/// Round to powers of `1/alpha`, then run the restricted matching on the
/// rounded instance. The result is alpha-EF1 and alpha-PO for `inst`.
pub fn ef1_po_alpha(inst: &Instance, alpha: Alpha) -> Result<Allocation> {
    ef1_po_restricted(&alpha_round(inst, alpha)?.instance)
}

/// Triples `(i, j, c)` (0-based copies) where agent `i` strictly prefers the
/// item on `j`'s copy `c + 1` to the item on its own copy `c`. Dummies count
/// as value 0. Empty for every maximum-weight matching.
pub fn copy_preference_violations(inst: &Instance, outcome: &RestrictedOutcome) -> Vec<(usize, usize, usize)> {
    let n = inst.n();
    let m = outcome.graph.m();
    let value = |agent: usize, item: Option<usize>| item.map_or(0, |g| inst.value(agent, g));
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for c in 0..m.saturating_sub(1) {
                let mine = value(i, outcome.copy_item(i, c));
                let theirs = value(i, outcome.copy_item(j, c + 1));
                if mine < theirs {
                    bad.push((i, j, c));
                }
            }
        }
    }
    bad
}
