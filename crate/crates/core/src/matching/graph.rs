use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Instance, ValuationClass};
use crate::pram::bitonic_sort_by;

/// The bucketed bipartite graph: item vertices (real items in bucket order,
/// then `m*n - m` dummies) against agent copies `b(i, c)`.
///
/// Copies are stored 0-based: copy `c` of agent `i` is column `c * n + i` and
/// carries the multiplier `c + 1`. A real item in bucket `f` (1-based, highest
/// inherent value first) joins every copy of every agent valuing it with
/// weight `-m^(t-f) * (c + 1)`; dummies join every copy with weight 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketedGraph {
    n: usize,
    m: usize,
    t: usize,
    items: Vec<usize>,
    buckets: Vec<usize>,
    inherent: Vec<u64>,
    discarded: Vec<usize>,
    weights: Vec<Option<i128>>,
}

impl BucketedGraph {
    /// Agents.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real items after discarding those nobody values.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of buckets (distinct inherent values).
    pub fn t(&self) -> usize {
        self.t
    }

    /// Vertices per side, `m * n`.
    pub fn size(&self) -> usize {
        self.m * self.n
    }

    pub fn dummy_count(&self) -> usize {
        self.size() - self.m
    }

    /// Original item index of a real item vertex, `None` for dummies.
    pub fn item_of(&self, vertex: usize) -> Option<usize> {
        self.items.get(vertex).copied()
    }

    /// 1-based bucket of a real item vertex.
    pub fn bucket_of(&self, vertex: usize) -> Option<usize> {
        self.buckets.get(vertex).copied()
    }

    /// Bucket values, highest first.
    pub fn inherent_values(&self) -> &[u64] {
        &self.inherent
    }

    /// Items nobody values; they are left out of the graph.
    pub fn discarded(&self) -> &[usize] {
        &self.discarded
    }

    pub fn copy_column(&self, agent: usize, copy: usize) -> usize {
        copy * self.n + agent
    }

    /// `(agent, copy)` of a column.
    pub fn copy_of(&self, column: usize) -> (usize, usize) {
        (column % self.n, column / self.n)
    }

    pub fn weight(&self, vertex: usize, column: usize) -> Option<i128> {
        self.weights[vertex * self.size() + column]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        (0..self.size()).filter(|&c| self.weight(vertex, c).is_some()).count()
    }
}

/// Build the bucketed graph for a restricted additive (or binary, or
/// identical) instance.
pub fn build_bucketed_graph(inst: &Instance) -> Result<BucketedGraph> {
    // Binary and identical valuations are restricted additive too.
    if inst.class() == ValuationClass::Additive {
        return Err(Error::ClassMismatch(format!(
            "bucketed matching needs a restricted additive instance, got {}",
            inst.class()
        )));
    }
    let n = inst.n();
    let (kept, discarded): (Vec<usize>, Vec<usize>) = (0..inst.m()).partition(|&j| inst.is_valued_by_anyone(j));
    let m = kept.len();

    // Bucket order: strictly decreasing inherent value, ties by item index.
    let items = bitonic_sort_by(&kept, |&a, &b| inst.item_value(b).cmp(&inst.item_value(a)))
        .value
        .sorted;
    let mut inherent: Vec<u64> = Vec::new();
    let mut buckets = Vec::with_capacity(m);
    for &j in &items {
        let v = inst.item_value(j);
        if inherent.last() != Some(&v) {
            inherent.push(v);
        }
        buckets.push(inherent.len());
    }
    let t = inherent.len();

    // powers[e] = m^e for e < t; weights reach m^(t-1) * m = m^t.
    let overflow = || Error::WeightOverflow { m, t };
    let base = m as i128;
    let mut powers = Vec::with_capacity(t);
    let mut p: i128 = 1;
    for _ in 0..t {
        powers.push(p);
        p = p.checked_mul(base).ok_or_else(overflow)?;
    }
    if t > 0 {
        p.checked_mul(base).ok_or_else(overflow)?;
    }

    let size = m * n;
    let weights: Vec<Option<i128>> = (0..size)
        .into_par_iter()
        .flat_map_iter(|vertex| {
            let row: Vec<Option<i128>> = (0..size)
                .map(|column| {
                    let (agent, copy) = (column % n, column / n);
                    match items.get(vertex) {
                        None => Some(0),
                        Some(&j) if inst.value(agent, j) > 0 => {
                            let f = buckets[vertex];
                            Some(-(powers[t - f] * (copy as i128 + 1)))
                        }
                        Some(_) => None,
                    }
                })
                .collect();
            row
        })
        .collect();

    Ok(BucketedGraph {
        n,
        m,
        t,
        items,
        buckets,
        inherent,
        discarded,
        weights,
    })
}
