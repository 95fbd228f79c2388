//! Envy-freeability, minimal envy-eliminating payments, and payments under
//! user constraints of the form "if `i` is paid more than `x`, then `j` must
//! be paid more than `y`".

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, PaymentConstraint, PaymentVector};
use crate::pram::{apsp_minplus, transitive_closure, BoolMatrix, CostMeter, Dist, DistMatrix, Metered};
use crate::verify::{envy_graph, EnvyGraph};

/// Shortest paths on the negated envy graph. A negative cycle there is a
/// positive-weight envy cycle, which no payment vector can cancel.
fn negated_apsp(graph: &EnvyGraph) -> Result<Metered<DistMatrix>> {
    let n = graph.n();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| Dist::Finite(-graph.weight(i, j))).collect())
        .collect();
    let closure = apsp_minplus(&DistMatrix::from_rows(rows)?)?;
    Ok(Metered::new(closure.value.matrix, closure.cost))
}

pub fn is_envy_freeable(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    match negated_apsp(&envy_graph(inst, alloc)?) {
        Ok(_) => Ok(true),
        Err(Error::NegativeCycle { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The componentwise-minimal payments making `alloc` envy-free: `q_i` is the
/// heaviest envy path starting at `i` (the empty path counts, so `q_i >= 0`).
pub fn envy_eliminating_payments(inst: &Instance, alloc: &Allocation) -> Result<PaymentVector> {
    Ok(envy_eliminating_payments_metered(inst, alloc)?.value)
}

pub fn envy_eliminating_payments_metered(inst: &Instance, alloc: &Allocation) -> Result<Metered<PaymentVector>> {
    let dist = match negated_apsp(&envy_graph(inst, alloc)?) {
        Err(Error::NegativeCycle { .. }) => return Err(Error::NotEnvyFreeable),
        other => other?,
    };
    let n = inst.n();
    let q = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| dist.value.get(i, j).finite())
                .map(|d| (-d).max(0) as u64)
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok(Metered::new(PaymentVector(q), dist.cost.then(CostMeter::step((n * n) as u64))))
}

/// Result of a constrained payment computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PaymentOutcome {
    Satisfied(PaymentVector),
    NoSatisfyingVector,
}

impl PaymentOutcome {
    pub fn payments(&self) -> Option<&PaymentVector> {
        match self {
            PaymentOutcome::Satisfied(q) => Some(q),
            PaymentOutcome::NoSatisfyingVector => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsidyConfig {
    /// Largest grid solved with an explicit transitive closure; bigger grids
    /// use worklist reachability, which gives the same answer.
    pub closure_cap: usize,
    /// Largest grid accepted at all.
    pub grid_cap: usize,
}

impl Default for SubsidyConfig {
    fn default() -> Self {
        SubsidyConfig {
            closure_cap: 4096,
            grid_cap: 1 << 22,
        }
    }
}

/// The payment rejection grid: vertex `(i, j)` means "pay agent `i` exactly
/// `j` dollars", for `j` in `0..=m*Delta`. Rejected vertices are payments
/// that cannot appear in any feasible vector.
///
/// Edges are not stored. Edge `(k, l) -> (i, j)` exists when paying `k` more
/// than `l` forces `i` above `j`, i.e. `v_i(X_i) + j < v_i(X_k) + l + 1`, and
/// each constraint `(i, x, j, y)` adds `(i, x) -> (j, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RejectionGraph {
    n: usize,
    levels: usize,
    envy: EnvyGraph,
    constraints: Vec<PaymentConstraint>,
    seeds: Vec<usize>,
    rejected: Vec<bool>,
}

impl RejectionGraph {
    pub fn new(inst: &Instance, alloc: &Allocation, constraints: &[PaymentConstraint]) -> Result<Self> {
        let envy = envy_graph(inst, alloc)?;
        let n = inst.n();
        let top = (inst.m() as u128) * u128::from(inst.delta());
        let levels = usize::try_from(top + 1).unwrap_or(usize::MAX);
        for c in constraints {
            if c.i >= n || c.j >= n {
                return Err(Error::InvalidConstraint(format!(
                    "agent {} out of range 1..={n}",
                    c.i.max(c.j) + 1
                )));
            }
            if u128::from(c.x) > top || u128::from(c.y) > top {
                return Err(Error::InvalidConstraint(format!(
                    "dollar amounts must lie in 0..={top}, got x={} y={}",
                    c.x, c.y
                )));
            }
        }
        // (i, j) is rejected from the start when agent i still envies someone
        // after receiving j dollars while that someone receives nothing.
        let mut seeds = Vec::new();
        for i in 0..n {
            let worst = (0..n).map(|k| envy.weight(i, k)).max().unwrap_or(0);
            let upto = usize::try_from(worst.max(0)).unwrap_or(usize::MAX).min(levels);
            seeds.extend((0..upto).map(|j| i * levels + j));
        }
        Ok(RejectionGraph {
            n,
            levels,
            envy,
            constraints: constraints.to_vec(),
            seeds,
            rejected: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dollar levels per agent, `m*Delta + 1`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn vertex_count(&self) -> usize {
        self.n.saturating_mul(self.levels)
    }

    pub fn vertex(&self, agent: usize, level: usize) -> usize {
        agent * self.levels + level
    }

    /// Initially rejected vertices.
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        let (k, l) = (from / self.levels, from % self.levels);
        let (i, j) = (to / self.levels, to % self.levels);
        let envy = (j as i128) < i128::from(self.envy.weight(i, k)) + l as i128 + 1;
        envy || self.constraints.iter().any(|c| {
            (c.i, c.x, c.j, c.y) == (k, l as u64, i, j as u64)
        })
    }

    /// Rejection marks after `reject_*`; empty before.
    pub fn rejected(&self) -> &[bool] {
        &self.rejected
    }

    /// Mark everything reachable from the seeds using the transitive closure
    /// of the full grid.
    pub fn reject_by_closure(&mut self) -> CostMeter {
        let size = self.vertex_count();
        let mut adj = BoolMatrix::empty(size);
        let rows: Vec<Vec<bool>> = (0..size)
            .into_par_iter()
            .map(|u| (0..size).map(|v| self.has_edge(u, v)).collect())
            .collect();
        for (u, row) in rows.iter().enumerate() {
            for (v, &edge) in row.iter().enumerate() {
                if edge {
                    adj.set(u, v, true);
                }
            }
        }
        let closure = transitive_closure(&adj);
        let mut rejected = vec![false; size];
        for &s in &self.seeds {
            rejected[s] = true;
            for (v, &reach) in closure.value.matrix.row(s).iter().enumerate() {
                rejected[v] |= reach;
            }
        }
        self.rejected = rejected;
        CostMeter::step((size * size) as u64)
            .then(closure.cost)
            .then(CostMeter::step((size * size) as u64))
    }

    /// Same marks as `reject_by_closure`, without the closure matrix. Every
    /// row's rejected set is a prefix of levels (an agent's own row has
    /// self-edges `(i, l) -> (i, j)` for all `j <= l`), so one number per
    /// agent describes it.
    pub fn reject_by_worklist(&mut self) {
        let (n, levels) = (self.n, self.levels as i128);
        // top[i] = highest rejected level of row i, or -1.
        let mut top = vec![-1i128; n];
        for &s in &self.seeds {
            let (i, j) = (s / self.levels, (s % self.levels) as i128);
            top[i] = top[i].max(j);
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| top[i] >= 0).collect();
        let mut queued: Vec<bool> = top.iter().map(|&t| t >= 0).collect();
        while let Some(k) = queue.pop_front() {
            queued[k] = false;
            let l = top[k];
            let mut raise = |i: usize, level: i128, top: &mut Vec<i128>| {
                let level = level.min(levels - 1);
                if level > top[i] {
                    top[i] = level;
                    if !queued[i] {
                        queued[i] = true;
                        queue.push_back(i);
                    }
                }
            };
            for i in 0..n {
                raise(i, i128::from(self.envy.weight(i, k)) + l, &mut top);
            }
            for c in &self.constraints {
                if c.i == k && i128::from(c.x) <= l {
                    raise(c.j, i128::from(c.y), &mut top);
                }
            }
        }
        self.rejected = (0..n)
            .flat_map(|i| (0..levels).map(move |j| (i, j)))
            .map(|(i, j)| j <= top[i])
            .collect();
    }

    /// Lowest unrejected level in every row, or `None` if a row is fully
    /// rejected.
    pub fn minimum_vector(&self) -> Option<PaymentVector> {
        (0..self.n)
            .map(|i| {
                let row = &self.rejected[i * self.levels..(i + 1) * self.levels];
                row.iter().position(|&r| !r).map(|j| j as u64)
            })
            .collect::<Option<Vec<u64>>>()
            .map(PaymentVector)
    }
}

pub fn constrained_payments(
    inst: &Instance,
    alloc: &Allocation,
    constraints: &[PaymentConstraint],
) -> Result<PaymentOutcome> {
    constrained_payments_with(inst, alloc, constraints, &SubsidyConfig::default())
}

/// The componentwise-minimal payment vector in `[0, m*Delta]^n` that is
/// envy-eliminating and satisfies every constraint.
pub fn constrained_payments_with(
    inst: &Instance,
    alloc: &Allocation,
    constraints: &[PaymentConstraint],
    config: &SubsidyConfig,
) -> Result<PaymentOutcome> {
    let mut graph = RejectionGraph::new(inst, alloc, constraints)?;
    let vertices = graph.vertex_count();
    if vertices > config.grid_cap || graph.levels() == usize::MAX {
        return Err(Error::GridTooLarge {
            vertices,
            cap: config.grid_cap,
        });
    }
    if vertices <= config.closure_cap {
        graph.reject_by_closure();
    } else {
        graph.reject_by_worklist();
    }
    debug_assert!(rejections_are_prefixes(&graph));
    Ok(match graph.minimum_vector() {
        Some(q) => PaymentOutcome::Satisfied(q),
        None => PaymentOutcome::NoSatisfyingVector,
    })
}

fn rejections_are_prefixes(graph: &RejectionGraph) -> bool {
    graph
        .rejected()
        .chunks(graph.levels())
        .all(|row| row.windows(2).all(|w| w[0] || !w[1]))
}
