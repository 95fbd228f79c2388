//! Direct allocation procedures: Round-Robin, the two-agent EF1 + fPO split,
//! identical-agent striping and welfare maximisation.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, ValuationClass};
use crate::pram::{bitonic_sort_by, par_reduce, ArgMax};
use crate::verify::check_ef1;

/// A strict priority order over agents (`sigma[0]` picks first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AgentOrder(Vec<usize>);

impl AgentOrder {
    pub fn new(sigma: Vec<usize>, n: usize) -> Result<Self> {
        if sigma.len() != n {
            return Err(Error::InvalidOrder(format!(
                "order lists {} agents, instance has {n}",
                sigma.len()
            )));
        }
        let mut seen = vec![false; n];
        for &agent in &sigma {
            if agent >= n {
                return Err(Error::InvalidOrder(format!("agent {} out of range", agent + 1)));
            }
            if std::mem::replace(&mut seen[agent], true) {
                return Err(Error::InvalidOrder(format!("agent {} listed twice", agent + 1)));
            }
        }
        Ok(AgentOrder(sigma))
    }

    pub fn identity(n: usize) -> Self {
        AgentOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pick {
    /// 1-based round number.
    pub round: usize,
    pub agent: usize,
    pub item: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRobinTrace {
    pub allocation: Allocation,
    pub picks: Vec<Pick>,
}

impl RoundRobinTrace {
    /// The item `agent` took in round 1, if any.
    pub fn first_round_pick(&self, agent: usize) -> Option<usize> {
        self.picks
            .iter()
            .take_while(|p| p.round == 1)
            .find(|p| p.agent == agent)
            .map(|p| p.item)
    }
}

pub fn round_robin(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    Ok(round_robin_trace(inst, order)?.allocation)
}

/// Round-Robin with the pick log. Each agent in turn takes its most valued
/// available item (smallest index on ties) and passes if nothing left has
/// positive value to it. Stops after a round in which nobody picks; items no
/// one values stay unallocated.
pub fn round_robin_trace(inst: &Instance, order: &AgentOrder) -> Result<RoundRobinTrace> {
    if order.0.len() != inst.n() {
        return Err(Error::InvalidOrder(format!(
            "order lists {} agents, instance has {}",
            order.0.len(),
            inst.n()
        )));
    }
    let mut owners: Vec<Option<usize>> = vec![None; inst.m()];
    let mut picks = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut picked_any = false;
        for &agent in &order.0 {
            let best = (0..inst.m())
                .filter(|&j| owners[j].is_none())
                .map(|j| (inst.value(agent, j), j))
                .filter(|&(v, _)| v > 0)
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            if let Some((_, item)) = best {
                owners[item] = Some(agent);
                picks.push(Pick { round, agent, item });
                picked_any = true;
            }
        }
        if !picked_any {
            break;
        }
    }
    Ok(RoundRobinTrace {
        allocation: Allocation::from_owners(&owners, inst.n())?,
        picks,
    })
}

/// Position of an item in the nonincreasing `v_1/v_2` order. Items agent 2
/// does not value (but agent 1 does) have infinite ratio and come first;
/// items nobody values come last.
fn ratio_class(v1: u64, v2: u64) -> u8 {
    match (v1, v2) {
        (0, 0) => 2,
        (_, 0) => 0,
        _ => 1,
    }
}

fn ratio_cmp(inst: &Instance, a: usize, b: usize) -> Ordering {
    let (a1, a2) = (inst.value(0, a), inst.value(1, a));
    let (b1, b2) = (inst.value(0, b), inst.value(1, b));
    let (ca, cb) = (ratio_class(a1, a2), ratio_class(b1, b2));
    if ca != cb || ca != 1 {
        return ca.cmp(&cb);
    }
    // a before b iff a1/a2 > b1/b2, compared without division.
    (u128::from(b1) * u128::from(a2)).cmp(&(u128::from(a1) * u128::from(b2)))
}

/// Items in nonincreasing `v_1/v_2` order (ties by index), via a bitonic sort.
pub fn ratio_order(inst: &Instance) -> Result<Vec<usize>> {
    if inst.n() != 2 {
        return Err(Error::WrongAgentCount {
            expected: 2,
            actual: inst.n(),
        });
    }
    let items: Vec<usize> = (0..inst.m()).collect();
    Ok(bitonic_sort_by(&items, |&a, &b| ratio_cmp(inst, a, b)).value.sorted)
}

/// A contiguous split of the ratio order: agent 1 takes `order[..cut]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoAgentSplit {
    pub allocation: Allocation,
    pub order: Vec<usize>,
    pub cut: usize,
    /// Set when the binary search came up empty and a linear scan was needed.
    pub used_fallback: bool,
}

fn split_at(inst: &Instance, order: &[usize], cut: usize) -> Result<Allocation> {
    Allocation::for_instance(vec![order[..cut].to_vec(), order[cut..].to_vec()], inst)
}

/// EF1 and fPO allocation for two agents: binary search over the prefix
/// splits of the ratio order.
pub fn ef1_fpo_two_agents(inst: &Instance) -> Result<Allocation> {
    Ok(two_agent_split(inst)?.allocation)
}

pub fn two_agent_split(inst: &Instance) -> Result<TwoAgentSplit> {
    let order = ratio_order(inst)?;
    // Agent 1 must keep the items only it values and may not take items it
    // values at 0; any cut in between is fPO.
    let (v1, v2) = (inst.row(0), inst.row(1));
    let min_cut = (0..inst.m()).filter(|&j| v1[j] > 0 && v2[j] == 0).count();
    let max_cut = (0..inst.m()).filter(|&j| v1[j] > 0).count();

    let (mut lo, mut hi) = (min_cut, max_cut);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        let alloc = split_at(inst, &order, mid)?;
        let report = check_ef1(inst, &alloc)?;
        match report.witness {
            None => {
                return Ok(TwoAgentSplit {
                    allocation: alloc,
                    order,
                    cut: mid,
                    used_fallback: false,
                })
            }
            // Agent 1 envies beyond one good: give agent 1 more.
            Some(w) if w.envier == 0 => lo = mid + 1,
            Some(_) => {
                if mid == min_cut {
                    break;
                }
                hi = mid - 1;
            }
        }
    }

    log::warn!("two-agent binary search found no EF1 split; scanning all splits");
    for cut in min_cut..=max_cut {
        let alloc = split_at(inst, &order, cut)?;
        if check_ef1(inst, &alloc)?.holds {
            return Ok(TwoAgentSplit {
                allocation: alloc,
                order,
                cut,
                used_fallback: true,
            });
        }
    }
    unreachable!("an EF1 + fPO split always exists for two additive agents")
}

/// EF1 for identical agents: rank positively valued items by nonincreasing
/// value (ties by index) and deal them out along `order`. Matches Round-Robin
/// with the same order exactly.
pub fn ef1_identical(inst: &Instance, order: &AgentOrder) -> Result<Allocation> {
    if inst.class() != ValuationClass::Identical {
        return Err(Error::ClassMismatch(format!(
            "identical-agent striping needs an identical instance, got {}",
            inst.class()
        )));
    }
    if order.0.len() != inst.n() {
        return Err(Error::InvalidOrder(format!(
            "order lists {} agents, instance has {}",
            order.0.len(),
            inst.n()
        )));
    }
    let values = inst.row(0);
    let positive: Vec<usize> = (0..inst.m()).filter(|&j| values[j] > 0).collect();
    let ranked = bitonic_sort_by(&positive, |&a, &b| values[b].cmp(&values[a])).value.sorted;
    let n = inst.n();
    let mut owners = vec![None; inst.m()];
    for (rank, &item) in ranked.iter().enumerate() {
        owners[item] = Some(order.0[rank % n]);
    }
    Allocation::from_owners(&owners, n)
}

/// Every item to an agent with the highest value for it (smallest index on
/// ties), through a per-item arg-max reduction.
pub fn welfare_max_allocation(inst: &Instance) -> Result<Allocation> {
    let owners: Vec<Option<usize>> = (0..inst.m())
        .into_par_iter()
        .map(|j| {
            let bids: Vec<Option<(u64, usize)>> = (0..inst.n()).map(|i| Some((inst.value(i, j), i))).collect();
            par_reduce(&bids, &ArgMax).value.map(|(_, agent)| agent)
        })
        .collect();
    Allocation::from_owners(&owners, inst.n())
}
