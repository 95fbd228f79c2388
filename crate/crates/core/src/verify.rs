//! Parallel verification of EF, EF1 and EFX, and the envy graph.
//!
//! Every check has the same shape: one bit per (envier, envied[, item]) term,
//! a per-pair reduction over items (OR for EF1, AND for EFX), then a global AND
//! over pairs. All reductions go through [`par_reduce`].
//!
//! Allocations must assign every item that some agent values; items nobody
//! values may stay unallocated.

use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::model::{Allocation, Instance};
use crate::pram::{par_reduce, And, CostMeter, Metered, Min, Or, Sum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Ef,
    Ef1,
    Efx,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Ef => "EF",
            Property::Ef1 => "EF1",
            Property::Efx => "EFX",
        })
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ef" => Ok(Property::Ef),
            "ef1" => Ok(Property::Ef1),
            "efx" => Ok(Property::Efx),
            other => Err(format!("unknown property `{other}` (expected ef, ef1 or efx)")),
        }
    }
}

/// A violating ordered pair. For EF1 `items` is the envied bundle that was
/// examined; for EFX it is the single good whose removal leaves envy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub envier: usize,
    pub envied: usize,
    pub items: Vec<usize>,
}

impl Witness {
    /// Re-evaluate the defining inequality; true iff this is a genuine violation.
    pub fn is_violation(&self, inst: &Instance, alloc: &Allocation, property: Property) -> bool {
        let (i, j) = (self.envier, self.envied);
        if i == j {
            return false;
        }
        let own = inst.bundle_value(i, alloc.bundle(i));
        let other = inst.bundle_value(i, alloc.bundle(j));
        match property {
            Property::Ef => own < other,
            Property::Ef1 => {
                let bundle = alloc.bundle(j);
                !bundle.is_empty() && bundle.iter().all(|&g| own < other - inst.value(i, g))
            }
            Property::Efx => match self.items.as_slice() {
                [g] => alloc.bundle(j).contains(g) && own < other - inst.value(i, *g),
                _ => false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub cost: CostMeter,
}

/// Complete digraph on agents with weight `v_i(X_j) - v_i(X_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyGraph {
    n: usize,
    weights: Vec<i64>,
}

impl EnvyGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, envier: usize, envied: usize) -> i64 {
        self.weights[envier * self.n + envied]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.weights.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }
}

/// `v_i(X_j)` for every agent `i` and bundle `j`, each a tournament sum.
fn cross_values(inst: &Instance, alloc: &Allocation) -> Metered<Vec<u64>> {
    let n = inst.n();
    let cells: Vec<Metered<u64>> = (0..n * n)
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / n, cell % n);
            let terms: Vec<u64> = alloc.bundle(j).iter().map(|&g| inst.value(i, g)).collect();
            par_reduce(&terms, &Sum)
        })
        .collect();
    let cost = CostMeter::all_beside(cells.iter().map(|c| c.cost));
    Metered::new(cells.into_iter().map(|c| c.value).collect(), cost)
}

pub fn envy_graph(inst: &Instance, alloc: &Allocation) -> Result<EnvyGraph> {
    Ok(envy_graph_metered(inst, alloc)?.value)
}

pub fn envy_graph_metered(inst: &Instance, alloc: &Allocation) -> Result<Metered<EnvyGraph>> {
    alloc.require_matches(inst)?;
    let n = inst.n();
    let cross = cross_values(inst, alloc);
    let weights = (0..n * n)
        .map(|cell| {
            let i = cell / n;
            cross.value[cell] as i64 - cross.value[i * n + i] as i64
        })
        .collect();
    let cost = cross.cost.then(CostMeter::step((n * n) as u64));
    Ok(Metered::new(EnvyGraph { n, weights }, cost))
}

/// Lexicographically smallest failing pair among `ok` bits, via a min-reduction.
fn first_failure(ok: &[bool]) -> Metered<Option<usize>> {
    let keys: Vec<usize> = ok
        .iter()
        .enumerate()
        .map(|(idx, &fine)| if fine { usize::MAX } else { idx })
        .collect();
    par_reduce(&keys, &Min).map(|k| (k != usize::MAX).then_some(k))
}

fn report(
    property: Property,
    pair_ok: Vec<bool>,
    n: usize,
    cost: CostMeter,
    witness_items: impl Fn(usize, usize) -> Vec<usize>,
) -> FairnessReport {
    let all = par_reduce(&pair_ok, &And);
    let cost = cost.then(all.cost);
    if all.value {
        return FairnessReport {
            property,
            holds: true,
            witness: None,
            cost,
        };
    }
    let first = first_failure(&pair_ok);
    let idx = first.value.expect("some pair fails");
    let (i, j) = (idx / n, idx % n);
    FairnessReport {
        property,
        holds: false,
        witness: Some(Witness {
            envier: i,
            envied: j,
            items: witness_items(i, j),
        }),
        cost: cost.then(first.cost),
    }
}

/// EF: `v_i(X_i) >= v_i(X_j)` for all `i, j`.
pub fn check_ef(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    alloc.require_matches(inst)?;
    alloc.require_complete(inst)?;
    let n = inst.n();
    let cross = cross_values(inst, alloc);
    let v = &cross.value;
    let pair_ok: Vec<bool> = (0..n * n).map(|c| v[(c / n) * n + c / n] >= v[c]).collect();
    let cost = cross.cost.then(CostMeter::step((n * n) as u64));
    Ok(report(Property::Ef, pair_ok, n, cost, |_, _| Vec::new()))
}

/// EF1: for all `i != j`, some `g` in `X_j` has `v_i(X_i) >= v_i(X_j \ g)`.
/// An empty `X_j` passes (`v_i(X_i) >= 0`).
pub fn check_ef1(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    per_item_check(inst, alloc, Property::Ef1)
}

/// EFX: for all `i != j` and every `g` in `X_j`, `v_i(X_i) >= v_i(X_j \ g)`.
pub fn check_efx(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport> {
    per_item_check(inst, alloc, Property::Efx)
}

pub fn check(inst: &Instance, alloc: &Allocation, property: Property) -> Result<FairnessReport> {
    match property {
        Property::Ef => check_ef(inst, alloc),
        Property::Ef1 => check_ef1(inst, alloc),
        Property::Efx => check_efx(inst, alloc),
    }
}

fn per_item_check(inst: &Instance, alloc: &Allocation, property: Property) -> Result<FairnessReport> {
    alloc.require_matches(inst)?;
    alloc.require_complete(inst)?;
    let n = inst.n();
    let cross = cross_values(inst, alloc);
    let v = &cross.value;
    let item_ok = |i: usize, j: usize, g: usize| v[i * n + i] + inst.value(i, g) >= v[i * n + j];

    let pairs: Vec<Metered<bool>> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / n, c % n);
            let bundle = alloc.bundle(j);
            if i == j || bundle.is_empty() {
                return Metered::new(true, CostMeter::ZERO);
            }
            let bits: Vec<bool> = bundle.iter().map(|&g| item_ok(i, j, g)).collect();
            let step = CostMeter::step(bits.len() as u64);
            let reduced = match property {
                Property::Ef1 => par_reduce(&bits, &Or),
                _ => par_reduce(&bits, &And),
            };
            Metered::new(reduced.value, step.then(reduced.cost))
        })
        .collect();
    let cost = cross.cost.then(CostMeter::all_beside(pairs.iter().map(|p| p.cost)));
    let pair_ok = pairs.into_iter().map(|p| p.value).collect();
    Ok(report(property, pair_ok, n, cost, |i, j| match property {
        Property::Efx => alloc
            .bundle(j)
            .iter()
            .copied()
            .filter(|&g| !item_ok(i, j, g))
            .take(1)
            .collect(),
        _ => alloc.bundle(j).to_vec(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValuationClass;

    fn inst(rows: Vec<Vec<u64>>) -> Instance {
        Instance::new(ValuationClass::Additive, rows).unwrap()
    }

    fn alloc(bundles: Vec<Vec<usize>>, m: usize) -> Allocation {
        Allocation::new(bundles, m).unwrap()
    }

    fn worked_example() -> (Instance, Allocation) {
        (
            inst(vec![vec![1, 3, 2], vec![0, 1, 0], vec![2, 0, 2]]),
            alloc(vec![vec![2], vec![1], vec![0]], 3),
        )
    }

    #[test]
    fn envy_graph_worked_example() {
        let (i, a) = worked_example();
        let g = envy_graph(&i, &a).unwrap();
        assert_eq!(g.weight(0, 1), 1);
        assert_eq!(g.weight(0, 2), -1);
        assert_eq!(g.weight(2, 0), 0);
        assert_eq!(g.weight(2, 1), -2);
        for k in 0..3 {
            assert_eq!(g.weight(k, k), 0);
        }
    }

    #[test]
    fn envy_graph_symmetric_and_single() {
        let i = inst(vec![vec![1, 1], vec![1, 1]]);
        let g = envy_graph(&i, &alloc(vec![vec![0], vec![1]], 2)).unwrap();
        assert_eq!(g.rows(), vec![vec![0, 0], vec![0, 0]]);
        let single = inst(vec![vec![4, 2]]);
        let g = envy_graph(&single, &alloc(vec![vec![0, 1]], 2)).unwrap();
        assert_eq!(g.rows(), vec![vec![0]]);
    }

    #[test]
    fn ef_examples() {
        let i = inst(vec![vec![5, 1], vec![1, 5]]);
        assert!(check_ef(&i, &alloc(vec![vec![0], vec![1]], 2)).unwrap().holds);

        let (i, a) = worked_example();
        let r = check_ef(&i, &a).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.envier, w.envied), (0, 1));
        assert!(w.is_violation(&i, &a, Property::Ef));

        let single = inst(vec![vec![1]]);
        assert!(check_ef(&single, &alloc(vec![vec![0]], 1)).unwrap().holds);
    }

    #[test]
    fn ef1_examples() {
        let i = inst(vec![vec![3, 1], vec![3, 1]]);
        assert!(check_ef1(&i, &alloc(vec![vec![0], vec![1]], 2)).unwrap().holds);

        let i = inst(vec![vec![1, 1, 1], vec![1, 1, 1]]);
        let a = alloc(vec![vec![], vec![0, 1, 2]], 3);
        let r = check_ef1(&i, &a).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.envier, w.envied), (0, 1));
        assert_eq!(w.items, vec![0, 1, 2]);
        assert!(w.is_violation(&i, &a, Property::Ef1));
    }

    #[test]
    fn efx_examples() {
        let i = inst(vec![vec![3, 2, 2], vec![3, 2, 2]]);
        assert!(check_efx(&i, &alloc(vec![vec![0], vec![1, 2]], 3)).unwrap().holds);

        let i = inst(vec![vec![1, 3, 1], vec![1, 3, 1]]);
        let a = alloc(vec![vec![0], vec![1, 2]], 3);
        let r = check_efx(&i, &a).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.envier, w.envied, w.items.clone()), (0, 1, vec![2]));
        assert!(w.is_violation(&i, &a, Property::Efx));
    }

    #[test]
    fn incomplete_allocations_are_rejected() {
        let i = inst(vec![vec![1, 1], vec![1, 1]]);
        let a = alloc(vec![vec![0], vec![]], 2);
        for p in [Property::Ef, Property::Ef1, Property::Efx] {
            assert!(check(&i, &a, p).is_err());
        }
        // Leaving out an item nobody values is fine.
        let i = inst(vec![vec![1, 0], vec![1, 0]]);
        for p in [Property::Ef1, Property::Efx] {
            assert!(check(&i, &a, p).unwrap().holds);
        }
    }

    #[test]
    fn depth_is_logarithmic() {
        // n = 4 agents, 16 items: bundle sums of 4 items, 16 pairs.
        let i = Instance::new(ValuationClass::Additive, vec![vec![1; 16]; 4]).unwrap();
        let a = alloc((0..4).map(|k| (4 * k..4 * k + 4).collect()).collect(), 16);
        let r = check_ef1(&i, &a).unwrap();
        assert!(r.holds);
        // sum (2) + bits (1) + or (2) + and over 16 pairs (4)
        assert_eq!(r.cost.depth, 9);
    }
}
