//! Exhaustive reference implementations. They are deliberately plain and
//! single-threaded: every fast path in the crate is tested against them.

use crate::error::{Error, Result};
use crate::model::payment::{is_envy_free_with_payments, satisfies_constraints};
use crate::model::{Allocation, Instance, PaymentConstraint, PaymentVector};

/// Enumeration guard shared by the oracles.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

fn checked_power(base: u128, exp: usize, what: &str) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc > ENUMERATION_LIMIT {
            break;
        }
    }
    if acc > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: what.to_string(),
            size: base.checked_pow(exp as u32).unwrap_or(u128::MAX),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(acc)
}

/// Visit every assignment of `m` items to `n` agents (owner vectors in
/// lexicographic order).
fn for_each_assignment(n: usize, m: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut owners = vec![0usize; m];
    loop {
        if !visit(&owners) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return;
            }
            owners[pos] += 1;
            if owners[pos] < n {
                break;
            }
            owners[pos] = 0;
            pos += 1;
        }
    }
}

/// True iff no complete integral allocation Pareto-dominates `alloc`. Items
/// nobody values may be left unallocated.
pub fn brute_force_po_check(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    alloc.require_matches(inst)?;
    alloc.require_complete(inst)?;
    checked_power(inst.n() as u128, inst.m(), "n^m allocations")?;
    let n = inst.n();
    let current: Vec<u64> = (0..n).map(|i| inst.bundle_value(i, alloc.bundle(i))).collect();
    let mut utilities = vec![0u64; n];
    let mut dominated = false;
    for_each_assignment(n, inst.m(), |owners| {
        utilities.iter_mut().for_each(|u| *u = 0);
        for (item, &agent) in owners.iter().enumerate() {
            utilities[agent] += inst.value(agent, item);
        }
        let weakly = utilities.iter().zip(&current).all(|(u, c)| u >= c);
        let strictly = utilities.iter().zip(&current).any(|(u, c)| u > c);
        dominated = weakly && strictly;
        !dominated
    });
    Ok(!dominated)
}

/// Maximum utilitarian welfare over all complete allocations.
pub fn brute_force_max_welfare(inst: &Instance) -> Result<u64> {
    checked_power(inst.n() as u128, inst.m(), "n^m allocations")?;
    let mut best = 0;
    for_each_assignment(inst.n(), inst.m(), |owners| {
        let welfare: u64 = owners.iter().enumerate().map(|(j, &i)| inst.value(i, j)).sum();
        best = best.max(welfare);
        true
    });
    Ok(best)
}

/// The componentwise-minimal payment vector in `[0, cap]^n` that eliminates
/// envy and satisfies every constraint, or `None` when no such vector exists.
///
/// `cap` defaults to `m * Delta`. The feasible set is closed under
/// componentwise minimum; each run re-checks that the minimum it found is
/// itself feasible.
pub fn brute_force_min_payments(
    inst: &Instance,
    alloc: &Allocation,
    constraints: &[PaymentConstraint],
    cap: Option<u64>,
) -> Result<Option<PaymentVector>> {
    alloc.require_matches(inst)?;
    let n = inst.n();
    let cap = cap.unwrap_or(inst.m() as u64 * inst.delta());
    checked_power(u128::from(cap) + 1, n, "(cap+1)^n payment vectors")?;
    for c in constraints {
        if c.i >= n || c.j >= n {
            return Err(Error::AgentOutOfRange { agent: c.i.max(c.j) + 1, n });
        }
    }

    let mut minimum: Option<Vec<u64>> = None;
    let mut q = vec![0u64; n];
    loop {
        if satisfies_constraints(constraints, &q) && is_envy_free_with_payments(inst, alloc, &q) {
            match &mut minimum {
                None => minimum = Some(q.clone()),
                Some(min) => min.iter_mut().zip(&q).for_each(|(a, &b)| *a = (*a).min(b)),
            }
        }
        let mut pos = 0;
        while pos < n && q[pos] == cap {
            q[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
        q[pos] += 1;
    }

    match minimum {
        None => Ok(None),
        Some(min) => {
            if !(satisfies_constraints(constraints, &min) && is_envy_free_with_payments(inst, alloc, &min)) {
                return Err(Error::OracleInvariant(format!(
                    "componentwise minimum {min:?} of the feasible set is infeasible"
                )));
            }
            Ok(Some(PaymentVector(min)))
        }
    }
}
