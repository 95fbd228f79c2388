use serde::{Deserialize, Serialize};

use crate::model::{Allocation, Instance};

/// Nonnegative integer payments, one per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaymentVector(pub Vec<u64>);

impl PaymentVector {
    pub fn zeros(n: usize) -> Self {
        PaymentVector(vec![0; n])
    }

    pub fn get(&self, agent: usize) -> u64 {
        self.0[agent]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &PaymentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// "If agent `i` is paid more than `x`, agent `j` must be paid more than `y`."
///
/// Agents are 0-based here; the constraint file uses 1-based agents and raw
/// dollar amounts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PaymentConstraint {
    pub i: usize,
    pub x: u64,
    pub j: usize,
    pub y: u64,
}

impl PaymentConstraint {
    pub fn new(i: usize, x: u64, j: usize, y: u64) -> Self {
        PaymentConstraint { i, x, j, y }
    }

    pub fn is_satisfied(&self, q: &[u64]) -> bool {
        q[self.i] <= self.x || q[self.j] > self.y
    }
}

/// v_i(X_i) + q_i >= v_i(X_j) + q_j for every ordered pair.
pub fn is_envy_free_with_payments(inst: &Instance, alloc: &Allocation, q: &[u64]) -> bool {
    let n = inst.n();
    (0..n).all(|i| {
        let own = inst.bundle_value(i, alloc.bundle(i)) + q[i];
        (0..n).all(|j| own >= inst.bundle_value(i, alloc.bundle(j)) + q[j])
    })
}

pub fn satisfies_constraints(constraints: &[PaymentConstraint], q: &[u64]) -> bool {
    constraints.iter().all(|c| c.is_satisfied(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValuationClass;

    #[test]
    fn constraint_semantics() {
        let c = PaymentConstraint::new(0, 1, 1, 0);
        assert!(c.is_satisfied(&[1, 0]));
        assert!(!c.is_satisfied(&[2, 0]));
        assert!(c.is_satisfied(&[2, 1]));
    }

    #[test]
    fn worked_example_payments() {
        let inst = Instance::new(
            ValuationClass::Additive,
            vec![vec![1, 3, 2], vec![0, 1, 0], vec![2, 0, 2]],
        )
        .unwrap();
        let alloc = Allocation::new(vec![vec![2], vec![1], vec![0]], 3).unwrap();
        assert!(!is_envy_free_with_payments(&inst, &alloc, &[0, 0, 0]));
        assert!(is_envy_free_with_payments(&inst, &alloc, &[1, 0, 1]));
        assert!(!is_envy_free_with_payments(&inst, &alloc, &[1, 0, 0]));
    }
}
