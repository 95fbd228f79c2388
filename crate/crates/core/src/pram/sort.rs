use std::cmp::Ordering;

use rayon::prelude::*;

use super::cost::{CostMeter, Metered};
use super::PAR_GRAIN;

/// Output of [`bitonic_sort`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortOutput<T> {
    pub sorted: Vec<T>,
    /// `permutation[input_position] = output_position`.
    pub permutation: Vec<usize>,
}

impl<T> SortOutput<T> {
    /// `order()[output_position] = input_position`.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.permutation.len()];
        for (input, &output) in self.permutation.iter().enumerate() {
            order[output] = input;
        }
        order
    }
}

// A wire of the network carries the index of an input element, or padding
// that compares greater than every real element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Wire {
    Real(usize),
    Pad,
}

/// Stable ascending sort through a bitonic network.
pub fn bitonic_sort<T: Ord + Clone + Send + Sync>(keys: &[T]) -> Metered<SortOutput<T>> {
    bitonic_sort_by(keys, T::cmp)
}

/// Stable sort through a bitonic network under `cmp`; equal keys keep their
/// input order. Input is padded to the next power of two `K`, and the network
/// has exactly `log2(K) * (log2(K) + 1) / 2` comparator stages.
pub fn bitonic_sort_by<T, F>(keys: &[T], cmp: F) -> Metered<SortOutput<T>>
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> Ordering + Sync,
{
    let k = keys.len();
    if k == 0 {
        return Metered::new(
            SortOutput {
                sorted: Vec::new(),
                permutation: Vec::new(),
            },
            CostMeter::ZERO,
        );
    }
    let padded = k.next_power_of_two();
    let mut wires: Vec<Wire> = (0..padded).map(|i| if i < k { Wire::Real(i) } else { Wire::Pad }).collect();

    let less = |a: Wire, b: Wire| -> bool {
        match (a, b) {
            (Wire::Real(x), Wire::Real(y)) => cmp(&keys[x], &keys[y]).then(x.cmp(&y)) == Ordering::Less,
            (Wire::Real(_), Wire::Pad) => true,
            (Wire::Pad, _) => false,
        }
    };

    let mut cost = CostMeter::ZERO;
    let mut block = 2;
    while block <= padded {
        let mut stride = block / 2;
        while stride >= 1 {
            #[cfg(debug_assertions)]
            check_exclusive_stage(padded, stride);
            let stage = |i: usize| -> Wire {
                let partner = i ^ stride;
                let (lo, hi) = if i < partner { (i, partner) } else { (partner, i) };
                let ascending = lo & block == 0;
                let (a, b) = (wires[lo], wires[hi]);
                let swap = if ascending { less(b, a) } else { less(a, b) };
                if swap {
                    wires[partner]
                } else {
                    wires[i]
                }
            };
            wires = if padded >= PAR_GRAIN {
                (0..padded).into_par_iter().map(stage).collect()
            } else {
                (0..padded).map(stage).collect()
            };
            cost += CostMeter::step((padded / 2) as u64);
            stride /= 2;
        }
        block *= 2;
    }

    let mut permutation = vec![0; k];
    let mut sorted = Vec::with_capacity(k);
    for (pos, wire) in wires.iter().take(k).enumerate() {
        match *wire {
            Wire::Real(input) => {
                permutation[input] = pos;
                sorted.push(keys[input].clone());
            }
            Wire::Pad => unreachable!("padding sorts after every real key"),
        }
    }
    Metered::new(SortOutput { sorted, permutation }, cost)
}

// Each comparator of a stage touches a disjoint wire pair, so every output
// cell has exactly one writer.
#[cfg(debug_assertions)]
fn check_exclusive_stage(padded: usize, stride: usize) {
    let mut touched = vec![false; padded];
    for lo in (0..padded).filter(|i| i & stride == 0) {
        let hi = lo | stride;
        assert!(!touched[lo] && !touched[hi], "comparators overlap at stride {stride}");
        touched[lo] = true;
        touched[hi] = true;
    }
}

/// Number of comparator stages for `k` keys.
pub fn bitonic_stages(k: usize) -> u64 {
    if k <= 1 {
        return 0;
    }
    let log = u64::from(k.next_power_of_two().trailing_zeros());
    log * (log + 1) / 2
}
