//! Deterministic fork-join primitives with PRAM-style cost accounting.
//!
//! Every primitive returns its value together with a [`CostMeter`]. Values
//! and meters depend only on the inputs: the combination trees are fixed, and
//! worker threads only decide who evaluates which cell of a step.

mod cost;
mod matrix;
mod reduce;
mod sort;

use std::fmt;
use std::ops::Add;

pub use cost::{CostMeter, Metered};
pub use matrix::{
    apsp_minplus, product_cost, semiring_product, transitive_closure, BoolMatrix, Boolean, Closure, DistMatrix,
    MinPlus, Semiring, SquareMatrix,
};
pub use reduce::{par_reduce, And, ArgMax, Bounded, Max, Min, Monoid, Or, Sum};
pub use sort::{bitonic_sort, bitonic_sort_by, bitonic_stages, SortOutput};

/// Below this many cells a step is evaluated on the calling thread.
pub(crate) const PAR_GRAIN: usize = 4096;

/// `ceil(log2 k)`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// Run `f` on a dedicated pool of `workers` threads.
///
/// Outputs of every primitive are identical for any worker count; this only
/// changes wall-clock time.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}

/// An integer distance extended with +∞. `Finite` orders below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(i64),
    Infinite,
}

impl Dist {
    pub fn finite(self) -> Option<i64> {
        match self {
            Dist::Finite(v) => Some(v),
            Dist::Infinite => None,
        }
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        match (self, rhs) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a.checked_add(b).expect("path weight overflow")),
            _ => Dist::Infinite,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(v) => write!(f, "{v}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}
