use std::cmp::Ordering;

use rayon::prelude::*;

use super::cost::{CostMeter, Metered};
use super::{ceil_log2, Dist, PAR_GRAIN};

/// An associative, commutative operator with an identity element.
pub trait Monoid<T>: Sync {
    fn identity(&self) -> T;
    fn combine(&self, a: T, b: T) -> T;
}

/// Types with a least and greatest element, used as identities for `Max` and
/// `Min`.
pub trait Bounded: Copy + Ord {
    const LEAST: Self;
    const GREATEST: Self;
}

macro_rules! bounded_int {
    ($($t:ty),*) => {$(
        impl Bounded for $t {
            const LEAST: Self = <$t>::MIN;
            const GREATEST: Self = <$t>::MAX;
        }
    )*};
}
bounded_int!(u8, u16, u32, u64, u128, usize, i8, i16, i32, i64, i128, isize);

impl Bounded for bool {
    const LEAST: Self = false;
    const GREATEST: Self = true;
}

impl Bounded for Dist {
    const LEAST: Self = Dist::Finite(i64::MIN);
    const GREATEST: Self = Dist::Infinite;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sum;
#[derive(Clone, Copy, Debug, Default)]
pub struct Min;
#[derive(Clone, Copy, Debug, Default)]
pub struct Max;
#[derive(Clone, Copy, Debug, Default)]
pub struct And;
#[derive(Clone, Copy, Debug, Default)]
pub struct Or;

macro_rules! sum_monoid {
    ($($t:ty),*) => {$(
        impl Monoid<$t> for Sum {
            fn identity(&self) -> $t { 0 }
            fn combine(&self, a: $t, b: $t) -> $t { a + b }
        }
    )*};
}
sum_monoid!(u64, u128, usize, i64, i128);

impl<T: Bounded> Monoid<T> for Min {
    fn identity(&self) -> T {
        T::GREATEST
    }
    fn combine(&self, a: T, b: T) -> T {
        a.min(b)
    }
}

impl<T: Bounded> Monoid<T> for Max {
    fn identity(&self) -> T {
        T::LEAST
    }
    fn combine(&self, a: T, b: T) -> T {
        a.max(b)
    }
}

impl Monoid<bool> for And {
    fn identity(&self) -> bool {
        true
    }
    fn combine(&self, a: bool, b: bool) -> bool {
        a && b
    }
}

impl Monoid<bool> for Or {
    fn identity(&self) -> bool {
        false
    }
    fn combine(&self, a: bool, b: bool) -> bool {
        a || b
    }
}

/// Arg-max with ties going to the smallest position: elements are
/// `Some((key, position))`, `None` is the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArgMax;

impl<K: Ord + Copy> Monoid<Option<(K, usize)>> for ArgMax {
    fn identity(&self) -> Option<(K, usize)> {
        None
    }
    fn combine(&self, a: Option<(K, usize)>, b: Option<(K, usize)>) -> Option<(K, usize)> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Greater => Some(x),
                Ordering::Less => Some(y),
                Ordering::Equal => Some(if x.1 <= y.1 { x } else { y }),
            },
        }
    }
}

/// Tournament-tree reduction. Leaves are paired left to right at every level
/// (an odd element is carried up), so the combination order, and therefore the
/// result, is fixed regardless of how many workers execute a level.
///
/// Depth is `ceil(log2 k)` for `k` elements, work is `k - 1` combines.
pub fn par_reduce<T, M>(values: &[T], op: &M) -> Metered<T>
where
    T: Copy + Send + Sync,
    M: Monoid<T>,
{
    let k = values.len();
    if k == 0 {
        return Metered::new(op.identity(), CostMeter::ZERO);
    }
    let mut cost = CostMeter::ZERO;
    let mut level: Vec<T> = values.to_vec();
    while level.len() > 1 {
        let pairs = (level.len() / 2) as u64;
        let combine = |chunk: &[T]| match chunk {
            [a, b] => op.combine(*a, *b),
            [a] => *a,
            _ => unreachable!("chunks of at most two"),
        };
        level = if level.len() >= PAR_GRAIN {
            level.par_chunks(2).map(combine).collect()
        } else {
            level.chunks(2).map(combine).collect()
        };
        cost += CostMeter::step(pairs);
    }
    debug_assert_eq!(cost.depth, u64::from(ceil_log2(k)));
    Metered::new(level[0], cost)
}

/// Sequential tournament used inside per-cell computations that are already
/// spread across workers. Same shape (and cost) as [`par_reduce`].
pub(crate) fn tree_fold<T: Copy, M: Monoid<T>>(values: &mut Vec<T>, op: &M) -> Metered<T> {
    if values.is_empty() {
        return Metered::new(op.identity(), CostMeter::ZERO);
    }
    let mut cost = CostMeter::ZERO;
    while values.len() > 1 {
        let len = values.len();
        let pairs = len / 2;
        for p in 0..pairs {
            values[p] = op.combine(values[2 * p], values[2 * p + 1]);
        }
        if len % 2 == 1 {
            values[pairs] = values[len - 1];
        }
        values.truncate(len.div_ceil(2));
        cost += CostMeter::step(pairs as u64);
    }
    Metered::new(values[0], cost)
}
