use std::fmt::Debug;

use rayon::prelude::*;

use super::cost::{CostMeter, Metered};
use super::reduce::{tree_fold, Monoid};
use super::{ceil_log2, Dist};
use crate::error::{Error, Result};

/// A semiring for matrix products: `add` is the reduction, `mul` combines
/// the two factors of a term.
pub trait Semiring: Copy + Debug + Default + PartialEq + Send + Sync + 'static {
    type Elem: Copy + Debug + PartialEq + Send + Sync;
    fn zero() -> Self::Elem;
    fn one() -> Self::Elem;
    fn add(a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(a: Self::Elem, b: Self::Elem) -> Self::Elem;
}

/// (min, +) over integers with +∞.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MinPlus;

/// (or, and) over booleans.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for MinPlus {
    type Elem = Dist;
    fn zero() -> Dist {
        Dist::Infinite
    }
    fn one() -> Dist {
        Dist::Finite(0)
    }
    fn add(a: Dist, b: Dist) -> Dist {
        a.min(b)
    }
    fn mul(a: Dist, b: Dist) -> Dist {
        a + b
    }
}

impl Semiring for Boolean {
    type Elem = bool;
    fn zero() -> bool {
        false
    }
    fn one() -> bool {
        true
    }
    fn add(a: bool, b: bool) -> bool {
        a || b
    }
    fn mul(a: bool, b: bool) -> bool {
        a && b
    }
}

struct SemiringAdd<S>(std::marker::PhantomData<S>);

impl<S: Semiring> Monoid<S::Elem> for SemiringAdd<S> {
    fn identity(&self) -> S::Elem {
        S::zero()
    }
    fn combine(&self, a: S::Elem, b: S::Elem) -> S::Elem {
        S::add(a, b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<S: Semiring> {
    order: usize,
    entries: Vec<S::Elem>,
}

pub type DistMatrix = SquareMatrix<MinPlus>;
pub type BoolMatrix = SquareMatrix<Boolean>;

impl<S: Semiring> SquareMatrix<S> {
    /// Every entry is the semiring zero (no edges).
    pub fn empty(order: usize) -> Self {
        SquareMatrix {
            order,
            entries: vec![S::zero(); order * order],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S::Elem>>) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(Error::DimensionMismatch(format!(
                    "matrix row {} has {} entries, expected {order}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(SquareMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S::Elem {
        self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: S::Elem) {
        self.entries[i * self.order + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S::Elem] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }
}

/// Model cost of one `order x order` semiring product: every cell issues
/// `order` multiplications in one step and reduces them with a tournament.
pub fn product_cost(order: usize) -> CostMeter {
    if order == 0 {
        return CostMeter::ZERO;
    }
    let n = order as u64;
    let reduce_depth = u64::from(ceil_log2(order));
    let cell = CostMeter::step(n).then(CostMeter {
        depth: reduce_depth,
        work: n - 1,
        peak_width: n / 2,
    });
    cell.replicate(n * n)
}

/// Semiring matrix product; rows are computed by independent workers and
/// every cell reduces its terms in a fixed tournament order.
pub fn semiring_product<S: Semiring>(a: &SquareMatrix<S>, b: &SquareMatrix<S>) -> Metered<SquareMatrix<S>> {
    assert_eq!(a.order, b.order, "product of matrices with different orders");
    let n = a.order;
    let add = SemiringAdd::<S>(std::marker::PhantomData);
    let rows: Vec<(Vec<S::Elem>, CostMeter)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(n);
            let mut row_cost = CostMeter::ZERO;
            let mut terms = Vec::with_capacity(n);
            for j in 0..n {
                terms.clear();
                terms.extend((0..n).map(|k| S::mul(a.get(i, k), b.get(k, j))));
                let cell = tree_fold(&mut terms, &add);
                row_cost = row_cost.beside(CostMeter::step(n as u64).then(cell.cost));
                row.push(cell.value);
            }
            (row, row_cost)
        })
        .collect();
    let cost = CostMeter::all_beside(rows.iter().map(|r| r.1));
    let entries = rows.into_iter().flat_map(|r| r.0).collect();
    Metered::new(SquareMatrix { order: n, entries }, cost)
}

/// Result of a repeated-squaring closure.
#[derive(Clone, Debug, PartialEq)]
pub struct Closure<S: Semiring> {
    pub matrix: SquareMatrix<S>,
    /// Squaring rounds performed; at most `ceil(log2 order)`.
    pub rounds: u32,
}

/// All-pairs shortest paths by repeated min-plus squaring.
///
/// The diagonal starts at `min(adj[i][i], 0)`, so entry `(i, j)` of the result
/// is the minimum weight over paths of any length (the empty path included).
/// After `ceil(log2 order)` squarings, a negative diagonal entry witnesses a
/// negative cycle.
pub fn apsp_minplus(adj: &DistMatrix) -> Result<Metered<Closure<MinPlus>>> {
    let n = adj.order();
    let mut dist = adj.clone();
    for i in 0..n {
        dist.set(i, i, dist.get(i, i).min(Dist::Finite(0)));
    }
    let mut cost = CostMeter::step(n as u64);
    let mut rounds = 0;
    for _ in 0..ceil_log2(n) {
        let squared = semiring_product(&dist, &dist);
        cost += squared.cost;
        rounds += 1;
        let done = squared.value == dist;
        dist = squared.value;
        if done {
            break;
        }
    }
    if let Some(vertex) = (0..n).find(|&i| dist.get(i, i) < Dist::Finite(0)) {
        return Err(Error::NegativeCycle { vertex });
    }
    Ok(Metered::new(Closure { matrix: dist, rounds }, cost))
}

/// Transitive closure by repeated boolean squaring, `C <- C or C*C`.
///
/// Entry `(u, v)` of the result is true iff a path of length >= 1 runs from
/// `u` to `v`. Rows are stored as bitsets internally; the reported cost is the
/// cost of the boolean matrix product plus the final `or`.
pub fn transitive_closure(adj: &BoolMatrix) -> Metered<Closure<Boolean>> {
    let n = adj.order();
    let words = n.div_ceil(64);
    let mut bits: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = vec![0u64; words];
            for (j, &edge) in adj.row(i).iter().enumerate() {
                if edge {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();

    let round_cost = product_cost(n).then(CostMeter::step((n * n) as u64));
    let mut cost = CostMeter::ZERO;
    let mut rounds = 0;
    for _ in 0..ceil_log2(n) {
        let next: Vec<Vec<u64>> = bits
            .par_iter()
            .map(|row| {
                let mut out = row.clone();
                for (w, &word) in row.iter().enumerate() {
                    let mut rest = word;
                    while rest != 0 {
                        let k = w * 64 + rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        for (o, &b) in out.iter_mut().zip(&bits[k]) {
                            *o |= b;
                        }
                    }
                }
                out
            })
            .collect();
        cost += round_cost;
        rounds += 1;
        let done = next == bits;
        bits = next;
        if done {
            break;
        }
    }

    let mut matrix = BoolMatrix::empty(n);
    for (i, row) in bits.iter().enumerate() {
        for j in 0..n {
            matrix.set(i, j, row[j / 64] >> (j % 64) & 1 == 1);
        }
    }
    Metered::new(Closure { matrix, rounds }, cost)
}
