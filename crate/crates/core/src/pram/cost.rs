use std::ops::{Add, AddAssign};

/// Depth/work accounting for a synchronous (PRAM-style) computation.
///
/// `depth` counts synchronous parallel steps, `work` counts primitive element
/// operations and `peak_width` is the largest number of operations issued in a
/// single step (the processor count a PRAM would need).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CostMeter {
    pub depth: u64,
    pub work: u64,
    pub peak_width: u64,
}

impl CostMeter {
    pub const ZERO: CostMeter = CostMeter {
        depth: 0,
        work: 0,
        peak_width: 0,
    };

    /// One synchronous step issuing `width` operations.
    pub fn step(width: u64) -> Self {
        if width == 0 {
            return Self::ZERO;
        }
        CostMeter {
            depth: 1,
            work: width,
            peak_width: width,
        }
    }

    /// `work` operations executed one after another.
    pub fn sequential(work: u64) -> Self {
        CostMeter {
            depth: work,
            work,
            peak_width: work.min(1),
        }
    }

    /// `self` followed by `next`.
    pub fn then(self, next: CostMeter) -> Self {
        CostMeter {
            depth: self.depth + next.depth,
            work: self.work + next.work,
            peak_width: self.peak_width.max(next.peak_width),
        }
    }

    /// `self` and `other` running side by side in lockstep.
    pub fn beside(self, other: CostMeter) -> Self {
        CostMeter {
            depth: self.depth.max(other.depth),
            work: self.work + other.work,
            peak_width: self.peak_width + other.peak_width,
        }
    }

    /// `copies` identical computations running side by side.
    pub fn replicate(self, copies: u64) -> Self {
        if copies == 0 {
            return Self::ZERO;
        }
        CostMeter {
            depth: self.depth,
            work: self.work * copies,
            peak_width: self.peak_width * copies,
        }
    }

    /// Fold many side-by-side meters.
    pub fn all_beside<I: IntoIterator<Item = CostMeter>>(meters: I) -> Self {
        meters.into_iter().fold(Self::ZERO, CostMeter::beside)
    }
}

impl Add for CostMeter {
    type Output = CostMeter;

    fn add(self, rhs: CostMeter) -> CostMeter {
        self.then(rhs)
    }
}

impl AddAssign for CostMeter {
    fn add_assign(&mut self, rhs: CostMeter) {
        *self = self.then(rhs);
    }
}

/// A value together with the cost of computing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metered<T> {
    pub value: T,
    pub cost: CostMeter,
}

impl<T> Metered<T> {
    pub fn new(value: T, cost: CostMeter) -> Self {
        Metered { value, cost }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Metered<U> {
        Metered {
            value: f(self.value),
            cost: self.cost,
        }
    }
}
