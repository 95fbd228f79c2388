use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, ValuationClass};

/// Parameters for [`random_instance`].
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceParams {
    pub n: usize,
    pub m: usize,
    pub class: ValuationClass,
    /// Inclusive range nonzero values are drawn from.
    pub value_range: (u64, u64),
    /// Probability that an entry (or, for restricted additive, an agent-item
    /// incidence) is nonzero.
    pub density: f64,
    /// Number of inherent values for restricted additive instances.
    pub distinct_values: Option<usize>,
}

impl InstanceParams {
    pub fn new(n: usize, m: usize, class: ValuationClass) -> Self {
        InstanceParams {
            n,
            m,
            class,
            value_range: (1, 10),
            density: 1.0,
            distinct_values: None,
        }
    }

    pub fn value_range(mut self, lo: u64, hi: u64) -> Self {
        self.value_range = (lo, hi);
        self
    }

    pub fn density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn distinct_values(mut self, t: usize) -> Self {
        self.distinct_values = Some(t);
        self
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.value_range;
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if lo > hi {
            return Err(Error::InvalidParams(format!("empty value range [{lo}, {hi}]")));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidParams(format!("density {} outside [0, 1]", self.density)));
        }
        if self.class == ValuationClass::RestrictedAdditive {
            let t = self.distinct_values.unwrap_or(1);
            let available = hi - lo.max(1) + 1;
            if t == 0 || lo.max(1) > hi || t as u64 > available {
                return Err(Error::InvalidParams(format!(
                    "cannot draw {t} distinct positive values from [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic random instance for `(params, seed)`.
pub fn random_instance(params: &InstanceParams, seed: u64) -> Result<Instance> {
    params.validate()?;
    let mut rng = rng(seed);
    let (n, m) = (params.n, params.m);
    let (lo, hi) = params.value_range;
    let mut rows = vec![vec![0u64; m]; n];
    match params.class {
        ValuationClass::Additive => {
            for row in &mut rows {
                for v in row.iter_mut() {
                    if rng.gen_bool(params.density) {
                        *v = rng.gen_range(lo..=hi);
                    }
                }
            }
        }
        ValuationClass::Binary => {
            for row in &mut rows {
                for v in row.iter_mut() {
                    *v = u64::from(rng.gen_bool(params.density));
                }
            }
        }
        ValuationClass::Identical => {
            let shared: Vec<u64> = (0..m)
                .map(|_| if rng.gen_bool(params.density) { rng.gen_range(lo..=hi) } else { 0 })
                .collect();
            for row in &mut rows {
                row.clone_from(&shared);
            }
        }
        ValuationClass::RestrictedAdditive => {
            let t = params.distinct_values.unwrap_or(1);
            let mut pool: Vec<u64> = (lo.max(1)..=hi).collect();
            pool.shuffle(&mut rng);
            pool.truncate(t);
            for j in 0..m {
                let inherent = pool[rng.gen_range(0..t)];
                for row in &mut rows {
                    if rng.gen_bool(params.density) {
                        row[j] = inherent;
                    }
                }
            }
        }
    }
    Instance::from_rows(n, m, params.class, rows)
}

/// A uniformly random complete allocation.
pub fn random_allocation(n: usize, m: usize, seed: u64) -> Allocation {
    let mut rng = rng(seed);
    let owners: Vec<Option<usize>> = (0..m).map(|_| Some(rng.gen_range(0..n))).collect();
    Allocation::from_owners(&owners, n).expect("owners are in range")
}
