use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Instance, MAX_VALUE};

/// An exact rational `num / den` in (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::InvalidAlpha(format!("{num}/{den}")));
        }
        Ok(Alpha { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `ceil(log_{1/alpha}(v + 1))`: the least `L` with `(den/num)^L >= v + 1`.
    pub fn interval_count(&self, max_value: u64) -> usize {
        let target = u128::from(max_value) + 1;
        let (mut lhs, mut rhs) = (1u128, target);
        let mut levels = 0;
        while lhs < rhs {
            lhs *= u128::from(self.den);
            rhs *= u128::from(self.num);
            levels += 1;
            if lhs > u128::MAX / 1024 || rhs > u128::MAX / 1024 {
                // Ratios this close to 1 are rejected by alpha_round anyway.
                let g = gcd(lhs, rhs);
                lhs /= g;
                rhs /= g;
            }
        }
        levels
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAlpha(s.to_string());
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let num = p.trim().parse().map_err(|_| bad())?;
        let den = q.trim().parse().map_err(|_| bad())?;
        Alpha::new(num, den)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A rounded instance. Stored values are the rounded values scaled by
/// `denominator`: an entry `s` stands for the real value `s / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaRounding {
    pub instance: Instance,
    pub alpha: Alpha,
    pub denominator: u64,
}

/// Round every nonzero value `v` down to the largest power `(1/alpha)^k <= v`.
///
/// Powers of `den/num` are not integers in general, so they are stored as
/// `den^k * num^(K-k)`, where `K` is the largest exponent used: a uniform
/// positive scaling by `num^K`, which preserves every fairness comparison.
/// Rounding depends only on the value, so a restricted additive instance stays
/// restricted additive.
pub fn alpha_round(inst: &Instance, alpha: Alpha) -> Result<AlphaRounding> {
    let (num, den) = (u128::from(alpha.num), u128::from(alpha.den));
    let too_fine = || Error::InvalidAlpha(format!("{alpha}: exact scaled values exceed {MAX_VALUE}"));

    let exponent = |v: u64| -> Result<u32> {
        let v = u128::from(v);
        let (mut lhs, mut rhs) = (den, v * num);
        let mut k = 0;
        while lhs <= rhs {
            k += 1;
            lhs = lhs.checked_mul(den).ok_or_else(too_fine)?;
            rhs = rhs.checked_mul(num).ok_or_else(too_fine)?;
        }
        Ok(k)
    };

    let rows = inst.rows();
    let mut exps = vec![vec![None; inst.m()]; inst.n()];
    let mut top = 0;
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0 {
                let k = exponent(v)?;
                top = top.max(k);
                exps[i][j] = Some(k);
            }
        }
    }

    let pow = |base: u128, e: u32| base.checked_pow(e).ok_or_else(too_fine);
    let denominator = pow(num, top)?;
    let mut scaled = vec![vec![0u64; inst.m()]; inst.n()];
    for (i, row) in exps.iter().enumerate() {
        for (j, k) in row.iter().enumerate() {
            if let Some(k) = *k {
                let s = pow(den, k)?
                    .checked_mul(pow(num, top - k)?)
                    .ok_or_else(too_fine)?;
                if s > u128::from(MAX_VALUE) {
                    return Err(too_fine());
                }
                scaled[i][j] = s as u64;
            }
        }
    }
    if denominator > u128::from(MAX_VALUE) {
        return Err(too_fine());
    }
    Ok(AlphaRounding {
        instance: Instance::from_rows(inst.n(), inst.m(), inst.class(), scaled)?,
        alpha,
        denominator: denominator as u64,
    })
}
