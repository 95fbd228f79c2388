use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};

/// Largest single valuation accepted. Keeps every bundle sum and envy weight
/// comfortably inside `i64`.
pub const MAX_VALUE: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuationClass {
    Additive,
    RestrictedAdditive,
    Binary,
    Identical,
}

impl fmt::Display for ValuationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValuationClass::Additive => "additive",
            ValuationClass::RestrictedAdditive => "restricted-additive",
            ValuationClass::Binary => "binary",
            ValuationClass::Identical => "identical",
        })
    }
}

impl std::str::FromStr for ValuationClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "additive" => Ok(ValuationClass::Additive),
            "restricted-additive" | "restricted" => Ok(ValuationClass::RestrictedAdditive),
            "binary" => Ok(ValuationClass::Binary),
            "identical" => Ok(ValuationClass::Identical),
            other => Err(format!("unknown valuation class `{other}`")),
        }
    }
}

/// A validated fair-division instance: `n` agents, `m` items and an integer
/// valuation matrix that satisfies its declared class.
///
/// Agents and items are 0-based here; files use 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Instance {
    n: usize,
    m: usize,
    class: ValuationClass,
    values: Vec<u64>,
    // v(j) per item for restricted additive instances, 0 for items nobody values.
    item_values: Option<Vec<u64>>,
}

/// On-disk form of an instance. Values stay as raw JSON numbers so that
/// negative and fractional entries produce a diagnostic instead of a parse
/// failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub class: ValuationClass,
    pub values: Vec<Vec<Number>>,
}

impl Instance {
    pub fn new(class: ValuationClass, values: Vec<Vec<u64>>) -> Result<Self> {
        let n = values.len();
        let m = values.first().map_or(0, Vec::len);
        Self::from_rows(n, m, class, values)
    }

    /// Like [`Instance::new`] but with explicit dimensions, so `n` agents with
    /// zero items can be expressed.
    pub fn from_rows(n: usize, m: usize, class: ValuationClass, rows: Vec<Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("an instance needs at least one agent".into()));
        }
        if rows.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        let mut values = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > MAX_VALUE {
                    return Err(Error::ValueTooLarge {
                        agent: i + 1,
                        item: j + 1,
                        value: v,
                        max: MAX_VALUE,
                    });
                }
            }
            values.extend(row);
        }
        let mut inst = Instance {
            n,
            m,
            class,
            values,
            item_values: None,
        };
        inst.check_class()?;
        Ok(inst)
    }

    fn check_class(&mut self) -> Result<()> {
        match self.class {
            ValuationClass::Additive => {}
            ValuationClass::Binary => {
                for i in 0..self.n {
                    for j in 0..self.m {
                        let v = self.value(i, j);
                        if v > 1 {
                            return Err(Error::ClassMismatch(format!(
                                "binary instance has value {v} at agent {}, item {}",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
            ValuationClass::Identical => {
                for i in 1..self.n {
                    if self.row(i) != self.row(0) {
                        return Err(Error::ClassMismatch(format!(
                            "identical instance: row {} differs from row 1",
                            i + 1
                        )));
                    }
                }
            }
            ValuationClass::RestrictedAdditive => {
                let mut item_values = vec![0; self.m];
                for (j, slot) in item_values.iter_mut().enumerate() {
                    let nonzero: BTreeSet<u64> =
                        (0..self.n).map(|i| self.value(i, j)).filter(|&v| v > 0).collect();
                    if nonzero.len() > 1 {
                        let listed: Vec<String> = nonzero.iter().map(u64::to_string).collect();
                        return Err(Error::ClassMismatch(format!(
                            "item {} has nonzero values {{{}}}",
                            j + 1,
                            listed.join(",")
                        )));
                    }
                    *slot = nonzero.into_iter().next().unwrap_or(0);
                }
                self.item_values = Some(item_values);
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn class(&self) -> ValuationClass {
        self.class
    }

    #[inline]
    pub fn value(&self, agent: usize, item: usize) -> u64 {
        self.values[agent * self.m + item]
    }

    pub fn row(&self, agent: usize) -> &[u64] {
        &self.values[agent * self.m..(agent + 1) * self.m]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest single valuation, Δ.
    pub fn delta(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Inherent value v(j) of an item. Only meaningful for restricted additive
    /// instances; for other classes this is the column maximum.
    pub fn item_value(&self, item: usize) -> u64 {
        match &self.item_values {
            Some(vals) => vals[item],
            None => (0..self.n).map(|i| self.value(i, item)).max().unwrap_or(0),
        }
    }

    /// The distinct nonzero inherent values, highest first. Its length is `t`.
    pub fn inherent_values(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = (0..self.m).map(|j| self.item_value(j)).filter(|&v| v > 0).collect();
        set.into_iter().rev().collect()
    }

    pub fn is_valued_by_anyone(&self, item: usize) -> bool {
        (0..self.n).any(|i| self.value(i, item) > 0)
    }

    /// v_i(S) for an arbitrary item set.
    pub fn bundle_value(&self, agent: usize, bundle: &[usize]) -> u64 {
        bundle.iter().map(|&j| self.value(agent, j)).sum()
    }

    /// Same matrix under a different declared class, re-validated.
    pub fn with_class(&self, class: ValuationClass) -> Result<Self> {
        Self::from_rows(self.n, self.m, class, self.rows())
    }
}

/// Validate a raw instance description, checking every entry and the declared
/// valuation class against the matrix.
pub fn validate_instance(raw: InstanceFile) -> Result<Instance> {
    if raw.values.len() != raw.n {
        return Err(Error::DimensionMismatch(format!(
            "`n` is {} but `values` has {} rows",
            raw.n,
            raw.values.len()
        )));
    }
    let mut rows = Vec::with_capacity(raw.n);
    for (i, row) in raw.values.iter().enumerate() {
        if row.len() != raw.m {
            return Err(Error::DimensionMismatch(format!(
                "`m` is {} but row {} has {} entries",
                raw.m,
                i + 1,
                row.len()
            )));
        }
        let mut parsed = Vec::with_capacity(raw.m);
        for (j, num) in row.iter().enumerate() {
            parsed.push(number_to_value(num, i, j)?);
        }
        rows.push(parsed);
    }
    Instance::from_rows(raw.n, raw.m, raw.class, rows)
}

fn number_to_value(num: &Number, agent: usize, item: usize) -> Result<u64> {
    if let Some(v) = num.as_u64() {
        return Ok(v);
    }
    if num.as_i64().is_some() {
        return Err(Error::NegativeValue {
            agent: agent + 1,
            item: item + 1,
            value: num.to_string(),
        });
    }
    let f = num.as_f64().unwrap_or(f64::NAN);
    if f < 0.0 {
        Err(Error::NegativeValue {
            agent: agent + 1,
            item: item + 1,
            value: num.to_string(),
        })
    } else if f.fract() == 0.0 && f <= MAX_VALUE as f64 {
        Ok(f as u64)
    } else {
        Err(Error::NonIntegralValue {
            agent: agent + 1,
            item: item + 1,
            value: num.to_string(),
        })
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(raw: InstanceFile) -> Result<Self> {
        validate_instance(raw)
    }
}

impl From<Instance> for InstanceFile {
    fn from(inst: Instance) -> Self {
        InstanceFile {
            n: inst.n,
            m: inst.m,
            class: inst.class,
            values: inst
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(Number::from).collect())
                .collect(),
        }
    }
}
