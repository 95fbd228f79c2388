//! JSON file formats. Every index in a file is 1-based; the in-memory types
//! are 0-based.
//!
//! * instance: `{"n": 3, "m": 3, "class": "additive", "values": [[1,3,2], ...]}`
//! * allocation: `[[3], [2], [1]]`, one item list per agent
//! * payments: `[1, 0, 1]`
//! * constraints: `[{"i": 1, "x": 0, "j": 2, "y": 0}]`
//! * agent order: `[2, 1, 3]`

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, PaymentConstraint, PaymentVector};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintRecord {
    i: usize,
    x: u64,
    j: usize,
    y: u64,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    Ok(serde_json::from_str(text)?)
}

/// Instance as JSON with one matrix row per line.
pub fn format_instance(inst: &Instance) -> String {
    let mut out = format!(
        "{{\n  \"n\": {},\n  \"m\": {},\n  \"class\": \"{}\",\n  \"values\": [",
        inst.n(),
        inst.m(),
        inst.class()
    );
    for i in 0..inst.n() {
        let row: Vec<String> = inst.row(i).iter().map(u64::to_string).collect();
        out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
        out.push_str(&row.join(", "));
        out.push(']');
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn parse_allocation(text: &str, inst: &Instance) -> Result<Allocation> {
    let lists: Vec<Vec<usize>> = serde_json::from_str(text)?;
    let bundles = lists
        .into_iter()
        .map(|items| {
            items
                .into_iter()
                .map(|j| one_based(j, "item"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Allocation::for_instance(bundles, inst)
}

pub fn format_allocation(alloc: &Allocation) -> String {
    let lists: Vec<Vec<usize>> = alloc
        .bundles()
        .iter()
        .map(|b| b.iter().map(|j| j + 1).collect())
        .collect();
    let mut out = serde_json::to_string(&lists).expect("plain integers serialize");
    out.push('\n');
    out
}

pub fn parse_payments(text: &str, n: usize) -> Result<PaymentVector> {
    let q: PaymentVector = serde_json::from_str(text)?;
    if q.0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "payment vector has {} entries, instance has {n} agents",
            q.0.len()
        )));
    }
    Ok(q)
}

pub fn format_payments(q: &PaymentVector) -> String {
    let mut out = serde_json::to_string(q).expect("plain integers serialize");
    out.push('\n');
    out
}

/// Parse constraints and check them against the instance: agents in range,
/// dollar levels within `[0, m * Delta]`.
pub fn parse_constraints(text: &str, inst: &Instance) -> Result<Vec<PaymentConstraint>> {
    let records: Vec<ConstraintRecord> = serde_json::from_str(text)?;
    let cap = inst.m() as u64 * inst.delta();
    records
        .into_iter()
        .map(|r| {
            for agent in [r.i, r.j] {
                if agent == 0 || agent > inst.n() {
                    return Err(Error::AgentOutOfRange { agent, n: inst.n() });
                }
            }
            if r.x > cap || r.y > cap {
                return Err(Error::InvalidConstraint(format!(
                    "dollar levels must lie in [0, {cap}], got x={} y={}",
                    r.x, r.y
                )));
            }
            Ok(PaymentConstraint::new(r.i - 1, r.x, r.j - 1, r.y))
        })
        .collect()
}

pub fn format_constraints(constraints: &[PaymentConstraint]) -> String {
    let records: Vec<ConstraintRecord> = constraints
        .iter()
        .map(|c| ConstraintRecord {
            i: c.i + 1,
            x: c.x,
            j: c.j + 1,
            y: c.y,
        })
        .collect();
    let mut out = serde_json::to_string(&records).expect("plain records serialize");
    out.push('\n');
    out
}

pub fn parse_order(text: &str) -> Result<Vec<usize>> {
    let order: Vec<usize> = serde_json::from_str(text)?;
    order.into_iter().map(|a| one_based(a, "agent")).collect()
}

pub fn format_order(order: &[usize]) -> String {
    let one: Vec<usize> = order.iter().map(|a| a + 1).collect();
    let mut out = serde_json::to_string(&one).expect("plain integers serialize");
    out.push('\n');
    out
}

pub(crate) fn one_based(index: usize, what: &str) -> Result<usize> {
    index
        .checked_sub(1)
        .ok_or_else(|| Error::DimensionMismatch(format!("{what} indices are 1-based; found 0")))
}
