#![allow(dead_code)]

use fairdiv_core::model::{random_instance, InstanceParams};
use fairdiv_core::{Allocation, Instance, ValuationClass};

/// EF straight from the definition.
pub fn naive_ef(inst: &Instance, alloc: &Allocation) -> bool {
    pairs(inst.n()).all(|(i, j)| inst.bundle_value(i, alloc.bundle(i)) >= inst.bundle_value(i, alloc.bundle(j)))
}

/// EF1: some good in the envied bundle removes the envy (empty bundles pass).
pub fn naive_ef1(inst: &Instance, alloc: &Allocation) -> bool {
    pairs(inst.n()).all(|(i, j)| {
        let own = inst.bundle_value(i, alloc.bundle(i));
        let bundle = alloc.bundle(j);
        bundle.is_empty() || bundle.iter().any(|&g| own >= without(inst, i, bundle, g))
    })
}

/// EFX: every single good in the envied bundle removes the envy.
pub fn naive_efx(inst: &Instance, alloc: &Allocation) -> bool {
    pairs(inst.n()).all(|(i, j)| {
        let own = inst.bundle_value(i, alloc.bundle(i));
        let bundle = alloc.bundle(j);
        bundle.iter().all(|&g| own >= without(inst, i, bundle, g))
    })
}

fn without(inst: &Instance, agent: usize, bundle: &[usize], item: usize) -> u64 {
    let rest: Vec<usize> = bundle.iter().copied().filter(|&g| g != item).collect();
    inst.bundle_value(agent, &rest)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j)
}

/// Every complete allocation of `m` items to `n` agents.
pub fn all_allocations(n: usize, m: usize) -> impl Iterator<Item = Allocation> {
    let total = (n as u64).pow(m as u32);
    (0..total).map(move |mut code| {
        let owners: Vec<Option<usize>> = (0..m)
            .map(|_| {
                let a = (code % n as u64) as usize;
                code /= n as u64;
                Some(a)
            })
            .collect();
        Allocation::from_owners(&owners, n).unwrap()
    })
}

pub fn additive(n: usize, m: usize, max: u64, seed: u64) -> Instance {
    random_instance(&InstanceParams::new(n, m, ValuationClass::Additive).value_range(0, max), seed).unwrap()
}

pub fn restricted(n: usize, m: usize, max: u64, t: usize, density: f64, seed: u64) -> Instance {
    let params = InstanceParams::new(n, m, ValuationClass::RestrictedAdditive)
        .value_range(1, max)
        .distinct_values(t)
        .density(density);
    random_instance(&params, seed).unwrap()
}
