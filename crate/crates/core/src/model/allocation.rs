use crate::error::{Error, Result};
use crate::model::Instance;

/// An integral (possibly partial) allocation of items to agents.
///
/// Bundles are kept sorted so that equal allocations compare and serialize
/// identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
    m: usize,
    complete: bool,
}

impl Allocation {
    /// Build an allocation over `m` items. Bundles must be disjoint and in range.
    pub fn new(mut bundles: Vec<Vec<usize>>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        let mut assigned = 0;
        for bundle in &mut bundles {
            bundle.sort_unstable();
            for &item in bundle.iter() {
                if item >= m {
                    return Err(Error::ItemOutOfRange { item: item + 1, m });
                }
                if std::mem::replace(&mut seen[item], true) {
                    return Err(Error::DuplicateItem { item: item + 1 });
                }
                assigned += 1;
            }
        }
        Ok(Allocation {
            bundles,
            m,
            complete: assigned == m,
        })
    }

    /// Build from an owner per item (`None` leaves the item unallocated).
    pub fn from_owners(owners: &[Option<usize>], n: usize) -> Result<Self> {
        let mut bundles = vec![Vec::new(); n];
        for (item, owner) in owners.iter().enumerate() {
            if let Some(agent) = *owner {
                if agent >= n {
                    return Err(Error::AgentOutOfRange { agent: agent + 1, n });
                }
                bundles[agent].push(item);
            }
        }
        Allocation::new(bundles, owners.len())
    }

    /// Checks that the allocation matches the instance's dimensions.
    pub fn for_instance(bundles: Vec<Vec<usize>>, inst: &Instance) -> Result<Self> {
        if bundles.len() != inst.n() {
            return Err(Error::DimensionMismatch(format!(
                "allocation has {} bundles, instance has {} agents",
                bundles.len(),
                inst.n()
            )));
        }
        Allocation::new(bundles, inst.m())
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn owners(&self) -> Vec<Option<usize>> {
        let mut owners = vec![None; self.m];
        for (agent, bundle) in self.bundles.iter().enumerate() {
            for &item in bundle {
                owners[item] = Some(agent);
            }
        }
        owners
    }

    pub fn unallocated(&self) -> Vec<usize> {
        self.owners()
            .iter()
            .enumerate()
            .filter_map(|(j, o)| o.is_none().then_some(j))
            .collect()
    }

    /// Every item some agent values is allocated. Items nobody values may be
    /// left out: they change no agent's utility.
    pub(crate) fn require_complete(&self, inst: &Instance) -> Result<()> {
        let missing = self
            .unallocated()
            .into_iter()
            .filter(|&j| inst.is_valued_by_anyone(j))
            .count();
        if missing == 0 {
            Ok(())
        } else {
            Err(Error::IncompleteAllocation { unallocated: missing })
        }
    }

    pub(crate) fn require_matches(&self, inst: &Instance) -> Result<()> {
        if self.n() != inst.n() || self.m != inst.m() {
            return Err(Error::DimensionMismatch(format!(
                "allocation is {}x{} but instance is {}x{}",
                self.n(),
                self.m,
                inst.n(),
                inst.m()
            )));
        }
        Ok(())
    }
}

/// An agent's value for a bundle, v_i(S).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleValue {
    pub agent: usize,
    pub bundle: Vec<usize>,
    pub value: u64,
}

impl BundleValue {
    pub fn new(inst: &Instance, agent: usize, bundle: &[usize]) -> Self {
        BundleValue {
            agent,
            bundle: bundle.to_vec(),
            value: inst.bundle_value(agent, bundle),
        }
    }
}
