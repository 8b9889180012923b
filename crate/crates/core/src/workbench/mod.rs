//! Instance generation over a catalog of small groups and the law suite
//! that runs over it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::groupoid::group::FiniteGroup;

pub mod catalog;
pub mod generate;
pub mod klein;
pub mod laws;
pub mod shrink;

pub use catalog::catalog;
pub use generate::{enumerate_actions, generate_weak_equivalences, ActionInstance, GeneratedWe, WeKind};
pub use klein::{klein_demo, KleinReport};
pub use laws::{run_law_suite, LawResult, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct InstanceBudget {
    pub max_group_order: usize,
    pub max_carrier_size: usize,
    pub max_objects: usize,
    pub sample_seed: u64,
    /// Corrupts one composition entry of every instance before the
    /// groupoid-axiom law runs.
    pub corrupt_composition: bool,
}

impl Default for InstanceBudget {
    fn default() -> Self {
        InstanceBudget { max_group_order: 8, max_carrier_size: 4, max_objects: 6, sample_seed: 0, corrupt_composition: false }
    }
}

impl InstanceBudget {
    pub fn exhaustive(&self) -> bool {
        let d = InstanceBudget::default();
        self.max_group_order <= d.max_group_order
            && self.max_carrier_size <= d.max_carrier_size
            && self.max_objects <= d.max_objects
    }

    /// Catalog groups within the order bound; beyond order 8 cyclic groups
    /// are added.
    pub fn groups(&self) -> Vec<(String, Arc<FiniteGroup>)> {
        let mut out: Vec<(String, Arc<FiniteGroup>)> =
            catalog(self.max_group_order).into_iter().map(|(n, g)| (n.to_string(), g)).collect();
        for n in 9..=self.max_group_order {
            out.push((format!("C{n}"), Arc::new(FiniteGroup::cyclic(n))));
        }
        out
    }

    /// Parses `key=value` pairs separated by commas, e.g.
    /// `max_group_order=4,max_carrier_size=3`. Unnamed keys keep defaults.
    pub fn parse(spec: &str) -> Result<InstanceBudget, String> {
        let mut b = InstanceBudget::default();
        if spec.trim().is_empty() || spec == "default" {
            return Ok(b);
        }
        for part in spec.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let key = key.trim();
            let value = value.trim();
            let number = || value.parse::<usize>().map_err(|e| format!("{key}: {e}"));
            match key {
                "max_group_order" | "group" => b.max_group_order = number()?,
                "max_carrier_size" | "carrier" => b.max_carrier_size = number()?,
                "max_objects" | "objects" => b.max_objects = number()?,
                "sample_seed" | "seed" => b.sample_seed = value.parse().map_err(|e| format!("{key}: {e}"))?,
                "corrupt_composition" => b.corrupt_composition = value.parse().map_err(|e| format!("{key}: {e}"))?,
                _ => return Err(format!("unknown budget key {key:?}")),
            }
        }
        if b.max_group_order == 0 {
            return Err("max_group_order must be positive".into());
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_budget() {
        let b = InstanceBudget::parse("group=4,carrier=3,seed=9").unwrap();
        assert_eq!((b.max_group_order, b.max_carrier_size, b.max_objects, b.sample_seed), (4, 3, 6, 9));
        assert!(b.exhaustive());
        assert!(InstanceBudget::parse("colour=3").is_err());
        assert!(!InstanceBudget::parse("carrier=5").unwrap().exhaustive());
        assert_eq!(InstanceBudget::parse("default").unwrap(), InstanceBudget::default());
    }
}
