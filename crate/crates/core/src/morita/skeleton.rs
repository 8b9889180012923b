use serde::Serialize;

use crate::groupoid::group::FiniteGroup;
use crate::groupoid::iso::{isotropy_group, IsoOutcome};
use crate::groupoid::FiniteGroupoid;

/// Isotropy groups here have at most a few dozen elements, so this budget is
/// never reached in practice.
const GROUP_ISO_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSummary {
    pub base: String,
    pub size: usize,
    pub isotropy_order: usize,
    pub isotropy_abelian: bool,
    /// Sorted element orders of the isotropy group.
    pub element_orders: Vec<usize>,
    #[serde(skip)]
    pub isotropy: FiniteGroup,
}

/// Connected components with their isotropy groups, ordered by least object.
#[derive(Debug, Clone, Serialize)]
pub struct SkeletonInvariant {
    pub components: Vec<ComponentSummary>,
}

pub fn skeleton_invariant(g: &FiniteGroupoid) -> SkeletonInvariant {
    let components = g
        .components()
        .into_iter()
        .map(|members| {
            let (isotropy, _) = isotropy_group(g, members[0]);
            let mut element_orders: Vec<usize> = (0..isotropy.order()).map(|a| isotropy.element_order(a)).collect();
            element_orders.sort_unstable();
            ComponentSummary {
                base: g.object_id(members[0]).to_string(),
                size: members.len(),
                isotropy_order: isotropy.order(),
                isotropy_abelian: isotropy.is_abelian(),
                element_orders,
                isotropy,
            }
        })
        .collect();
    SkeletonInvariant { components }
}

impl SkeletonInvariant {
    /// Bijection of components matching isotropy groups up to isomorphism;
    /// component sizes are ignored.
    pub fn morita_equivalent(&self, other: &SkeletonInvariant) -> bool {
        if self.components.len() != other.components.len() {
            return false;
        }
        let mut used = vec![false; other.components.len()];
        let mut budget = GROUP_ISO_BUDGET;
        for c in &self.components {
            let hit = other.components.iter().enumerate().position(|(j, d)| {
                !used[j]
                    && d.element_orders == c.element_orders
                    && match c.isotropy.find_isomorphism(&d.isotropy, &mut budget) {
                        IsoOutcome::Found(_) => true,
                        IsoOutcome::NotIsomorphic => false,
                        IsoOutcome::BudgetExceeded => panic!("isotropy isomorphism budget exhausted"),
                    }
            });
            match hit {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }
}

pub fn morita_oracle(g: &FiniteGroupoid, h: &FiniteGroupoid) -> bool {
    skeleton_invariant(g).morita_equivalent(&skeleton_invariant(h))
}
