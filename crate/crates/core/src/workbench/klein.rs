use std::sync::Arc;

use serde::Serialize;

use crate::equivariant::functor::EquivariantFunctor;
use crate::equivariant::properties::{full_property_report, Property};
use crate::equivariant::quotient::{check_free, quotient_action, quotient_factorization};
use crate::error::Result;
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::iso::isotropy_group;
use crate::workbench::catalog::klein_four;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleinReport {
    pub original_effective: bool,
    pub original_free: bool,
    pub original_transitive: bool,
    pub kernel: Vec<String>,
    pub kernel_acts_freely: bool,
    pub quotient_objects: Vec<String>,
    pub quotient_isotropy_orders: Vec<usize>,
    pub quotient_effective: bool,
    pub quotient_effective_witness: Option<String>,
}

/// The Klein four-group acting on the four cardinal points of a square.
pub fn klein_square() -> Arc<ActionGroupoid> {
    // (e,τ) swaps E and W, (τ,e) swaps N and S, (τ,τ) rotates.
    let act = vec![0, 1, 2, 3, 0, 1, 3, 2, 1, 0, 2, 3, 1, 0, 3, 2];
    let carrier = ["N", "S", "E", "W"].iter().map(|s| s.to_string()).collect();
    Arc::new(action_groupoid(Arc::new(klein_four()), carrier, act).expect("square action"))
}

/// The projection of the square onto its quotient by the half turn.
pub fn klein_projection() -> Result<EquivariantFunctor> {
    quotient_action(&klein_square(), &[0, 3])
}

pub fn klein_demo() -> Result<KleinReport> {
    let a = klein_square();
    let before = full_property_report(&a);
    let pi = klein_projection()?;
    let qf = quotient_factorization(&pi)?;
    let q = &pi.target;
    let after = full_property_report(q);
    Ok(KleinReport {
        original_effective: before.holds(Property::Effective) == Some(true),
        original_free: before.holds(Property::Free) == Some(true),
        original_transitive: before.holds(Property::Transitive) == Some(true),
        kernel: qf.kernel.iter().map(|&k| a.group.element_id(k).to_string()).collect(),
        kernel_acts_freely: check_free(&a, &qf.kernel).is_ok(),
        quotient_objects: q.carrier.clone(),
        quotient_isotropy_orders: (0..q.carrier_size()).map(|x| isotropy_group(&q.groupoid, x).0.order()).collect(),
        quotient_effective: after.holds(Property::Effective) == Some(true),
        quotient_effective_witness: after.get(Property::Effective).and_then(|v| v.witness.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_matches_the_worked_example() {
        let r = klein_demo().unwrap();
        assert!(r.original_effective);
        assert!(!r.original_free);
        assert!(!r.original_transitive);
        assert_eq!(r.kernel, vec!["(e,e)", "(τ,τ)"]);
        assert!(r.kernel_acts_freely);
        assert_eq!(r.quotient_objects, vec!["[N]", "[E]"]);
        assert_eq!(r.quotient_isotropy_orders, vec![2, 2]);
        assert!(!r.quotient_effective);
        assert!(r.quotient_effective_witness.is_some());
    }
}
