use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::functor::EquivariantFunctor;
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::group::FiniteGroup;
use crate::groupoid::Obj;
use crate::morita::equivalence::weak_equivalence_report;

/// `G ×_K X` with its `G`-action and the inclusion `K ⋉ X → G ⋉ (G ×_K X)`.
#[derive(Debug, Clone)]
pub struct BalancedProduct {
    pub action: Arc<ActionGroupoid>,
    pub inclusion: EquivariantFunctor,
    /// Least `(g, x)` of each class, in carrier order.
    pub representatives: Vec<(usize, Obj)>,
    /// Class of `(g, x)` at index `g * |X| + x`.
    pub class_of: Vec<usize>,
}

/// Builds the balanced product for a `K`-action `a` and an injective
/// homomorphism `incl: K → G`.
pub fn balanced_product(g: &Arc<FiniteGroup>, incl: &[usize], a: &Arc<ActionGroupoid>) -> Result<BalancedProduct> {
    let k = &a.group;
    if !k.is_homomorphism(g, incl) || FiniteGroup::image(incl).len() != k.order() {
        return Err(Error::precondition("K is not a subgroup of G via the given map"));
    }
    let m = a.carrier_size();
    let n = g.order();
    // k·(h, x) = (h k⁻¹, k x)
    let mut class_of = vec![usize::MAX; n * m];
    let mut representatives = Vec::new();
    for idx in 0..n * m {
        if class_of[idx] != usize::MAX {
            continue;
        }
        let (h, x) = (idx / m, idx % m);
        for kk in 0..k.order() {
            let h2 = g.mul(h, g.inv(incl[kk]));
            class_of[h2 * m + a.act(kk, x)] = representatives.len();
        }
        representatives.push((h, x));
    }
    let carrier =
        representatives.iter().map(|&(h, x)| format!("[{},{}]", g.element_id(h), a.carrier[x])).collect();
    let mut act = Vec::with_capacity(n * representatives.len());
    for h in 0..n {
        for &(h2, x) in &representatives {
            act.push(class_of[g.mul(h, h2) * m + x]);
        }
    }
    let action = Arc::new(action_groupoid(g.clone(), carrier, act)?);
    let obj_map = (0..m).map(|x| class_of[g.unit() * m + x]).collect();
    let inclusion = EquivariantFunctor::from_hom(a.clone(), action.clone(), incl.to_vec(), obj_map)?;
    if !weak_equivalence_report(&inclusion.functor).is_weak_equivalence() {
        return Err(Error::obligation("inclusion weak equivalence", "K ⋉ X → G ⋉ (G ×_K X)"));
    }
    Ok(BalancedProduct { action, inclusion, representatives, class_of })
}

/// Restricts an action to a subgroup, keeping element and point ids.
pub fn restrict_action(a: &ActionGroupoid, subgroup: &[usize]) -> Result<(Arc<ActionGroupoid>, Vec<usize>)> {
    let (k, incl) = a.group.subgroup(subgroup)?;
    let m = a.carrier_size();
    let act = incl.iter().flat_map(|&g| (0..m).map(move |x| (g, x))).map(|(g, x)| a.act(g, x)).collect();
    let restricted = action_groupoid(Arc::new(k), a.carrier.clone(), act)?;
    Ok((Arc::new(restricted), incl))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_subgroup_gives_full_product() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap());
        let bp = balanced_product(&g, &[0], &point).unwrap();
        assert_eq!(bp.action.carrier_size(), 3);
    }

    #[test]
    fn whole_group_gives_back_the_carrier() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let swap = Arc::new(action_groupoid(g.clone(), vec!["0".into(), "1".into()], vec![0, 1, 1, 0]).unwrap());
        let bp = balanced_product(&g, &[0, 1], &swap).unwrap();
        assert_eq!(bp.action.carrier_size(), 2);
        assert!(bp.inclusion.functor.is_bijective());
    }

    #[test]
    fn non_subgroup_map_is_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let z2 = Arc::new(action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap());
        assert!(balanced_product(&g, &[0, 1], &z2).is_err());
        assert!(balanced_product(&g, &[0, 2], &z2).is_ok());
    }
}
