use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::functor::EquivariantFunctor;
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::functor::{compose_unchecked, validate_functor};
use crate::groupoid::Obj;
use crate::morita::equivalence::weak_equivalence_report;

/// `(G/N) ⋉ (X/N)` for a normal subgroup `N`, with the projection from
/// `G ⋉ X`. Orbit ids are the least representative in brackets.
pub fn quotient_action(a: &Arc<ActionGroupoid>, normal: &[usize]) -> Result<EquivariantFunctor> {
    let g = &a.group;
    let (q, proj) = g.quotient(normal)?;
    let m = a.carrier_size();
    let mut label = vec![usize::MAX; m];
    let mut reps: Vec<Obj> = Vec::new();
    for x in 0..m {
        if label[x] != usize::MAX {
            continue;
        }
        for &k in normal {
            label[a.act(k, x)] = reps.len();
        }
        reps.push(x);
    }
    let carrier = reps.iter().map(|&x| format!("[{}]", a.carrier[x])).collect();
    // Representative of each coset: the least element mapping to it.
    let mut coset_rep = vec![usize::MAX; q.order()];
    for e in (0..g.order()).rev() {
        coset_rep[proj[e]] = e;
    }
    let mut act = Vec::with_capacity(q.order() * reps.len());
    for &c in &coset_rep {
        for &x in &reps {
            act.push(label[a.act(c, x)]);
        }
    }
    let quotient = Arc::new(action_groupoid(Arc::new(q), carrier, act)?);
    EquivariantFunctor::from_hom(a.clone(), quotient, proj, label)
}

/// `φ = ψ ∘ π` with `π` onto `(G/K) ⋉ (X/K)` for `K = ker φ̃` and `ψ` an
/// isomorphism.
#[derive(Debug, Clone)]
pub struct QuotientFactorization {
    pub kernel: Vec<usize>,
    pub pi: EquivariantFunctor,
    pub psi: EquivariantFunctor,
}

impl QuotientFactorization {
    pub fn quotient(&self) -> &Arc<ActionGroupoid> {
        &self.pi.target
    }
}

/// Checks that `subgroup` acts freely, naming a fixed point if not.
pub fn check_free(a: &ActionGroupoid, subgroup: &[usize]) -> Result<()> {
    let e = a.group.unit();
    for &k in subgroup {
        if k == e {
            continue;
        }
        if let Some(x) = (0..a.carrier_size()).find(|&x| a.act(k, x) == x) {
            return Err(Error::obligation(
                "kernel acts freely",
                format!("{} fixes {}", a.group.element_id(k), a.carrier[x]),
            ));
        }
    }
    Ok(())
}

pub fn quotient_factorization(phi: &EquivariantFunctor) -> Result<QuotientFactorization> {
    if !weak_equivalence_report(&phi.functor).is_ssw() {
        return Err(Error::precondition("quotient factorization needs an ssw functor"));
    }
    let (src, tgt) = (&phi.source, &phi.target);
    let kernel = src.group.kernel(&tgt.group, &phi.group_hom);
    check_free(src, &kernel)?;
    let pi = quotient_action(src, &kernel)?;
    let q = pi.target.clone();
    let coset_of = &pi.group_hom;
    let mut group_hom = vec![0; q.group.order()];
    for e in 0..src.group.order() {
        group_hom[coset_of[e]] = phi.group_hom[e];
    }
    let mut obj_map = vec![0; q.carrier_size()];
    for x in 0..src.carrier_size() {
        obj_map[pi.obj(x)] = phi.obj(x);
    }
    let psi = EquivariantFunctor::from_hom(q, tgt.clone(), group_hom, obj_map)
        .map_err(|e| Error::obligation("ψ equivariant", e.to_string()))?;
    if !psi.functor.is_bijective() {
        return Err(Error::obligation("ψ isomorphism", "ψ is not bijective"));
    }
    if !validate_functor(&psi.functor).ok {
        return Err(Error::obligation("ψ functor", "ψ fails the functor laws"));
    }
    if compose_unchecked(&psi.functor, &pi.functor) != phi.functor {
        return Err(Error::obligation("φ = ψπ", "composite differs from φ"));
    }
    Ok(QuotientFactorization { kernel, pi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::group::FiniteGroup;

    #[test]
    fn swap_to_point_quotient_is_terminal() {
        let swap = Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
                .unwrap(),
        );
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap());
        let phi = EquivariantFunctor::from_hom(swap, point, vec![0, 0], vec![0, 0]).unwrap();
        let qf = quotient_factorization(&phi).unwrap();
        assert_eq!(qf.kernel, vec![0, 1]);
        assert_eq!(qf.quotient().groupoid.object_count(), 1);
        assert_eq!(qf.quotient().groupoid.arrow_count(), 1);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let swap = Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
                .unwrap(),
        );
        let qf = quotient_factorization(&EquivariantFunctor::identity(&swap)).unwrap();
        assert_eq!(qf.kernel, vec![0]);
        assert!(qf.psi.functor.is_bijective());
    }
}
