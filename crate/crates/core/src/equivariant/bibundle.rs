use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::functor::EquivariantFunctor;
use crate::equivariant::properties::{full_property_report, Property};
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::functor::{compose_unchecked, validate_functor, Functor};
use crate::groupoid::group::FiniteGroup;
use crate::groupoid::natural::NaturalTransformation;
use crate::groupoid::tuple_id;
use crate::localization::span::{Anafunctor, GeneralizedMorphism};
use crate::localization::two_cell::{validate_two_cell, TwoCellDiagram};
use crate::morita::equivalence::weak_equivalence_report;

/// Output of [`equivariant_anafunctorify`].
#[derive(Debug, Clone)]
pub struct EquivariantAnafunctor {
    pub anafunctor: Anafunctor,
    /// `(G × H) ⋉ E`.
    pub action: Arc<ActionGroupoid>,
    pub chi: EquivariantFunctor,
    pub omega: EquivariantFunctor,
    /// `K → (G × H) ⋉ E`, `z ↦ [1, z, 1]`.
    pub theta: Functor,
    pub witness: TwoCellDiagram,
    /// Set when both feet are effective but the middle is not.
    pub effective_divergence: Option<String>,
}

/// Replaces a generalized morphism `G ⋉ X ← K → H ⋉ Y` by an anafunctor
/// whose middle is an action groupoid.
///
/// `E` is the set of triples `(a, z, b)` with `a: x → φ(z)` in `G ⋉ X` and
/// `b: y → ψ(z)` in `H ⋉ Y`, modulo `(a, z, b) ~ (φκ∘a, z', ψκ∘b)` for
/// `κ: z → z'`. `(g, h)` acts by `a ↦ a∘(g, x)⁻¹`, `b ↦ b∘(h, y)⁻¹`.
pub fn equivariant_anafunctorify(
    f: &GeneralizedMorphism,
    a: &Arc<ActionGroupoid>,
    b: &Arc<ActionGroupoid>,
) -> Result<EquivariantAnafunctor> {
    if *f.source() != a.groupoid || *f.target() != b.groupoid {
        return Err(Error::mismatch("feet are not the given action groupoids"));
    }
    let (phi, psi) = (&f.left, &f.right);
    let k = f.middle();
    let (g, h) = (&a.group, &b.group);
    let (ng, nh) = (g.order(), h.order());
    let index = |ga: usize, z: usize, hb: usize| (z * ng + ga) * nh + hb;

    let total = k.object_count() * ng * nh;
    let mut class_of = vec![usize::MAX; total];
    let mut reps: Vec<(usize, usize, usize)> = Vec::new();
    for idx in 0..total {
        if class_of[idx] != usize::MAX {
            continue;
        }
        let (z, ga, hb) = (idx / (ng * nh), idx / nh % ng, idx % nh);
        for &kappa in k.out_arrows(z) {
            let gk = a.split(phi.arr(kappa)).0;
            let hk = b.split(psi.arr(kappa)).0;
            class_of[index(g.mul(gk, ga), k.tgt(kappa), h.mul(hk, hb))] = reps.len();
        }
        reps.push((ga, z, hb));
    }
    let anchor_x = |ga: usize, z: usize| a.act(g.inv(ga), phi.obj(z));
    let anchor_y = |hb: usize, z: usize| b.act(h.inv(hb), psi.obj(z));
    let carrier = reps
        .iter()
        .map(|&(ga, z, hb)| {
            tuple_id(&[
                a.groupoid.arrow_id(a.arrow(ga, anchor_x(ga, z))),
                k.object_id(z),
                b.groupoid.arrow_id(b.arrow(hb, anchor_y(hb, z))),
            ])
        })
        .collect();

    let group = Arc::new(FiniteGroup::product(g, h));
    let mut act = Vec::with_capacity(group.order() * reps.len());
    for gh in 0..group.order() {
        let (gg, hh) = (gh / nh, gh % nh);
        for &(ga, z, hb) in &reps {
            act.push(class_of[index(g.mul(ga, g.inv(gg)), z, h.mul(hb, h.inv(hh)))]);
        }
    }
    let action = Arc::new(action_groupoid(group.clone(), carrier, act)?);

    let chi = EquivariantFunctor::from_hom(
        action.clone(),
        a.clone(),
        (0..group.order()).map(|gh| gh / nh).collect(),
        reps.iter().map(|&(ga, z, _)| anchor_x(ga, z)).collect(),
    )
    .map_err(|e| Error::obligation("left leg equivariant", e.to_string()))?;
    let omega = EquivariantFunctor::from_hom(
        action.clone(),
        b.clone(),
        (0..group.order()).map(|gh| gh % nh).collect(),
        reps.iter().map(|&(_, z, hb)| anchor_y(hb, z)).collect(),
    )
    .map_err(|e| Error::obligation("right leg equivariant", e.to_string()))?;

    let (eg, eh) = (g.unit(), h.unit());
    let obj_map: Vec<usize> = (0..k.object_count()).map(|z| class_of[index(eg, z, eh)]).collect();
    let arr_map = k
        .arrows()
        .iter()
        .enumerate()
        .map(|(kappa, _)| {
            let gk = a.split(phi.arr(kappa)).0;
            let hk = b.split(psi.arr(kappa)).0;
            action.arrow(gk * nh + hk, obj_map[k.src(kappa)])
        })
        .collect();
    let theta = Functor { dom: k.clone(), cod: action.groupoid.clone(), obj_map, arr_map };
    let r = validate_functor(&theta);
    if !r.ok {
        return Err(Error::obligation("theta functor", r.to_string()));
    }
    if !weak_equivalence_report(&theta).is_weak_equivalence() {
        return Err(Error::obligation("theta weak equivalence", "K → (G × H) ⋉ E"));
    }
    if compose_unchecked(&chi.functor, &theta) != *phi || compose_unchecked(&omega.functor, &theta) != *psi {
        return Err(Error::obligation("legs through theta", "χθ or ωθ differs from the original legs"));
    }

    let anafunctor = Anafunctor::new(chi.functor.clone(), omega.functor.clone())
        .map_err(|e| Error::obligation("left leg ssw", e.to_string()))?;
    let witness = TwoCellDiagram {
        top: f.clone(),
        bottom: anafunctor.as_generalized().clone(),
        mediator: k.clone(),
        alpha: Functor::identity(k),
        alpha_prime: theta.clone(),
        eta1: NaturalTransformation::identity(phi),
        eta2: NaturalTransformation::identity(psi),
    };
    let r = validate_two_cell(&witness)?;
    if !r.ok {
        return Err(Error::obligation("witness 2-cell", r.to_string()));
    }

    let (left, right, middle) = (full_property_report(a), full_property_report(b), full_property_report(&action));
    for p in [Property::Free, Property::Transitive] {
        if middle.holds(p) != left.holds(p) {
            return Err(Error::obligation("property agreement", format!("{p} differs between G ⋉ X and the middle")));
        }
    }
    let mut effective_divergence = None;
    if left.holds(Property::Effective) == Some(true) && right.holds(Property::Effective) == Some(true) {
        if let Some(v) = middle.get(Property::Effective).filter(|v| !v.holds) {
            effective_divergence = Some(v.witness.clone().unwrap_or_default());
        }
    }

    Ok(EquivariantAnafunctor { anafunctor, action, chi, omega, theta, witness, effective_divergence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morita::skeleton::morita_oracle;

    fn swap() -> Arc<ActionGroupoid> {
        Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0]).unwrap(),
        )
    }

    fn point() -> Arc<ActionGroupoid> {
        Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap())
    }

    #[test]
    fn identity_span_middle_is_morita_equal() {
        let a = swap();
        let out = equivariant_anafunctorify(&GeneralizedMorphism::identity(&a.groupoid), &a, &a).unwrap();
        assert!(morita_oracle(&out.action.groupoid, &a.groupoid));
        // (g_a, z, g_b) modulo the left G: |G| · |X| classes.
        assert_eq!(out.action.carrier_size(), 4);
        assert!(out.effective_divergence.is_none());
    }

    #[test]
    fn swap_equivalence() {
        let (a, p) = (swap(), point());
        let to_point = EquivariantFunctor::from_hom(a.clone(), p.clone(), vec![0, 0], vec![0, 0]).unwrap();
        let f = GeneralizedMorphism::new(Functor::identity(&a.groupoid), to_point.functor).unwrap();
        let out = equivariant_anafunctorify(&f, &a, &p).unwrap();
        assert_eq!(out.action.carrier_size(), 2);
        assert!(weak_equivalence_report(&out.chi.functor).is_ssw());
        assert!(weak_equivalence_report(&out.omega.functor).is_ssw());
    }
}
