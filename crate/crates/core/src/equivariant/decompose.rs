use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::balanced::{balanced_product, BalancedProduct};
use crate::equivariant::functor::EquivariantFunctor;
use crate::equivariant::properties::{full_property_report, Property};
use crate::equivariant::quotient::{check_free, quotient_action};
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::functor::{compose_unchecked, validate_functor};
use crate::groupoid::Obj;
use crate::morita::equivalence::weak_equivalence_report;

/// `φ = i ∘ π` through `Im(φ̃) ⋉ φ₀(X)`.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub kernel: Vec<usize>,
    /// `G ⋉ X → (G/K) ⋉ (X/K)`.
    pub quotient: EquivariantFunctor,
    /// `(G/K) ⋉ (X/K) → Im(φ̃) ⋉ φ₀(X)`, an isomorphism.
    pub middle_iso: EquivariantFunctor,
    /// `G ⋉ X → Im(φ̃) ⋉ φ₀(X)`, equal to `middle_iso ∘ quotient`.
    pub pi: EquivariantFunctor,
    /// `Im(φ̃) ⋉ φ₀(X) → H ⋉ Y`.
    pub i: EquivariantFunctor,
    /// `H ×_{Im φ̃} φ₀(X)`.
    pub balanced: BalancedProduct,
    /// `χ([h, y]) = h·y` on the classes of `balanced`, a bijection onto `Y`.
    pub chi: Vec<Obj>,
    /// Properties other than "effective" that hold on `G ⋉ X`, each checked
    /// on the middle.
    pub preserved: Vec<Property>,
}

impl DecompositionResult {
    pub fn middle(&self) -> &Arc<ActionGroupoid> {
        &self.pi.target
    }
}

pub fn decompose(phi: &EquivariantFunctor) -> Result<DecompositionResult> {
    let report = weak_equivalence_report(&phi.functor);
    if !report.is_weak_equivalence() {
        return Err(Error::precondition(format!(
            "decompose needs a weak equivalence: {}",
            report.es_witness.or(report.ff_witness).unwrap_or_default()
        )));
    }
    let (src, tgt) = (&phi.source, &phi.target);
    let (g, h) = (&src.group, &tgt.group);
    let kernel = g.kernel(h, &phi.group_hom);
    check_free(src, &kernel)?;
    let quotient = quotient_action(src, &kernel)?;

    let image = crate::groupoid::group::FiniteGroup::image(&phi.group_hom);
    let (im_group, im_incl) = h.subgroup(&image)?;
    let mut points = phi.functor.obj_map.clone();
    points.sort_unstable();
    points.dedup();
    let pos = |y: Obj| points.binary_search(&y).expect("point in the image");
    let im_pos = |b: usize| im_incl.binary_search(&b).expect("element in the image");
    let mut act = Vec::with_capacity(im_incl.len() * points.len());
    for &b in &im_incl {
        for &y in &points {
            let y2 = tgt.act(b, y);
            act.push(points.binary_search(&y2).map_err(|_| Error::obligation("image closed", "φ₀(X) not Im φ̃-stable"))?);
        }
    }
    let carrier = points.iter().map(|&y| tgt.carrier[y].clone()).collect();
    let middle = Arc::new(action_groupoid(Arc::new(im_group), carrier, act)?);

    let pi = EquivariantFunctor::from_hom(
        src.clone(),
        middle.clone(),
        phi.group_hom.iter().map(|&b| im_pos(b)).collect(),
        phi.functor.obj_map.iter().map(|&y| pos(y)).collect(),
    )?;
    let i = EquivariantFunctor::from_hom(middle.clone(), tgt.clone(), im_incl.clone(), points.clone())?;

    let q = &quotient.target;
    let mut iso_hom = vec![0; q.group.order()];
    for a in 0..g.order() {
        iso_hom[quotient.group_hom[a]] = pi.group_hom[a];
    }
    let mut iso_obj = vec![0; q.carrier_size()];
    for x in 0..src.carrier_size() {
        iso_obj[quotient.obj(x)] = pi.obj(x);
    }
    let middle_iso = EquivariantFunctor::from_hom(q.clone(), middle.clone(), iso_hom, iso_obj)
        .map_err(|e| Error::obligation("middle isomorphism", e.to_string()))?;
    if !middle_iso.functor.is_bijective() {
        return Err(Error::obligation("middle isomorphism", "(G/K) ⋉ (X/K) → middle is not bijective"));
    }
    if compose_unchecked(&middle_iso.functor, &quotient.functor) != pi.functor {
        return Err(Error::obligation("π through the quotient", "π differs from the recorded isomorphism"));
    }
    if compose_unchecked(&i.functor, &pi.functor) != phi.functor {
        return Err(Error::obligation("φ = iπ", "composite differs from φ"));
    }
    for (f, name) in [(&pi, "π functor"), (&i, "i functor")] {
        let r = validate_functor(&f.functor);
        if !r.ok {
            return Err(Error::obligation(name, r.to_string()));
        }
    }
    if !weak_equivalence_report(&pi.functor).is_ssw() {
        return Err(Error::obligation("π ssw", "π is not ssw"));
    }
    if !weak_equivalence_report(&i.functor).is_weak_equivalence() {
        return Err(Error::obligation("i weak equivalence", "i is not a weak equivalence"));
    }

    let balanced = balanced_product(h, &im_incl, &middle)?;
    let chi: Vec<Obj> =
        balanced.representatives.iter().map(|&(b, y)| tgt.act(b, points[y])).collect();
    let mut hit = vec![false; tgt.carrier_size()];
    for &y in &chi {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::obligation("χ bijective", format!("{} hit twice", tgt.carrier[y])));
        }
    }
    if let Some(y) = hit.iter().position(|&b| !b) {
        return Err(Error::obligation("χ bijective", format!("{} not hit", tgt.carrier[y])));
    }

    let before = full_property_report(src);
    let after = full_property_report(&middle);
    let mut preserved = Vec::new();
    for p in Property::ALL {
        if p == Property::Effective || before.holds(p) != Some(true) {
            continue;
        }
        if after.holds(p) != Some(true) {
            return Err(Error::obligation("property preservation", format!("{p} lost on the middle")));
        }
        preserved.push(p);
    }

    Ok(DecompositionResult { kernel, quotient, middle_iso, pi, i, balanced, chi, preserved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::group::FiniteGroup;

    #[test]
    fn swap_to_point() {
        let swap = Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
                .unwrap(),
        );
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap());
        let phi = EquivariantFunctor::from_hom(swap, point, vec![0, 0], vec![0, 0]).unwrap();
        let d = decompose(&phi).unwrap();
        assert_eq!(d.kernel, vec![0, 1]);
        assert_eq!(d.middle().carrier_size(), 1);
        assert!(d.i.functor.is_bijective());
        assert!(d.preserved.contains(&Property::Free));
    }

    #[test]
    fn non_we_is_a_precondition_failure() {
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap());
        let two = Arc::new(
            action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["a".into(), "b".into()], vec![0, 1]).unwrap(),
        );
        let phi = EquivariantFunctor::from_hom(point, two, vec![0], vec![0]).unwrap();
        assert!(matches!(decompose(&phi), Err(Error::Precondition(_))));
    }
}
