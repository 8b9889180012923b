use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::functor::EquivariantFunctor;
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::functor::{compose_unchecked, validate_functor, Functor};
use crate::groupoid::group::FiniteGroup;
use crate::morita::equivalence::weak_equivalence_report;
use crate::morita::pullback::{strict_pullback, weak_pullback, StrictPullback, WeakPullback};

/// `(G ×_{φ̃,ψ̃} H) ⋉ (X ×_{φ₀,ψ₀} Y)` with its projections and the canonical
/// isomorphism onto the plain strict pullback.
#[derive(Debug, Clone)]
pub struct EquivariantStrictPullback {
    pub action: Arc<ActionGroupoid>,
    pub pr1: EquivariantFunctor,
    pub pr2: EquivariantFunctor,
    pub plain: StrictPullback,
    pub iso: Functor,
}

pub fn equivariant_strict_pullback(
    phi: &EquivariantFunctor,
    psi: &EquivariantFunctor,
) -> Result<EquivariantStrictPullback> {
    if phi.target != psi.target {
        return Err(Error::mismatch("equivariant feet have different codomains"));
    }
    if !weak_equivalence_report(&phi.functor).is_ssw() {
        return Err(Error::precondition("first foot must be ssw"));
    }
    let (a, b) = (&phi.source, &psi.source);
    let (g, h) = (&a.group, &b.group);
    let elements: Vec<(usize, usize)> = (0..g.order())
        .flat_map(|x| (0..h.order()).map(move |y| (x, y)))
        .filter(|&(x, y)| phi.group_hom[x] == psi.group_hom[y])
        .collect();
    let prod = FiniteGroup::product(g, h);
    let subset: Vec<usize> = elements.iter().map(|&(x, y)| x * h.order() + y).collect();
    let (group, _) = prod.subgroup(&subset)?;
    let points: Vec<(usize, usize)> = (0..a.carrier_size())
        .flat_map(|x| (0..b.carrier_size()).map(move |y| (x, y)))
        .filter(|&(x, y)| phi.obj(x) == psi.obj(y))
        .collect();
    let point_index = |p: (usize, usize)| points.binary_search(&p).expect("fibered point");
    let carrier = points.iter().map(|&(x, y)| format!("({},{})", a.carrier[x], b.carrier[y])).collect();
    let mut act = Vec::with_capacity(elements.len() * points.len());
    for &(gx, hy) in &elements {
        for &(x, y) in &points {
            act.push(point_index((a.act(gx, x), b.act(hy, y))));
        }
    }
    let action = Arc::new(action_groupoid(Arc::new(group), carrier, act)?);
    let pr1 = EquivariantFunctor::from_hom(
        action.clone(),
        a.clone(),
        elements.iter().map(|p| p.0).collect(),
        points.iter().map(|p| p.0).collect(),
    )?;
    let pr2 = EquivariantFunctor::from_hom(
        action.clone(),
        b.clone(),
        elements.iter().map(|p| p.1).collect(),
        points.iter().map(|p| p.1).collect(),
    )?;

    let plain = strict_pullback(&phi.functor, &psi.functor)?;
    let m = points.len();
    let obj_map = points.iter().map(|&(x, y)| plain.object(x, y).expect("same fibered objects")).collect();
    let arr_map = (0..elements.len() * m)
        .map(|idx| {
            let ((gx, hy), (x, y)) = (elements[idx / m], points[idx % m]);
            plain.arrow(a.arrow(gx, x), b.arrow(hy, y)).expect("same fibered arrows")
        })
        .collect();
    let iso = Functor { dom: action.groupoid.clone(), cod: plain.apex.clone(), obj_map, arr_map };
    check_iso(&iso)?;
    if compose_unchecked(&plain.pr1, &iso) != pr1.functor || compose_unchecked(&plain.pr2, &iso) != pr2.functor {
        return Err(Error::obligation("projections commute", "iso does not intertwine the projections"));
    }
    if !weak_equivalence_report(&pr2.functor).is_ssw() {
        return Err(Error::obligation("pr2 ssw", "pr2 is not ssw"));
    }
    Ok(EquivariantStrictPullback { action, pr1, pr2, plain, iso })
}

fn check_iso(iso: &Functor) -> Result<()> {
    if !iso.is_bijective() {
        return Err(Error::obligation("canonical isomorphism", "comparison map is not bijective"));
    }
    let r = validate_functor(iso);
    if !r.ok {
        return Err(Error::obligation("canonical isomorphism", r.to_string()));
    }
    Ok(())
}

/// The weak pullback of two functors out of action groupoids as a
/// `(G × H)`-action groupoid, acting by
/// `((g, h), (x, k, y)) ↦ (gx, ψ(h, y)·k·φ(g, x)⁻¹, hy)`.
#[derive(Debug, Clone)]
pub struct EquivariantWeakPullback {
    pub action: Arc<ActionGroupoid>,
    pub pr1: EquivariantFunctor,
    pub pr3: EquivariantFunctor,
    pub plain: WeakPullback,
    pub iso: Functor,
}

pub fn equivariant_weak_pullback(
    a: &Arc<ActionGroupoid>,
    phi: &Functor,
    b: &Arc<ActionGroupoid>,
    psi: &Functor,
) -> Result<EquivariantWeakPullback> {
    if phi.dom != a.groupoid || psi.dom != b.groupoid {
        return Err(Error::mismatch("feet do not start at the given action groupoids"));
    }
    if !weak_equivalence_report(phi).is_weak_equivalence() {
        return Err(Error::precondition("first foot must be a weak equivalence"));
    }
    let plain = weak_pullback(phi, psi)?;
    let (g, h) = (&a.group, &b.group);
    let k = &phi.cod;
    let group = Arc::new(FiniteGroup::product(g, h));
    let w = &plain.apex;
    let n = w.object_count();
    let mut act = Vec::with_capacity(group.order() * n);
    for gh in 0..group.order() {
        let (gx, hy) = (gh / h.order(), gh % h.order());
        for o in 0..n {
            let (x, c, y) = plain.object_parts(o);
            let c2 = k
                .compose_all(&[psi.arr(b.arrow(hy, y)), c, k.inverse(phi.arr(a.arrow(gx, x)))])
                .expect("composable");
            let target = plain
                .object(a.act(gx, x), c2, b.act(hy, y))
                .ok_or_else(|| Error::obligation("action closed", "image triple missing"))?;
            act.push(target);
        }
    }
    let action = Arc::new(action_groupoid(group.clone(), w.objects().to_vec(), act)?);
    let pr1 = EquivariantFunctor::from_hom(
        action.clone(),
        a.clone(),
        (0..group.order()).map(|gh| gh / h.order()).collect(),
        plain.pr1.obj_map.clone(),
    )?;
    let pr3 = EquivariantFunctor::from_hom(
        action.clone(),
        b.clone(),
        (0..group.order()).map(|gh| gh % h.order()).collect(),
        plain.pr3.obj_map.clone(),
    )?;
    let arr_map = (0..group.order() * n)
        .map(|idx| {
            let (gh, o) = (idx / n, idx % n);
            let (x, c, y) = plain.object_parts(o);
            plain
                .arrow(a.arrow(gh / h.order(), x), c, b.arrow(gh % h.order(), y))
                .expect("arrow of the weak pullback")
        })
        .collect();
    let iso = Functor { dom: action.groupoid.clone(), cod: w.clone(), obj_map: (0..n).collect(), arr_map };
    check_iso(&iso)?;
    if compose_unchecked(&plain.pr1, &iso) != pr1.functor || compose_unchecked(&plain.pr3, &iso) != pr3.functor {
        return Err(Error::obligation("projections commute", "iso does not intertwine the projections"));
    }
    if !weak_equivalence_report(&pr3.functor).is_ssw() {
        return Err(Error::obligation("pr3 ssw", "pr3 is not ssw"));
    }
    Ok(EquivariantWeakPullback { action, pr1, pr3, plain, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::properties::{full_property_report, Property};

    fn swap_to_point() -> EquivariantFunctor {
        let swap = Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
                .unwrap(),
        );
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).unwrap());
        EquivariantFunctor::from_hom(swap, point, vec![0, 0], vec![0, 0]).unwrap()
    }

    #[test]
    fn strict_pullback_of_swap_with_itself() {
        let phi = swap_to_point();
        let p = equivariant_strict_pullback(&phi, &phi).unwrap();
        assert_eq!(p.action.group.order(), 4);
        assert_eq!(p.action.carrier_size(), 4);
        let r = full_property_report(&p.action);
        assert_eq!(r.holds(Property::Free), Some(true));
        assert_eq!(r.holds(Property::Transitive), Some(true));
    }

    #[test]
    fn weak_pullback_of_bz2_identities() {
        let bz2 = Arc::new(action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap());
        let id = Functor::identity(&bz2.groupoid);
        let p = equivariant_weak_pullback(&bz2, &id, &bz2, &id).unwrap();
        assert_eq!(p.action.group.order(), 4);
        assert_eq!(p.action.carrier_size(), 2);
    }
}
