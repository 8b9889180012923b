use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::functor::{compose_unchecked, Functor};
use crate::groupoid::natural::NaturalTransformation;
use crate::groupoid::FiniteGroupoid;
use crate::localization::two_cell::TwoCellDiagram;
use crate::morita::equivalence::weak_equivalence_report;
use crate::morita::pullback::{strict_pullback, weak_pullback, StrictPullback, WeakPullback};

/// A span `G ⇐ K → H` whose left leg is a weak equivalence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedMorphism {
    pub left: Functor,
    pub right: Functor,
}

impl GeneralizedMorphism {
    pub fn new(left: Functor, right: Functor) -> Result<Self> {
        if left.dom != right.dom {
            return Err(Error::mismatch("span legs start at different groupoids"));
        }
        let report = weak_equivalence_report(&left);
        if !report.is_weak_equivalence() {
            return Err(Error::precondition(format!(
                "left leg is not a weak equivalence: {}",
                report.es_witness.or(report.ff_witness).unwrap_or_default()
            )));
        }
        Ok(GeneralizedMorphism { left, right })
    }

    pub fn middle(&self) -> &Arc<FiniteGroupoid> {
        &self.left.dom
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.left.cod
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.right.cod
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GeneralizedMorphism { left: Functor::identity(g), right: Functor::identity(g) }
    }

    /// Same endpoints, so a 2-cell between the two can exist.
    pub fn parallel(&self, other: &GeneralizedMorphism) -> bool {
        self.source() == other.source() && self.target() == other.target()
    }
}

/// A generalized morphism whose left leg is also surjective on objects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Anafunctor(GeneralizedMorphism);

impl Deref for Anafunctor {
    type Target = GeneralizedMorphism;

    fn deref(&self) -> &GeneralizedMorphism {
        &self.0
    }
}

impl Anafunctor {
    pub fn new(left: Functor, right: Functor) -> Result<Self> {
        if left.dom != right.dom {
            return Err(Error::mismatch("span legs start at different groupoids"));
        }
        let report = weak_equivalence_report(&left);
        if !report.is_ssw() {
            return Err(Error::precondition("left leg of an anafunctor must be ssw"));
        }
        Ok(Anafunctor(GeneralizedMorphism { left, right }))
    }

    pub fn from_generalized(f: GeneralizedMorphism) -> Result<Self> {
        Anafunctor::new(f.left, f.right)
    }

    pub fn as_generalized(&self) -> &GeneralizedMorphism {
        &self.0
    }

    pub fn into_generalized(self) -> GeneralizedMorphism {
        self.0
    }
}

pub fn identity_anafunctor(g: &Arc<FiniteGroupoid>) -> Anafunctor {
    Anafunctor(GeneralizedMorphism::identity(g))
}

fn check_composable(f: &GeneralizedMorphism, g: &GeneralizedMorphism) -> Result<()> {
    if f.target() != g.source() {
        return Err(Error::mismatch("target of the first span is not the source of the second"));
    }
    Ok(())
}

/// Composite over the weak pullback `K ×ʷ_{ψ,χ} L`, with the pullback.
pub fn compose_generalized_with(
    f: &GeneralizedMorphism,
    g: &GeneralizedMorphism,
) -> Result<(GeneralizedMorphism, WeakPullback)> {
    check_composable(f, g)?;
    let wp = weak_pullback(&f.right, &g.left)?;
    let left = compose_unchecked(&f.left, &wp.pr1);
    if !weak_equivalence_report(&left).is_weak_equivalence() {
        return Err(Error::obligation("composite left leg", "φ∘pr1 is not a weak equivalence"));
    }
    let right = compose_unchecked(&g.right, &wp.pr3);
    Ok((GeneralizedMorphism { left, right }, wp))
}

pub fn compose_generalized(f: &GeneralizedMorphism, g: &GeneralizedMorphism) -> Result<GeneralizedMorphism> {
    compose_generalized_with(f, g).map(|c| c.0)
}

/// Composite over the strict pullback `K ×_{ψ,χ} L`, with the pullback.
pub fn compose_anafunctors_with(f: &Anafunctor, g: &Anafunctor) -> Result<(Anafunctor, StrictPullback)> {
    check_composable(f, g)?;
    let sp = strict_pullback(&f.right, &g.left)?;
    let left = compose_unchecked(&f.left, &sp.pr1);
    if !weak_equivalence_report(&left).is_ssw() {
        return Err(Error::obligation("composite left leg", "φ∘pr1 is not ssw"));
    }
    let right = compose_unchecked(&g.right, &sp.pr2);
    Ok((Anafunctor(GeneralizedMorphism { left, right }), sp))
}

pub fn compose_anafunctors(f: &Anafunctor, g: &Anafunctor) -> Result<Anafunctor> {
    compose_anafunctors_with(f, g).map(|c| c.0)
}

/// The 2-cell from the weak-pullback composite of `f` and `g` to the
/// strict-pullback composite, through `ic: (x, y) ↦ (x, u_{ψx}, y)`.
pub fn strictify_composition(f: &GeneralizedMorphism, g: &Anafunctor) -> Result<TwoCellDiagram> {
    let (top, wp) = compose_generalized_with(f, g)?;
    check_composable(f, g)?;
    let sp = strict_pullback(&f.right, &g.left)?;
    let bottom_left = compose_unchecked(&f.left, &sp.pr1);
    let bottom = GeneralizedMorphism { left: bottom_left, right: compose_unchecked(&g.right, &sp.pr2) };
    let (k, l) = (&f.right.dom, &g.left.dom);
    let psi = &f.right;
    let s = &sp.apex;
    let mut obj_map = Vec::with_capacity(s.object_count());
    for o in 0..s.object_count() {
        let (x, y) = sp.object_parts(o);
        let unit = psi.cod.unit(psi.obj(x));
        obj_map.push(wp.object(x, unit, y).ok_or_else(|| Error::obligation("ic", "missing unit-anchored object"))?);
    }
    let mut arr_map = Vec::with_capacity(s.arrow_count());
    for a in 0..s.arrow_count() {
        let (x, y) = sp.object_parts(s.src(a));
        let (ka, la) = (sp.pr1.arr(a), sp.pr2.arr(a));
        debug_assert_eq!((k.src(ka), l.src(la)), (x, y));
        let unit = psi.cod.unit(psi.obj(x));
        arr_map.push(wp.arrow(ka, unit, la).ok_or_else(|| Error::obligation("ic", "missing unit-anchored arrow"))?);
    }
    let ic = Functor { dom: s.clone(), cod: wp.apex.clone(), obj_map, arr_map };
    if !weak_equivalence_report(&ic).is_weak_equivalence() {
        return Err(Error::obligation("ic weak equivalence", "inclusion is not a weak equivalence"));
    }
    let alpha_prime = Functor::identity(s);
    let eta1 = NaturalTransformation::identity(&compose_unchecked(&top.left, &ic));
    let eta1 = NaturalTransformation { target: compose_unchecked(&bottom.left, &alpha_prime), ..eta1 };
    let eta2 = NaturalTransformation::identity(&compose_unchecked(&top.right, &ic));
    let eta2 = NaturalTransformation { target: compose_unchecked(&bottom.right, &alpha_prime), ..eta2 };
    Ok(TwoCellDiagram { top, bottom, mediator: s.clone(), alpha: ic, alpha_prime, eta1, eta2 })
}

/// The anafunctor `G ⇐ G ×ʷ_{id,φ} K → H` attached to `f`, with a witness
/// 2-cell from `f` to it.
pub fn anafunctorify(f: &GeneralizedMorphism) -> Result<(Anafunctor, TwoCellDiagram)> {
    let wp = weak_pullback(&Functor::identity(f.source()), &f.left)?;
    let left = wp.pr1.clone();
    if !weak_equivalence_report(&left).is_ssw() {
        return Err(Error::obligation("anafunctor left leg", "pr1 is not ssw"));
    }
    let right = compose_unchecked(&f.right, &wp.pr3);
    let ana = Anafunctor(GeneralizedMorphism { left, right });
    let alpha = wp.pr3.clone();
    let alpha_prime = Functor::identity(&wp.apex);
    // PR2 runs id∘pr1 ⇒ φ∘pr3; the diagram needs φ∘pr3 ⇒ pr1.
    let inv = wp.pr2.inverse();
    let eta1 = NaturalTransformation {
        source: compose_unchecked(&f.left, &alpha),
        target: compose_unchecked(&ana.left, &alpha_prime),
        components: inv.components,
    };
    let eta2 = NaturalTransformation {
        source: compose_unchecked(&f.right, &alpha),
        target: compose_unchecked(&ana.right, &alpha_prime),
        components: NaturalTransformation::identity(&ana.right).components,
    };
    let witness = TwoCellDiagram {
        top: f.clone(),
        bottom: ana.as_generalized().clone(),
        mediator: wp.apex.clone(),
        alpha,
        alpha_prime,
        eta1,
        eta2,
    };
    Ok((ana, witness))
}

/// 2-cell from `id ∘ f` to `f`.
pub fn left_unitor(f: &GeneralizedMorphism) -> Result<TwoCellDiagram> {
    let id = GeneralizedMorphism::identity(f.source());
    let (top, wp) = compose_generalized_with(&id, f)?;
    let alpha = Functor::identity(&wp.apex);
    let alpha_prime = wp.pr3.clone();
    let eta1 = NaturalTransformation {
        source: compose_unchecked(&top.left, &alpha),
        target: compose_unchecked(&f.left, &alpha_prime),
        components: wp.pr2.components.clone(),
    };
    let eta2 = NaturalTransformation {
        source: compose_unchecked(&top.right, &alpha),
        target: compose_unchecked(&f.right, &alpha_prime),
        components: NaturalTransformation::identity(&top.right).components,
    };
    Ok(TwoCellDiagram { top, bottom: f.clone(), mediator: wp.apex.clone(), alpha, alpha_prime, eta1, eta2 })
}

/// 2-cell from `f ∘ id` to `f`.
pub fn right_unitor(f: &GeneralizedMorphism) -> Result<TwoCellDiagram> {
    let id = GeneralizedMorphism::identity(f.target());
    let (top, wp) = compose_generalized_with(f, &id)?;
    let alpha = Functor::identity(&wp.apex);
    let alpha_prime = wp.pr1.clone();
    let eta1 = NaturalTransformation {
        source: compose_unchecked(&top.left, &alpha),
        target: compose_unchecked(&f.left, &alpha_prime),
        components: NaturalTransformation::identity(&top.left).components,
    };
    let eta2 = NaturalTransformation {
        source: compose_unchecked(&top.right, &alpha),
        target: compose_unchecked(&f.right, &alpha_prime),
        components: wp.pr2.inverse().components,
    };
    Ok(TwoCellDiagram { top, bottom: f.clone(), mediator: wp.apex.clone(), alpha, alpha_prime, eta1, eta2 })
}

/// `G × pair(2) → G`: an ssw functor used to perturb mediators.
pub fn doubling(g: &Arc<FiniteGroupoid>) -> Functor {
    let pair = Arc::new(FiniteGroupoid::pair_groupoid(&["0", "1"]));
    let prod = Arc::new(FiniteGroupoid::product(g, &pair));
    let obj_map = (0..prod.object_count()).map(|o| o / 2).collect();
    let arr_map = (0..prod.arrow_count()).map(|a| a / 4).collect();
    Functor { dom: prod, cod: g.clone(), obj_map, arr_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::group::FiniteGroup;
    use crate::localization::two_cell::validate_two_cell;

    fn swap_span() -> GeneralizedMorphism {
        let a = action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
            .unwrap();
        let t = Arc::new(FiniteGroupoid::terminal());
        let collapse = Functor::new(a.groupoid.clone(), t, vec![0, 0], vec![0; 4]).unwrap();
        GeneralizedMorphism::new(collapse, Functor::identity(&a.groupoid)).unwrap()
    }

    #[test]
    fn unitors_validate() {
        let f = swap_span();
        assert!(validate_two_cell(&left_unitor(&f).unwrap()).unwrap().ok);
        assert!(validate_two_cell(&right_unitor(&f).unwrap()).unwrap().ok);
    }

    #[test]
    fn anafunctorify_witness_validates() {
        let t = Arc::new(FiniteGroupoid::terminal());
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let incl = Functor::new(t.clone(), g.clone(), vec![0], vec![0]).unwrap();
        let f = GeneralizedMorphism::new(incl, Functor::identity(&t)).unwrap();
        let (ana, witness) = anafunctorify(&f).unwrap();
        assert!(ana.left.is_object_surjective());
        assert!(validate_two_cell(&witness).unwrap().ok);
    }

    #[test]
    fn strictify_identity() {
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let id = identity_anafunctor(&g);
        let d = strictify_composition(id.as_generalized(), &id).unwrap();
        assert!(validate_two_cell(&d).unwrap().ok);
        assert_eq!(d.mediator.object_count(), 2);
    }

    #[test]
    fn doubling_is_ssw() {
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        assert!(weak_equivalence_report(&doubling(&g)).is_ssw());
    }
}
