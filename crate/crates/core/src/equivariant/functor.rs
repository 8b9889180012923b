use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::action::ActionGroupoid;
use crate::groupoid::functor::{compose_unchecked, Functor};
use crate::groupoid::Obj;

/// A functor of action groupoids of the form `(g, x) ↦ (φ̃ g, φ₀ x)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivariantFunctor {
    pub source: Arc<ActionGroupoid>,
    pub target: Arc<ActionGroupoid>,
    pub group_hom: Vec<usize>,
    pub functor: Functor,
}

impl EquivariantFunctor {
    /// Builds the functor from a homomorphism and an equivariant object map,
    /// checking both.
    pub fn from_hom(
        source: Arc<ActionGroupoid>,
        target: Arc<ActionGroupoid>,
        group_hom: Vec<usize>,
        obj_map: Vec<Obj>,
    ) -> Result<Self> {
        if !source.group.is_homomorphism(&target.group, &group_hom) {
            return Err(Error::NotEquivariant("group map is not a homomorphism".into()));
        }
        if obj_map.len() != source.carrier_size() || obj_map.iter().any(|&y| y >= target.carrier_size()) {
            return Err(Error::mismatch("object map does not match the carriers"));
        }
        for g in 0..source.group.order() {
            for x in 0..source.carrier_size() {
                if obj_map[source.act(g, x)] != target.act(group_hom[g], obj_map[x]) {
                    return Err(Error::NotEquivariant(format!(
                        "object map not equivariant at ({}, {})",
                        source.group.element_id(g),
                        source.carrier[x]
                    )));
                }
            }
        }
        let m = source.carrier_size();
        let arr_map = (0..source.group.order() * m).map(|a| target.arrow(group_hom[a / m], obj_map[a % m])).collect();
        let functor =
            Functor { dom: source.groupoid.clone(), cod: target.groupoid.clone(), obj_map, arr_map };
        Ok(EquivariantFunctor { source, target, group_hom, functor })
    }

    pub fn identity(a: &Arc<ActionGroupoid>) -> Self {
        EquivariantFunctor {
            source: a.clone(),
            target: a.clone(),
            group_hom: (0..a.group.order()).collect(),
            functor: Functor::identity(&a.groupoid),
        }
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.functor.obj(x)
    }

    pub fn compose(after: &EquivariantFunctor, first: &EquivariantFunctor) -> Result<EquivariantFunctor> {
        if first.target != after.source {
            return Err(Error::mismatch("equivariant functors do not compose"));
        }
        Ok(EquivariantFunctor {
            source: first.source.clone(),
            target: after.target.clone(),
            group_hom: first.group_hom.iter().map(|&g| after.group_hom[g]).collect(),
            functor: compose_unchecked(&after.functor, &first.functor),
        })
    }
}

/// Recovers `φ̃` from the arrow table of `f`, if `f` is equivariant.
///
/// With an empty source carrier the arrow table says nothing about the group
/// part; the trivial homomorphism is used.
pub fn as_equivariant(
    f: &Functor,
    source: &Arc<ActionGroupoid>,
    target: &Arc<ActionGroupoid>,
) -> Result<EquivariantFunctor> {
    if f.dom != source.groupoid || f.cod != target.groupoid {
        return Err(Error::mismatch("functor endpoints are not the given action groupoids"));
    }
    let (g, h) = (&source.group, &target.group);
    let m = source.carrier_size();
    let group_hom: Vec<usize> = if m == 0 {
        vec![h.unit(); g.order()]
    } else {
        (0..g.order()).map(|a| target.split(f.arr(source.arrow(a, 0))).0).collect()
    };
    for a in 0..g.order() {
        for x in 0..m {
            let arrow = source.arrow(a, x);
            let (b, y) = target.split(f.arr(arrow));
            if b != group_hom[a] || y != f.obj(x) {
                return Err(Error::NotEquivariant(format!(
                    "arrow {} maps to {}",
                    source.groupoid.arrow_id(arrow),
                    target.groupoid.arrow_id(f.arr(arrow))
                )));
            }
        }
    }
    if !g.is_homomorphism(h, &group_hom) {
        return Err(Error::NotEquivariant("induced group map is not a homomorphism".into()));
    }
    Ok(EquivariantFunctor { source: source.clone(), target: target.clone(), group_hom, functor: f.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::functor::validate_functor;
    use crate::groupoid::group::FiniteGroup;

    fn swap() -> Arc<ActionGroupoid> {
        Arc::new(
            action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
                .unwrap(),
        )
    }

    #[test]
    fn identity_is_equivariant() {
        let a = swap();
        let e = as_equivariant(&Functor::identity(&a.groupoid), &a, &a).unwrap();
        assert_eq!(e.group_hom, vec![0, 1]);
    }

    #[test]
    fn inconsistent_arrow_map_is_rejected() {
        let a = swap();
        // (1,1) now goes to (0,1): not of the form (φ̃ g, φ₀ x).
        let mut f = Functor::identity(&a.groupoid);
        f.arr_map[3] = 1;
        let err = as_equivariant(&f, &a, &a).unwrap_err();
        assert!(matches!(err, Error::NotEquivariant(_)));
    }

    #[test]
    fn from_hom_builds_valid_functor() {
        let a = swap();
        let point = Arc::new(action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap());
        let f = EquivariantFunctor::from_hom(a.clone(), point, vec![0, 1], vec![0, 0]).unwrap();
        assert!(validate_functor(&f.functor).ok);
        assert!(EquivariantFunctor::from_hom(a.clone(), a.clone(), vec![0, 1], vec![0, 0]).is_err());
    }
}
