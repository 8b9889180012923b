use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::{Arr, FiniteGroupoid, Obj};
use crate::report::ValidationReport;

pub mod axiom {
    pub const ENDPOINTS: &str = "endpoint preservation";
    pub const UNITS: &str = "unit preservation";
    pub const INVERSES: &str = "inverse preservation";
    pub const COMPOSITION: &str = "composition preservation";
}

/// Object and arrow maps between two finite groupoids.
///
/// Equality is structural: two functors are equal when their endpoints are
/// equal groupoids and their maps agree.
#[derive(Clone, PartialEq, Eq)]
pub struct Functor {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arr>,
}

impl std::fmt::Debug for Functor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Functor").field("obj_map", &self.obj_map).field("arr_map", &self.arr_map).finish()
    }
}

impl Functor {
    /// Checks only that the maps have the right shape; use [`validate_functor`]
    /// for the functor laws.
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        obj_map: Vec<Obj>,
        arr_map: Vec<Arr>,
    ) -> Result<Functor> {
        if obj_map.len() != dom.object_count() || arr_map.len() != dom.arrow_count() {
            return Err(Error::mismatch("functor maps do not cover the domain"));
        }
        if obj_map.iter().any(|&y| y >= cod.object_count()) || arr_map.iter().any(|&b| b >= cod.arrow_count()) {
            return Err(Error::mismatch("functor maps leave the codomain"));
        }
        Ok(Functor { dom, cod, obj_map, arr_map })
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Functor {
        Functor {
            dom: g.clone(),
            cod: g.clone(),
            obj_map: (0..g.object_count()).collect(),
            arr_map: (0..g.arrow_count()).collect(),
        }
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn arr(&self, a: Arr) -> Arr {
        self.arr_map[a]
    }

    pub fn is_object_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.object_count()];
        for &y in &self.obj_map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            map.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        }
        bijective(&self.obj_map, self.cod.object_count()) && bijective(&self.arr_map, self.cod.arrow_count())
    }

    /// Inverse of a bijective functor.
    pub fn inverse(&self) -> Option<Functor> {
        if !self.is_bijective() {
            return None;
        }
        let mut obj_map = vec![0; self.obj_map.len()];
        for (x, &y) in self.obj_map.iter().enumerate() {
            obj_map[y] = x;
        }
        let mut arr_map = vec![0; self.arr_map.len()];
        for (a, &b) in self.arr_map.iter().enumerate() {
            arr_map[b] = a;
        }
        Some(Functor { dom: self.cod.clone(), cod: self.dom.clone(), obj_map, arr_map })
    }

    /// Same endpoints as groupoids, which is what composability needs.
    pub fn parallel(&self, other: &Functor) -> bool {
        self.dom == other.dom && self.cod == other.cod
    }
}

pub fn validate_functor(f: &Functor) -> ValidationReport {
    use axiom::*;

    let (g, h) = (&*f.dom, &*f.cod);
    let mut report = ValidationReport::new();
    let identity = Arc::ptr_eq(&f.dom, &f.cod)
        && f.obj_map.len() == g.object_count()
        && f.arr_map.len() == g.arrow_count()
        && f.obj_map.iter().enumerate().all(|(x, &y)| x == y)
        && f.arr_map.iter().enumerate().all(|(a, &b)| a == b);
    if identity {
        return report;
    }
    for a in 0..g.arrow_count() {
        let b = f.arr(a);
        if h.src(b) != f.obj(g.src(a)) || h.tgt(b) != f.obj(g.tgt(a)) {
            report.push(ENDPOINTS, format!("{} ↦ {}", g.arrow_id(a), h.arrow_id(b)));
        }
    }
    for x in 0..g.object_count() {
        if f.arr(g.unit(x)) != h.unit(f.obj(x)) {
            report.push(UNITS, format!("object {}", g.object_id(x)));
        }
    }
    if !report.ok {
        return report;
    }
    for a in 0..g.arrow_count() {
        if f.arr(g.inverse(a)) != h.inverse(f.arr(a)) {
            report.push(INVERSES, format!("arrow {}", g.arrow_id(a)));
        }
    }
    for (after, first) in g.composable_pairs() {
        let lhs = f.arr(g.compose(after, first).expect("composable"));
        let rhs = h.compose(f.arr(after), f.arr(first)).expect("endpoints preserved");
        if lhs != rhs {
            report.push(COMPOSITION, format!("({}, {})", g.arrow_id(after), g.arrow_id(first)));
        }
    }
    report
}

/// `f2 ∘ f1`.
pub fn compose_functors(f2: &Functor, f1: &Functor) -> Result<Functor> {
    if f1.cod != f2.dom {
        return Err(Error::mismatch("codomain of the first functor is not the domain of the second"));
    }
    Ok(compose_unchecked(f2, f1))
}

pub(crate) fn compose_unchecked(f2: &Functor, f1: &Functor) -> Functor {
    Functor {
        dom: f1.dom.clone(),
        cod: f2.cod.clone(),
        obj_map: f1.obj_map.iter().map(|&y| f2.obj(y)).collect(),
        arr_map: f1.arr_map.iter().map(|&b| f2.arr(b)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]))
    }

    #[test]
    fn identity_is_valid_and_neutral() {
        let g = pair();
        let id = Functor::identity(&g);
        assert!(validate_functor(&id).ok);
        let t = Arc::new(FiniteGroupoid::terminal());
        let f = Functor::new(g.clone(), t.clone(), vec![0, 0], vec![0; 4]).unwrap();
        assert!(validate_functor(&f).ok);
        assert_eq!(compose_functors(&f, &id).unwrap(), f);
        assert_eq!(compose_functors(&Functor::identity(&t), &f).unwrap(), f);
    }

    #[test]
    fn endpoint_violation_is_named() {
        let g = pair();
        // Swap the objects but keep every arrow fixed.
        let f = Functor::new(g.clone(), g.clone(), vec![1, 0], (0..4).collect()).unwrap();
        let report = validate_functor(&f);
        assert!(report.has(axiom::ENDPOINTS));
    }

    #[test]
    fn composition_checks_interfaces() {
        let g = pair();
        let t = Arc::new(FiniteGroupoid::terminal());
        let f = Functor::new(g.clone(), t.clone(), vec![0, 0], vec![0; 4]).unwrap();
        assert!(compose_functors(&f, &f).is_err());
    }

    #[test]
    fn shape_errors() {
        let g = pair();
        assert!(Functor::new(g.clone(), g.clone(), vec![0], vec![0; 4]).is_err());
        assert!(Functor::new(g.clone(), g.clone(), vec![0, 5], vec![0; 4]).is_err());
    }

    #[test]
    fn inverse_of_swap() {
        let g = pair();
        // (a,a)=0 a->a, (b,a)=1 a->b, (a,b)=2 b->a, (b,b)=3.
        let swap = Functor::new(g.clone(), g.clone(), vec![1, 0], vec![3, 2, 1, 0]).unwrap();
        assert!(validate_functor(&swap).ok);
        let inv = swap.inverse().unwrap();
        assert_eq!(compose_functors(&inv, &swap).unwrap(), Functor::identity(&g));
    }
}
