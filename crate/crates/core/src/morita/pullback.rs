use rustc_hash::FxHashMap as HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::functor::Functor;
use crate::groupoid::natural::NaturalTransformation;
use crate::groupoid::{tuple_id, Arr, FiniteGroupoid, GroupoidBuilder, Obj};
use crate::morita::equivalence::weak_equivalence_report;

/// Fibered product `G ×_{φ,ψ} H` with its projections.
#[derive(Clone, Debug)]
pub struct StrictPullback {
    pub apex: Arc<FiniteGroupoid>,
    pub pr1: Functor,
    pub pr2: Functor,
    objects: Arc<Vec<(Obj, Obj)>>,
    object_index: Arc<HashMap<(Obj, Obj), Obj>>,
    arrow_index: Arc<HashMap<(Arr, Arr), Arr>>,
}

impl StrictPullback {
    pub fn object(&self, x: Obj, y: Obj) -> Option<Obj> {
        self.object_index.get(&(x, y)).copied()
    }

    pub fn arrow(&self, g: Arr, h: Arr) -> Option<Arr> {
        self.arrow_index.get(&(g, h)).copied()
    }

    pub fn object_parts(&self, o: Obj) -> (Obj, Obj) {
        self.objects[o]
    }

    /// If the first foot is surjective submersive, so is `pr2`.
    pub fn verify_ssw_transfer(&self, phi: &Functor) -> Result<()> {
        if weak_equivalence_report(phi).is_ssw() && !weak_equivalence_report(&self.pr2).is_ssw() {
            return Err(Error::obligation("pr2 ssw", "foot is ssw but pr2 is not"));
        }
        Ok(())
    }
}

fn check_cospan(phi: &Functor, psi: &Functor) -> Result<()> {
    if phi.cod != psi.cod {
        return Err(Error::mismatch("pullback feet have different codomains"));
    }
    Ok(())
}

pub fn strict_pullback(phi: &Functor, psi: &Functor) -> Result<StrictPullback> {
    check_cospan(phi, psi)?;
    let (g, h, k) = (phi.dom.clone(), psi.dom.clone(), &phi.cod);

    let mut over_obj: Vec<Vec<Obj>> = vec![Vec::new(); k.object_count()];
    for y in 0..h.object_count() {
        over_obj[psi.obj(y)].push(y);
    }
    let mut over_arr: Vec<Vec<Arr>> = vec![Vec::new(); k.arrow_count()];
    for b in 0..h.arrow_count() {
        over_arr[psi.arr(b)].push(b);
    }

    let mut builder = GroupoidBuilder::default();
    let mut objects = Vec::new();
    let mut object_index = HashMap::default();
    for x in 0..g.object_count() {
        for &y in &over_obj[phi.obj(x)] {
            object_index.insert((x, y), objects.len());
            objects.push((x, y));
            builder.add_object(tuple_id(&[g.object_id(x), h.object_id(y)]));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_index = HashMap::default();
    for a in 0..g.arrow_count() {
        for &b in &over_arr[phi.arr(a)] {
            arrow_index.insert((a, b), arrows.len());
            arrows.push((a, b));
            builder.add_arrow(
                tuple_id(&[g.arrow_id(a), h.arrow_id(b)]),
                object_index[&(g.src(a), h.src(b))],
                object_index[&(g.tgt(a), h.tgt(b))],
            );
        }
    }
    builder.units = objects.iter().map(|&(x, y)| arrow_index[&(g.unit(x), h.unit(y))]).collect();
    builder.inverses = arrows.iter().map(|&(a, b)| arrow_index[&(g.inverse(a), h.inverse(b))]).collect();

    let arrows = Arc::new(arrows);
    let arrow_index = Arc::new(arrow_index);
    let (ca, ci, cg, ch) = (arrows.clone(), arrow_index.clone(), g.clone(), h.clone());
    let apex = Arc::new(builder.build(Arc::new(move |after, first| {
        let ((a2, b2), (a1, b1)) = (ca[after], ca[first]);
        ci[&(cg.compose(a2, a1).unwrap(), ch.compose(b2, b1).unwrap())]
    }))?);

    let pr1 = Functor {
        dom: apex.clone(),
        cod: g,
        obj_map: objects.iter().map(|p| p.0).collect(),
        arr_map: arrows.iter().map(|p| p.0).collect(),
    };
    let pr2 = Functor {
        dom: apex.clone(),
        cod: h,
        obj_map: objects.iter().map(|p| p.1).collect(),
        arr_map: arrows.iter().map(|p| p.1).collect(),
    };
    Ok(StrictPullback { apex, pr1, pr2, objects: Arc::new(objects), object_index: Arc::new(object_index), arrow_index })
}

/// Weak pullback `G ×ʷ_{φ,ψ} H`: objects `(x, k, y)` with `k: φx → ψy`,
/// arrows `(g, k, h)` from `(s g, k, s h)` to `(t g, ψh·k·φg⁻¹, t h)`.
#[derive(Clone, Debug)]
pub struct WeakPullback {
    pub apex: Arc<FiniteGroupoid>,
    pub pr1: Functor,
    pub pr3: Functor,
    /// `φ∘pr1 ⇒ ψ∘pr3`, with component `k` at `(x, k, y)`.
    pub pr2: NaturalTransformation,
    objects: Arc<Vec<(Obj, Arr, Obj)>>,
    arrows: Arc<Vec<(Arr, Arr, Arr)>>,
    object_index: Arc<HashMap<(Obj, Arr, Obj), Obj>>,
    arrow_index: Arc<HashMap<(Arr, Arr, Arr), Arr>>,
}

impl WeakPullback {
    pub fn object(&self, x: Obj, k: Arr, y: Obj) -> Option<Obj> {
        self.object_index.get(&(x, k, y)).copied()
    }

    pub fn arrow(&self, g: Arr, k: Arr, h: Arr) -> Option<Arr> {
        self.arrow_index.get(&(g, k, h)).copied()
    }

    pub fn object_parts(&self, o: Obj) -> (Obj, Arr, Obj) {
        self.objects[o]
    }

    pub fn arrow_parts(&self, a: Arr) -> (Arr, Arr, Arr) {
        self.arrows[a]
    }

    /// If the first foot is a weak equivalence then `pr3` is ssw.
    pub fn verify_ssw_transfer(&self, phi: &Functor) -> Result<()> {
        if weak_equivalence_report(phi).is_weak_equivalence() && !weak_equivalence_report(&self.pr3).is_ssw() {
            return Err(Error::obligation("pr3 ssw", "foot is a weak equivalence but pr3 is not ssw"));
        }
        Ok(())
    }
}

pub fn weak_pullback(phi: &Functor, psi: &Functor) -> Result<WeakPullback> {
    check_cospan(phi, psi)?;
    let (g, h, k) = (phi.dom.clone(), psi.dom.clone(), phi.cod.clone());

    let mut over_obj: Vec<Vec<Obj>> = vec![Vec::new(); k.object_count()];
    for y in 0..h.object_count() {
        over_obj[psi.obj(y)].push(y);
    }

    let mut builder = GroupoidBuilder::default();
    let mut objects = Vec::new();
    let mut object_index = HashMap::default();
    for x in 0..g.object_count() {
        for &c in k.out_arrows(phi.obj(x)) {
            for &y in &over_obj[k.tgt(c)] {
                object_index.insert((x, c, y), objects.len());
                objects.push((x, c, y));
                builder.add_object(tuple_id(&[g.object_id(x), k.arrow_id(c), h.object_id(y)]));
            }
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_index = HashMap::default();
    for a in 0..g.arrow_count() {
        let x = g.src(a);
        let back = k.inverse(phi.arr(a));
        for &c in k.out_arrows(phi.obj(x)) {
            for &y in &over_obj[k.tgt(c)] {
                for &b in h.out_arrows(y) {
                    let c2 = k.compose_all(&[psi.arr(b), c, back]).expect("composable");
                    arrow_index.insert((a, c, b), arrows.len());
                    arrows.push((a, c, b));
                    builder.add_arrow(
                        tuple_id(&[g.arrow_id(a), k.arrow_id(c), h.arrow_id(b)]),
                        object_index[&(x, c, y)],
                        object_index[&(g.tgt(a), c2, h.tgt(b))],
                    );
                }
            }
        }
    }
    builder.units = objects.iter().map(|&(x, c, y)| arrow_index[&(g.unit(x), c, h.unit(y))]).collect();
    builder.inverses = (0..arrows.len())
        .map(|i| {
            let (a, _, b) = arrows[i];
            let c2 = objects[builder.arrows[i].tgt].1;
            arrow_index[&(g.inverse(a), c2, h.inverse(b))]
        })
        .collect();

    let arrows = Arc::new(arrows);
    let arrow_index = Arc::new(arrow_index);
    let (ca, ci, cg, ch) = (arrows.clone(), arrow_index.clone(), g.clone(), h.clone());
    let apex = Arc::new(builder.build(Arc::new(move |after, first| {
        let ((a2, _, b2), (a1, c1, b1)) = (ca[after], ca[first]);
        ci[&(cg.compose(a2, a1).unwrap(), c1, ch.compose(b2, b1).unwrap())]
    }))?);

    let pr1 = Functor {
        dom: apex.clone(),
        cod: g,
        obj_map: objects.iter().map(|t| t.0).collect(),
        arr_map: arrows.iter().map(|t| t.0).collect(),
    };
    let pr3 = Functor {
        dom: apex.clone(),
        cod: h,
        obj_map: objects.iter().map(|t| t.2).collect(),
        arr_map: arrows.iter().map(|t| t.2).collect(),
    };
    let pr2 = NaturalTransformation {
        source: crate::groupoid::functor::compose_unchecked(phi, &pr1),
        target: crate::groupoid::functor::compose_unchecked(psi, &pr3),
        components: objects.iter().map(|t| t.1).collect(),
    };
    Ok(WeakPullback {
        apex,
        pr1,
        pr3,
        pr2,
        objects: Arc::new(objects),
        arrows,
        object_index: Arc::new(object_index),
        arrow_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::group::FiniteGroup;
    use crate::groupoid::natural::validate_nat_trans;
    use crate::groupoid::validate_groupoid;

    fn bz2() -> Arc<FiniteGroupoid> {
        action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap().groupoid
    }

    #[test]
    fn weak_pullback_of_bz2_identities() {
        let g = bz2();
        let id = Functor::identity(&g);
        let wp = weak_pullback(&id, &id).unwrap();
        assert_eq!(wp.apex.object_count(), 2);
        assert_eq!(wp.apex.arrow_count(), 8);
        assert!(validate_groupoid(&wp.apex.to_raw()).unwrap().ok);
        assert!(validate_nat_trans(&wp.pr2).ok);
        assert_eq!(wp.apex.components().len(), 1);
        assert_eq!(wp.apex.loops(0).len(), 2);
        wp.verify_ssw_transfer(&id).unwrap();
    }

    #[test]
    fn empty_foot_gives_empty_apex() {
        let e = Arc::new(FiniteGroupoid::empty());
        let t = Arc::new(FiniteGroupoid::terminal());
        let phi = Functor::new(e, t.clone(), vec![], vec![]).unwrap();
        let id = Functor::identity(&t);
        assert!(weak_pullback(&phi, &id).unwrap().apex.is_empty());
        assert!(strict_pullback(&phi, &id).unwrap().apex.is_empty());
    }

    #[test]
    fn codomain_mismatch() {
        let g = bz2();
        let t = Arc::new(FiniteGroupoid::terminal());
        assert!(strict_pullback(&Functor::identity(&g), &Functor::identity(&t)).is_err());
    }
}
