use rustc_hash::FxHashMap as HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::functor::Functor;
use crate::groupoid::{Arr, Obj};

/// Weak-equivalence verdict for a functor `φ: G → H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeReport {
    /// `G₀ ×_{φ₀,t} H₁ → H₀, (x, h) ↦ s(h)` is onto.
    pub es_map_surjective: bool,
    /// `G₁ → G₀² ×_{φ₀², (s,t)} H₁, g ↦ (s g, t g, φ g)` is a bijection.
    pub ff_map_bijective: bool,
    pub object_map_surjective: bool,
    pub es_witness: Option<String>,
    pub ff_witness: Option<String>,
    pub object_witness: Option<String>,
}

impl WeReport {
    pub fn is_weak_equivalence(&self) -> bool {
        self.es_map_surjective && self.ff_map_bijective
    }

    pub fn is_ssw(&self) -> bool {
        self.is_weak_equivalence() && self.object_map_surjective
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.ff_map_bijective
    }
}

pub fn weak_equivalence_report(phi: &Functor) -> WeReport {
    let (g, h) = (&*phi.dom, &*phi.cod);

    let mut es_hit = vec![false; h.object_count()];
    for x in 0..g.object_count() {
        // Arrows into φ(x) are the inverses of arrows out of it.
        for &a in h.out_arrows(phi.obj(x)) {
            es_hit[h.src(h.inverse(a))] = true;
        }
    }
    let es_witness = es_hit.iter().position(|&hit| !hit).map(|y| format!("object {} not reached", h.object_id(y)));

    let mut obj_hit = vec![false; h.object_count()];
    for &y in &phi.obj_map {
        obj_hit[y] = true;
    }
    let object_witness =
        obj_hit.iter().position(|&hit| !hit).map(|y| format!("object {} has empty fiber", h.object_id(y)));

    let mut fibers: Vec<Vec<Obj>> = vec![Vec::new(); h.object_count()];
    for x in 0..g.object_count() {
        fibers[phi.obj(x)].push(x);
    }
    let mut ff_witness = None;
    let mut counts: HashMap<(Obj, Arr), u32> = HashMap::default();
    'outer: for x in 0..g.object_count() {
        counts.clear();
        for &a in g.out_arrows(x) {
            *counts.entry((g.tgt(a), phi.arr(a))).or_default() += 1;
        }
        for &k in h.out_arrows(phi.obj(x)) {
            for &x2 in &fibers[h.tgt(k)] {
                let c = counts.remove(&(x2, k)).unwrap_or(0);
                if c != 1 {
                    let how = if c == 0 { "unhit" } else { "hit more than once" };
                    ff_witness = Some(format!(
                        "triple ({}, {}, {}) {how}",
                        g.object_id(x),
                        g.object_id(x2),
                        h.arrow_id(k)
                    ));
                    break 'outer;
                }
            }
        }
        if let Some((&(x2, k), _)) = counts.iter().min() {
            ff_witness = Some(format!(
                "arrow over ({}, {}) maps to {} with wrong endpoints",
                g.object_id(x),
                g.object_id(x2),
                h.arrow_id(k)
            ));
            break;
        }
    }

    WeReport {
        es_map_surjective: es_witness.is_none(),
        ff_map_bijective: ff_witness.is_none(),
        object_map_surjective: object_witness.is_none(),
        es_witness,
        ff_witness,
        object_witness,
    }
}

pub fn is_weak_equivalence(phi: &Functor) -> bool {
    weak_equivalence_report(phi).is_weak_equivalence()
}

pub fn is_ssw(phi: &Functor) -> bool {
    weak_equivalence_report(phi).is_ssw()
}

/// Inverse of `Ff(φ)` for a fully faithful `φ`.
pub struct FfInverse {
    table: HashMap<(Obj, Obj, Arr), Arr>,
}

impl FfInverse {
    pub fn new(phi: &Functor) -> Result<FfInverse> {
        let report = weak_equivalence_report(phi);
        if !report.ff_map_bijective {
            return Err(Error::precondition(format!(
                "functor is not fully faithful: {}",
                report.ff_witness.unwrap_or_default()
            )));
        }
        let g = &phi.dom;
        let table = (0..g.arrow_count()).map(|a| ((g.src(a), g.tgt(a), phi.arr(a)), a)).collect();
        Ok(FfInverse { table })
    }

    /// The unique arrow `x → x2` lying over `h`.
    pub fn lift(&self, x: Obj, x2: Obj, h: Arr) -> Option<Arr> {
        self.table.get(&(x, x2, h)).copied()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn identity_is_ssw() {
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b", "c"]));
        assert!(weak_equivalence_report(&Functor::identity(&g)).is_ssw());
    }

    #[test]
    fn pair_groupoid_collapses_to_terminal() {
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let t = Arc::new(FiniteGroupoid::terminal());
        let f = Functor::new(g, t, vec![0, 0], vec![0; 4]).unwrap();
        assert!(weak_equivalence_report(&f).is_ssw());
    }

    #[test]
    fn inclusion_of_point_is_we_but_not_ssw() {
        let t = Arc::new(FiniteGroupoid::terminal());
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let f = Functor::new(t, g, vec![0], vec![0]).unwrap();
        let r = weak_equivalence_report(&f);
        assert!(r.is_weak_equivalence());
        assert!(!r.object_map_surjective);
        assert!(r.object_witness.is_some());
    }

    #[test]
    fn disjoint_points_to_one_point_not_faithful() {
        let two = Arc::new(
            FiniteGroupoid::from_raw(&crate::groupoid::RawGroupoid {
                objects: vec!["a".into(), "b".into()],
                arrows: vec![
                    crate::groupoid::RawArrow { id: "1a".into(), src: "a".into(), tgt: "a".into() },
                    crate::groupoid::RawArrow { id: "1b".into(), src: "b".into(), tgt: "b".into() },
                ],
                compose: vec![
                    ["1a".into(), "1a".into(), "1a".into()],
                    ["1b".into(), "1b".into(), "1b".into()],
                ],
                identity: [("a".into(), "1a".into()), ("b".into(), "1b".into())].into(),
                inverse: [("1a".into(), "1a".into()), ("1b".into(), "1b".into())].into(),
            })
            .unwrap(),
        );
        let t = Arc::new(FiniteGroupoid::terminal());
        let f = Functor::new(two, t, vec![0, 0], vec![0, 0]).unwrap();
        let r = weak_equivalence_report(&f);
        assert!(r.es_map_surjective && !r.ff_map_bijective);
        assert!(r.ff_witness.unwrap().contains("unhit"));
    }

    #[test]
    fn empty_domain() {
        let e = Arc::new(FiniteGroupoid::empty());
        let t = Arc::new(FiniteGroupoid::terminal());
        assert!(weak_equivalence_report(&Functor::identity(&e)).is_ssw());
        let f = Functor::new(e, t, vec![], vec![]).unwrap();
        assert!(!weak_equivalence_report(&f).is_weak_equivalence());
    }
}
