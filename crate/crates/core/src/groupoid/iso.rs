use std::sync::Arc;

use crate::groupoid::functor::Functor;
use crate::groupoid::group::FiniteGroup;
use crate::groupoid::{Arr, FiniteGroupoid, Obj};

/// Result of a bounded search. Running out of budget is a non-answer, never a
/// negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome<T> {
    Found(T),
    NotIsomorphic,
    BudgetExceeded,
}

impl<T> IsoOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            IsoOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, IsoOutcome::Found(_))
    }
}

/// The loops at `x` as a group, with the arrow behind each element.
pub fn isotropy_group(g: &FiniteGroupoid, x: Obj) -> (FiniteGroup, Vec<Arr>) {
    let loops = g.loops(x);
    let pos = |a: Arr| loops.binary_search(&a).expect("loop closed under composition");
    let n = loops.len();
    let mut mul = Vec::with_capacity(n * n);
    for &a in &loops {
        for &b in &loops {
            mul.push(pos(g.compose(a, b).expect("loops compose")));
        }
    }
    let elements = loops.iter().map(|&a| g.arrow_id(a).to_string()).collect();
    let grp = FiniteGroup::from_indices(elements, mul, pos(g.unit(x))).expect("isotropy of a valid groupoid");
    (grp, loops)
}

struct Component {
    members: Vec<Obj>,
    isotropy: FiniteGroup,
    loops: Vec<Arr>,
    /// Arrow from the base object to each member, aligned with `members`.
    spanning: Vec<Arr>,
}

fn components(g: &FiniteGroupoid) -> Vec<Component> {
    g.components()
        .into_iter()
        .map(|members| {
            let base = members[0];
            let (isotropy, loops) = isotropy_group(g, base);
            let spanning = members.iter().map(|&x| g.hom(base, x).next().expect("connected")).collect();
            Component { members, isotropy, loops, spanning }
        })
        .collect()
}

/// Searches for an isomorphism of groupoids `g → h`.
///
/// Components are matched by size and isotropy order first; only the isotropy
/// group isomorphism is a backtracking search, and `budget` bounds the number
/// of candidate assignments it may try.
pub fn groupoid_iso_search(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>, budget: u64) -> IsoOutcome<Functor> {
    if g.object_count() != h.object_count() || g.arrow_count() != h.arrow_count() {
        return IsoOutcome::NotIsomorphic;
    }
    let (cg, ch) = (components(g), components(h));
    if cg.len() != ch.len() {
        return IsoOutcome::NotIsomorphic;
    }
    let mut budget = budget;
    let mut used = vec![false; ch.len()];
    let mut obj_map = vec![0; g.object_count()];
    let mut arr_map = vec![0; g.arrow_count()];
    let mut inconclusive = false;
    for c in &cg {
        let mut matched = None;
        for (j, d) in ch.iter().enumerate() {
            if used[j] || d.members.len() != c.members.len() || d.isotropy.order() != c.isotropy.order() {
                continue;
            }
            match c.isotropy.find_isomorphism(&d.isotropy, &mut budget) {
                IsoOutcome::Found(theta) => {
                    matched = Some((j, theta));
                    break;
                }
                IsoOutcome::BudgetExceeded => inconclusive = true,
                IsoOutcome::NotIsomorphic => {}
            }
        }
        let Some((j, theta)) = matched else {
            return if inconclusive { IsoOutcome::BudgetExceeded } else { IsoOutcome::NotIsomorphic };
        };
        used[j] = true;
        let d = &ch[j];
        for (i, &x) in c.members.iter().enumerate() {
            obj_map[x] = d.members[i];
        }
        let pos_g = |x: Obj| c.members.binary_search(&x).unwrap();
        let pos_h = |y: Obj| d.members.binary_search(&y).unwrap();
        for &x in &c.members {
            for &a in g.out_arrows(x) {
                let y = g.tgt(a);
                let (ax, ay) = (c.spanning[pos_g(x)], c.spanning[pos_g(y)]);
                let lp = g.compose_all(&[g.inverse(ay), a, ax]).unwrap();
                let l = c.loops.binary_search(&lp).unwrap();
                let image = d.loops[theta[l]];
                let (bx, by) = (d.spanning[pos_h(obj_map[x])], d.spanning[pos_h(obj_map[y])]);
                arr_map[a] = h.compose_all(&[by, image, h.inverse(bx)]).unwrap();
            }
        }
    }
    IsoOutcome::Found(Functor { dom: g.clone(), cod: h.clone(), obj_map, arr_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::functor::validate_functor;

    fn bz2() -> Arc<FiniteGroupoid> {
        action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap().groupoid
    }

    fn swap() -> Arc<FiniteGroupoid> {
        action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
            .unwrap()
            .groupoid
    }

    #[test]
    fn self_iso_found() {
        let g = swap();
        let f = groupoid_iso_search(&g, &g, 100).found().unwrap();
        assert!(f.is_bijective());
        assert!(validate_functor(&f).ok);
    }

    #[test]
    fn different_object_counts() {
        assert_eq!(groupoid_iso_search(&bz2(), &swap(), 100), IsoOutcome::NotIsomorphic);
    }

    #[test]
    fn pair_groupoid_matches_swap() {
        let p = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let f = groupoid_iso_search(&p, &swap(), 100).found().unwrap();
        assert!(validate_functor(&f).ok && f.is_bijective());
    }

    #[test]
    fn zero_budget_is_not_a_no() {
        let g = bz2();
        assert_eq!(groupoid_iso_search(&g, &g, 0), IsoOutcome::BudgetExceeded);
    }
}
