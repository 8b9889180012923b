use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::group::FiniteGroup;
use crate::groupoid::{tuple_id, Arr, FiniteGroupoid, GroupoidBuilder, Obj};

/// A finite group acting on a finite set, together with its action groupoid.
///
/// The arrow `(g, x): x → g·x` has index `g * |X| + x`.
#[derive(Clone, PartialEq, Eq)]
pub struct ActionGroupoid {
    pub group: Arc<FiniteGroup>,
    pub carrier: Vec<String>,
    act: Vec<Obj>,
    pub groupoid: Arc<FiniteGroupoid>,
}

impl std::fmt::Debug for ActionGroupoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionGroupoid").field("group", &self.group).field("carrier", &self.carrier).finish()
    }
}

/// Checks the action axioms on `act[g * |X| + x] = g·x` and builds the groupoid.
pub fn action_groupoid(group: Arc<FiniteGroup>, carrier: Vec<String>, act: Vec<Obj>) -> Result<ActionGroupoid> {
    let (n, m) = (group.order(), carrier.len());
    if act.len() != n * m || act.iter().any(|&y| y >= m) {
        return Err(Error::mismatch("action table does not cover G × X"));
    }
    let e = group.unit();
    for x in 0..m {
        if act[e * m + x] != x {
            return Err(Error::ActionAxiom {
                g1: group.element_id(e).into(),
                g2: group.element_id(e).into(),
                x: carrier[x].clone(),
            });
        }
    }
    for g1 in 0..n {
        for g2 in 0..n {
            for x in 0..m {
                if act[g1 * m + act[g2 * m + x]] != act[group.mul(g1, g2) * m + x] {
                    return Err(Error::ActionAxiom {
                        g1: group.element_id(g1).into(),
                        g2: group.element_id(g2).into(),
                        x: carrier[x].clone(),
                    });
                }
            }
        }
    }
    let mut b = GroupoidBuilder::default();
    for x in &carrier {
        b.add_object(x.clone());
    }
    for g in 0..n {
        for x in 0..m {
            b.add_arrow(tuple_id(&[group.element_id(g), &carrier[x]]), x, act[g * m + x]);
        }
    }
    b.units = (0..m).map(|x| e * m + x).collect();
    b.inverses = (0..n * m).map(|a| group.inv(a / m) * m + act[a]).collect();
    let grp = group.clone();
    let groupoid = b.build(Arc::new(move |after, first| grp.mul(after / m, first / m) * m + first % m))?;
    Ok(ActionGroupoid { group, carrier, act, groupoid: Arc::new(groupoid) })
}

impl ActionGroupoid {
    /// Builds from a permutation per group element.
    pub fn from_permutations(group: Arc<FiniteGroup>, carrier: Vec<String>, perms: &[Vec<Obj>]) -> Result<Self> {
        let act = perms.iter().flatten().copied().collect();
        action_groupoid(group, carrier, act)
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier.len()
    }

    pub fn act(&self, g: usize, x: Obj) -> Obj {
        self.act[g * self.carrier.len() + x]
    }

    pub fn act_table(&self) -> &[Obj] {
        &self.act
    }

    pub fn arrow(&self, g: usize, x: Obj) -> Arr {
        g * self.carrier.len() + x
    }

    /// `(g, x)` of an arrow index.
    pub fn split(&self, a: Arr) -> (usize, Obj) {
        (a / self.carrier.len(), a % self.carrier.len())
    }

    pub fn stabilizer(&self, x: Obj) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect()
    }

    /// Orbit labels per point and the least point of each orbit.
    pub fn orbits(&self) -> (Vec<usize>, Vec<Obj>) {
        let m = self.carrier.len();
        let mut label = vec![usize::MAX; m];
        let mut reps = Vec::new();
        for x in 0..m {
            if label[x] != usize::MAX {
                continue;
            }
            for g in 0..self.group.order() {
                label[self.act(g, x)] = reps.len();
            }
            reps.push(x);
        }
        (label, reps)
    }

    /// Rows of `[g, x, g·x]` ids in table order.
    pub fn action_triples(&self) -> Vec<[String; 3]> {
        let m = self.carrier.len();
        (0..self.group.order() * m)
            .map(|a| {
                [
                    self.group.element_id(a / m).to_string(),
                    self.carrier[a % m].clone(),
                    self.carrier[self.act[a]].clone(),
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_groupoid;

    #[test]
    fn trivial_group_on_a_point() {
        let a = action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["p".into()], vec![0]).unwrap();
        assert_eq!(a.groupoid.object_count(), 1);
        assert_eq!(a.groupoid.arrow_count(), 1);
    }

    #[test]
    fn swap_has_no_nonunit_loops() {
        let a = action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
            .unwrap();
        let g = &a.groupoid;
        assert_eq!((g.object_count(), g.arrow_count()), (2, 4));
        let loops: Vec<_> = (0..4).filter(|&x| g.src(x) == g.tgt(x) && !g.is_unit(x)).collect();
        assert!(loops.is_empty());
        assert!(validate_groupoid(&g.to_raw()).unwrap().ok);
        assert_eq!(g.arrow_id(3), "(1,1)");
    }

    #[test]
    fn bad_action_has_witness() {
        // Z/3 cannot swap two points.
        let err = action_groupoid(
            Arc::new(FiniteGroup::cyclic(3)),
            vec!["0".into(), "1".into()],
            vec![0, 1, 1, 0, 0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::ActionAxiom { .. }));
    }
}
