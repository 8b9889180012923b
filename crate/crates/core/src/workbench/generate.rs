use std::collections::HashSet;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equivariant::balanced::{balanced_product, restrict_action};
use crate::equivariant::functor::EquivariantFunctor;
use crate::equivariant::quotient::{check_free, quotient_action};
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::group::FiniteGroup;
use crate::workbench::InstanceBudget;

/// Generator images tried per group and carrier size in the sampled regime.
const SAMPLES: usize = 48;

#[derive(Debug, Clone)]
pub struct ActionInstance {
    pub id: String,
    pub action: Arc<ActionGroupoid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeKind {
    Identity,
    Quotient,
    Inclusion,
    Composite,
}

/// A generated weak equivalence with the factorization it was built from.
#[derive(Debug, Clone)]
pub struct GeneratedWe {
    pub id: String,
    pub kind: WeKind,
    pub phi: EquivariantFunctor,
    pub pi: EquivariantFunctor,
    pub i: EquivariantFunctor,
}

fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// Least act table among all relabelings of the carrier.
fn canonical_table(act: &[usize], order: usize, m: usize) -> Vec<usize> {
    (0..m)
        .permutations(m)
        .map(|sigma| {
            let mut inv = vec![0; m];
            for (x, &s) in sigma.iter().enumerate() {
                inv[s] = x;
            }
            (0..order * m).map(|idx| sigma[act[(idx / m) * m + inv[idx % m]]]).collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

fn homs_into_symmetric(g: &FiniteGroup, m: usize, budget: &InstanceBudget) -> Vec<Vec<usize>> {
    let gens = g.generators();
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let identity: Vec<usize> = (0..m).collect();
    let images: Vec<Vec<&Vec<usize>>> = if budget.exhaustive() || m <= 4 {
        (0..gens.len()).map(|_| perms.iter()).multi_cartesian_product().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.sample_seed ^ ((g.order() as u64) << 32) ^ m as u64);
        (0..SAMPLES).map(|_| gens.iter().map(|_| perms.choose(&mut rng).unwrap()).collect()).collect()
    };
    let mut out = Vec::new();
    for choice in images {
        let imgs: Vec<Vec<usize>> = choice.into_iter().cloned().collect();
        if let Some(rho) = g.extend_homomorphism(&gens, &imgs, identity.clone(), |p, q| compose_perm(p, q)) {
            out.push(rho.into_iter().flatten().collect());
        }
    }
    out
}

/// Every action of every catalog group on carriers of size `1..=max_carrier_size`,
/// one per relabeling class, in catalog order.
pub fn enumerate_actions(budget: &InstanceBudget) -> Vec<ActionInstance> {
    let mut out = Vec::new();
    for (name, g) in budget.groups() {
        for m in 1..=budget.max_carrier_size {
            let mut seen = HashSet::new();
            let mut count = 0;
            for act in homs_into_symmetric(&g, m, budget) {
                if !seen.insert(canonical_table(&act, g.order(), m)) {
                    continue;
                }
                let carrier = (0..m).map(|x| x.to_string()).collect();
                let action = action_groupoid(g.clone(), carrier, act).expect("homomorphism into S_m");
                out.push(ActionInstance { id: format!("{name}/{m}#{count}"), action: Arc::new(action) });
                count += 1;
            }
        }
    }
    out
}

fn nontrivial_normal_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    g.two_generated_subgroups().into_iter().filter(|n| n.len() > 1 && g.is_normal(n)).collect()
}

fn quotients(a: &Arc<ActionGroupoid>) -> Vec<(String, EquivariantFunctor)> {
    nontrivial_normal_subgroups(&a.group)
        .into_iter()
        .filter(|n| check_free(a, n).is_ok())
        .map(|n| {
            let label = format!("N{}", n.iter().map(|&k| a.group.element_id(k)).join(","));
            (label, quotient_action(a, &n).expect("free normal subgroup"))
        })
        .collect()
}

/// `K ⋉ X → G ⋉ (G ×_K X)` with `K = k`.
fn inclusion(g: &Arc<FiniteGroup>, incl: &[usize], a: &Arc<ActionGroupoid>) -> EquivariantFunctor {
    balanced_product(g, incl, a).expect("subgroup inclusion").inclusion
}

/// Weak equivalences built from each instance: the identity, quotients by
/// free normal subgroups, balanced-product inclusions for every subgroup of
/// the acting group, and quotients followed by the inclusion `Q → Q × C2`.
pub fn generate_weak_equivalences(budget: &InstanceBudget) -> Vec<GeneratedWe> {
    enumerate_actions(budget).iter().flat_map(|inst| weak_equivalences_from(inst, budget)).collect()
}

pub fn weak_equivalences_from(inst: &ActionInstance, budget: &InstanceBudget) -> Vec<GeneratedWe> {
    let a = &inst.action;
    let id = EquivariantFunctor::identity(a);
    let mut out = vec![GeneratedWe {
        id: format!("{}:id", inst.id),
        kind: WeKind::Identity,
        phi: id.clone(),
        pi: id.clone(),
        i: id.clone(),
    }];
    let c2 = FiniteGroup::cyclic(2);
    for (label, pi) in quotients(a) {
        let after = EquivariantFunctor::identity(&pi.target);
        out.push(GeneratedWe {
            id: format!("{}:q[{label}]", inst.id),
            kind: WeKind::Quotient,
            phi: pi.clone(),
            pi: pi.clone(),
            i: after,
        });
        let q = &pi.target;
        if 2 * q.group.order() <= budget.max_group_order && 2 * q.carrier_size() <= budget.max_objects {
            let big = Arc::new(FiniteGroup::product(&q.group, &c2));
            let incl: Vec<usize> = (0..q.group.order()).map(|x| x * 2).collect();
            let i = inclusion(&big, &incl, q);
            let phi = EquivariantFunctor::compose(&i, &pi).expect("composable");
            out.push(GeneratedWe { id: format!("{}:q[{label}]+x2", inst.id), kind: WeKind::Composite, phi, pi, i });
        }
    }
    let g = &a.group;
    for k in g.two_generated_subgroups() {
        if a.carrier_size() * (g.order() / k.len()) > budget.max_objects {
            continue;
        }
        let (restricted, incl) = restrict_action(a, &k).expect("subgroup");
        let i = inclusion(g, &incl, &restricted);
        let src = EquivariantFunctor::identity(&restricted);
        out.push(GeneratedWe {
            id: format!("{}:i[{}]", inst.id, k.iter().map(|&e| g.element_id(e)).join(",")),
            kind: WeKind::Inclusion,
            phi: i.clone(),
            pi: src,
            i,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morita::equivalence::weak_equivalence_report;
    use crate::workbench::catalog::klein_four;

    fn small() -> InstanceBudget {
        InstanceBudget { max_group_order: 4, max_carrier_size: 2, max_objects: 4, ..InstanceBudget::default() }
    }

    #[test]
    fn trivial_group_on_one_point_has_one_action() {
        let b = InstanceBudget { max_group_order: 1, max_carrier_size: 1, ..InstanceBudget::default() };
        assert_eq!(enumerate_actions(&b).len(), 1);
    }

    #[test]
    fn z2_on_two_points_has_two_actions() {
        let b = InstanceBudget { max_group_order: 2, max_carrier_size: 2, ..InstanceBudget::default() };
        let n = enumerate_actions(&b).iter().filter(|i| i.id.starts_with("C2/2")).count();
        assert_eq!(n, 2);
    }

    #[test]
    fn klein_on_four_points_includes_the_square() {
        let b = InstanceBudget { max_group_order: 4, max_carrier_size: 4, ..InstanceBudget::default() };
        let v4 = klein_four();
        // N, S, E, W = 0, 1, 2, 3
        let square = vec![0, 1, 2, 3, 0, 1, 3, 2, 1, 0, 2, 3, 1, 0, 3, 2];
        let key = canonical_table(&square, 4, 4);
        assert!(enumerate_actions(&b).iter().any(|i| {
            *i.action.group == v4
                && i.action.carrier_size() == 4
                && canonical_table(i.action.act_table(), 4, 4) == key
        }));
    }

    #[test]
    fn generated_functors_are_weak_equivalences() {
        let we = generate_weak_equivalences(&small());
        assert!(we.iter().any(|w| w.kind == WeKind::Composite));
        for w in &we {
            assert!(weak_equivalence_report(&w.phi.functor).is_weak_equivalence(), "{}", w.id);
            assert_eq!(EquivariantFunctor::compose(&w.i, &w.pi).unwrap().functor, w.phi.functor, "{}", w.id);
        }
    }

    #[test]
    fn sampled_regime_is_seeded() {
        let b = InstanceBudget { max_group_order: 2, max_carrier_size: 5, max_objects: 6, sample_seed: 7, ..InstanceBudget::default() };
        assert!(!b.exhaustive());
        let ids = |b: &InstanceBudget| enumerate_actions(b).into_iter().map(|i| i.id).collect::<Vec<_>>();
        assert_eq!(ids(&b), ids(&b));
    }
}
