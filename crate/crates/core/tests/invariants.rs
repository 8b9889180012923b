use std::sync::Arc;

use morita_core::equivariant::{check_free, decompose, full_property_report, quotient_action, EquivariantFunctor, Property};
use morita_core::localization::{embed, identity_diagram, normalize_two_cell, two_cells_equal, GeneralizedMorphism};
use morita_core::morita::{is_ssw, morita_oracle, strict_pullback, weak_equivalence_report, weak_pullback};
use morita_core::workbench::generate::weak_equivalences_from;
use morita_core::workbench::{enumerate_actions, run_law_suite, ActionInstance, InstanceBudget};
use morita_core::{validate_groupoid, FiniteGroupoid};
use proptest::prelude::*;

fn budget() -> InstanceBudget {
    InstanceBudget { max_group_order: 6, max_carrier_size: 3, max_objects: 6, ..InstanceBudget::default() }
}

fn instances() -> &'static [ActionInstance] {
    static CELL: std::sync::OnceLock<Vec<ActionInstance>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| enumerate_actions(&budget()))
}

fn instance() -> impl Strategy<Value = &'static ActionInstance> {
    (0..instances().len()).prop_map(|i| &instances()[i])
}

/// `|G·x| · |G_x| = |G|`, counted straight from the act table.
fn orbit_stabilizer_holds(inst: &ActionInstance) -> bool {
    let a = &inst.action;
    let n = a.group.order();
    (0..a.carrier_size()).all(|x| {
        let mut orbit: Vec<usize> = (0..n).map(|g| a.act(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        let stab = (0..n).filter(|&g| a.act(g, x) == x).count();
        orbit.len() * stab == n
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_groupoids_are_valid_and_round_trip(inst in instance()) {
        let g = &inst.action.groupoid;
        let raw = g.to_raw();
        prop_assert!(validate_groupoid(&raw).unwrap().ok);
        prop_assert_eq!(&FiniteGroupoid::from_raw(&raw).unwrap(), &**g);
        prop_assert_eq!(g.arrow_count(), inst.action.group.order() * inst.action.carrier_size());
    }

    #[test]
    fn orbit_stabilizer(inst in instance()) {
        prop_assert!(orbit_stabilizer_holds(inst));
    }

    #[test]
    fn free_quotients_shrink_the_carrier_by_the_subgroup(inst in instance()) {
        let a = &inst.action;
        for n in a.group.two_generated_subgroups() {
            if !a.group.is_normal(&n) || check_free(a, &n).is_err() {
                continue;
            }
            let pi = quotient_action(a, &n).unwrap();
            prop_assert_eq!(pi.target.carrier_size() * n.len(), a.carrier_size());
            prop_assert!(is_ssw(&pi.functor));
            prop_assert!(morita_oracle(&a.groupoid, &pi.target.groupoid));
        }
    }

    #[test]
    fn generated_weak_equivalences_decompose(inst in instance()) {
        for w in weak_equivalences_from(inst, &budget()) {
            prop_assert!(weak_equivalence_report(&w.phi.functor).is_weak_equivalence(), "{}", w.id);
            let d = decompose(&w.phi).unwrap();
            prop_assert!(is_ssw(&d.pi.functor), "{}", w.id);
            prop_assert!(weak_equivalence_report(&d.i.functor).is_weak_equivalence(), "{}", w.id);
            let composite = EquivariantFunctor::compose(&d.i, &d.pi).unwrap();
            prop_assert_eq!(composite.source.carrier_size(), w.phi.source.carrier_size());
            let (before, after) = (full_property_report(&w.phi.source), full_property_report(&d.i.source));
            for p in [Property::Free, Property::Transitive] {
                prop_assert_eq!(before.holds(p), after.holds(p), "{} {}", w.id, p);
            }
        }
    }

    #[test]
    fn pullback_legs_transfer_weak_equivalence(inst in instance()) {
        for w in weak_equivalences_from(inst, &budget()) {
            let phi = &w.phi.functor;
            let id = morita_core::Functor::identity(&phi.cod);
            let wp = weak_pullback(phi, &id).unwrap();
            prop_assert!(is_ssw(&wp.pr3), "{}", w.id);
            if is_ssw(phi) {
                let sp = strict_pullback(phi, &id).unwrap();
                prop_assert!(is_ssw(&sp.pr2), "{}", w.id);
            }
        }
    }

    #[test]
    fn identity_cells_normalize_idempotently(inst in instance()) {
        let g = Arc::clone(&inst.action.groupoid);
        let d = identity_diagram(&GeneralizedMorphism::identity(&g));
        let n = normalize_two_cell(&d).unwrap();
        let again = normalize_two_cell(&embed(&n)).unwrap();
        prop_assert!(n.same_nu(&again));
        prop_assert!(two_cells_equal(&d, &embed(&n)).unwrap());
    }
}

#[test]
fn sampled_regime_verdicts_do_not_depend_on_the_seed() {
    for seed in [1, 2] {
        let b = InstanceBudget { max_group_order: 2, max_carrier_size: 5, max_objects: 6, sample_seed: seed, ..InstanceBudget::default() };
        assert!(!b.exhaustive());
        let r = run_law_suite(&b);
        assert!(r.weak_equivalences > 0);
        for l in &r.laws {
            assert!(l.passed(), "seed {seed}: {}: {:?}", l.law, l.witness);
        }
    }
}
