use std::fmt::Display;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::equivariant::bibundle::equivariant_anafunctorify;
use crate::equivariant::decompose::decompose;
use crate::equivariant::functor::{as_equivariant, EquivariantFunctor};
use crate::equivariant::properties::{full_property_report, Property};
use crate::equivariant::pullback::{equivariant_strict_pullback, equivariant_weak_pullback};
use crate::equivariant::quotient::quotient_factorization;
use crate::groupoid::action::{action_groupoid, ActionGroupoid};
use crate::groupoid::functor::Functor;
use crate::groupoid::group::FiniteGroup;
use crate::groupoid::validate_groupoid;
use crate::localization::span::{
    anafunctorify, doubling, identity_anafunctor, left_unitor, right_unitor, strictify_composition, Anafunctor,
    GeneralizedMorphism,
};
use crate::localization::two_cell::{
    embed, identity_diagram, identity_two_cell, normalize_two_cell, perturb, reverse, two_cells_equal,
    validate_two_cell, vertical_compose_ana, AnaTwoCell, TwoCellDiagram,
};
use crate::morita::equivalence::weak_equivalence_report;
use crate::morita::pullback::{strict_pullback, weak_pullback};
use crate::morita::skeleton::skeleton_invariant;
use crate::workbench::generate::{
    enumerate_actions, generate_weak_equivalences, weak_equivalences_from, ActionInstance, GeneratedWe,
};
use crate::workbench::klein::{klein_demo, KleinReport};
use crate::workbench::shrink::shrink_groupoid;
use crate::workbench::InstanceBudget;

pub mod law {
    pub const GROUPOID_AXIOMS: &str = "groupoid axioms";
    pub const GENERATOR_SOUNDNESS: &str = "generator soundness";
    pub const KLEIN_GOLDEN: &str = "klein golden";
    pub const DECOMPOSITION: &str = "decomposition";
    pub const TWO_OUT_OF_THREE: &str = "two out of three";
    pub const STRICT_PULLBACK: &str = "strict pullback";
    pub const WEAK_PULLBACK: &str = "weak pullback";
    pub const EQUIVARIANT_STRICT_PULLBACK: &str = "equivariant strict pullback";
    pub const EQUIVARIANT_WEAK_PULLBACK: &str = "equivariant weak pullback";
    pub const NORMALIZATION_IDEMPOTENT: &str = "normalization idempotent";
    pub const TWO_CELL_EQUALITY: &str = "2-cell equality is an equivalence";
    pub const VERTICAL_COMPOSITION: &str = "vertical composition";
    pub const PERTURBATION: &str = "perturbation invariance";
    pub const ANAFUNCTORIFY: &str = "anafunctorify witness";
    pub const EQUIVARIANT_ANAFUNCTORIFY: &str = "equivariant anafunctorify";
    pub const STRICTIFY: &str = "strictify composition";
    pub const SKELETON_INVARIANCE: &str = "skeleton invariance";
    pub const PROPERTY_INVARIANCE: &str = "property invariance";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    /// Acceptance criterion the law belongs to; 0 for the workbench's own.
    pub criterion: u8,
    pub instances: usize,
    pub failures: usize,
    /// First failure, after shrinking where the law supports it.
    pub witness: Option<String>,
    pub expected_divergences: Vec<String>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub budget: InstanceBudget,
    pub actions: usize,
    pub weak_equivalences: usize,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.laws.iter().all(LawResult::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn criterion(&self, c: u8) -> Vec<&LawResult> {
        self.laws.iter().filter(|l| l.criterion == c).collect()
    }
}

/// `Ok(None)` passes, `Ok(Some(note))` is an expected divergence.
pub type Check = std::result::Result<Option<String>, String>;

fn err<E: Display>(context: &'static str) -> impl Fn(E) -> String {
    move |e| format!("{context}: {e}")
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tally<T: Sync>(
    law: &str,
    criterion: u8,
    items: &[T],
    id: impl Fn(&T) -> String + Sync,
    check: impl Fn(&T) -> Check + Sync,
) -> LawResult {
    let outcomes: Vec<Check> = items.par_iter().map(&check).collect();
    let mut result = LawResult {
        law: law.to_string(),
        criterion,
        instances: items.len(),
        failures: 0,
        witness: None,
        expected_divergences: Vec::new(),
    };
    for (item, outcome) in items.iter().zip(outcomes) {
        match outcome {
            Ok(None) => {}
            Ok(Some(note)) => result.expected_divergences.push(format!("{}: {note}", id(item))),
            Err(detail) => {
                result.failures += 1;
                if result.witness.is_none() {
                    result.witness = Some(format!("{}: {detail}", id(item)));
                }
            }
        }
    }
    result
}

fn point() -> Arc<ActionGroupoid> {
    Arc::new(action_groupoid(Arc::new(FiniteGroup::trivial()), vec!["*".into()], vec![0]).expect("point"))
}

/// `G ⋉ X → 1 ⋉ {*}`.
pub fn collapse(a: &Arc<ActionGroupoid>) -> EquivariantFunctor {
    let n = a.group.order();
    EquivariantFunctor::from_hom(a.clone(), point(), vec![0; n], vec![0; a.carrier_size()]).expect("collapse")
}

pub fn law_groupoid_axioms(budget: &InstanceBudget, actions: &[ActionInstance]) -> LawResult {
    tally(law::GROUPOID_AXIOMS, 0, actions, |i| i.id.clone(), |inst| {
        let mut raw = inst.action.groupoid.to_raw();
        if budget.corrupt_composition {
            if let Some(entry) = raw.compose.iter_mut().find(|c| c[0] != c[1]) {
                let wrong = raw.arrows.iter().find(|a| a.id != entry[2]).map(|a| a.id.clone());
                if let Some(w) = wrong {
                    entry[2] = w;
                }
            }
        }
        let report = validate_groupoid(&raw).map_err(err("tables"))?;
        if report.ok {
            return Ok(None);
        }
        let shrunk = shrink_groupoid(&raw);
        let first = validate_groupoid(&shrunk).map_err(err("shrunk tables"))?;
        Err(format!(
            "{}; shrunk to {} objects and {} arrows: {}",
            report.first().map(|v| v.to_string()).unwrap_or_default(),
            shrunk.objects.len(),
            shrunk.arrows.len(),
            first.first().map(|v| v.to_string()).unwrap_or_default()
        ))
    })
}

pub fn law_generator_soundness(wes: &[GeneratedWe]) -> LawResult {
    tally(law::GENERATOR_SOUNDNESS, 0, wes, |w| w.id.clone(), |w| {
        let r = weak_equivalence_report(&w.phi.functor);
        ensure!(r.is_weak_equivalence(), "not a weak equivalence: {r:?}");
        let e = as_equivariant(&w.phi.functor, &w.phi.source, &w.phi.target).map_err(err("as_equivariant"))?;
        ensure!(e.group_hom == w.phi.group_hom, "recovered homomorphism differs");
        Ok(None)
    })
}

pub fn expected_klein() -> KleinReport {
    KleinReport {
        original_effective: true,
        original_free: false,
        original_transitive: false,
        kernel: vec!["(e,e)".into(), "(τ,τ)".into()],
        kernel_acts_freely: true,
        quotient_objects: vec!["[N]".into(), "[E]".into()],
        quotient_isotropy_orders: vec![2, 2],
        quotient_effective: false,
        quotient_effective_witness: None,
    }
}

pub fn law_klein_golden() -> LawResult {
    tally(law::KLEIN_GOLDEN, 1, &[()], |_| "klein square".into(), |_| {
        let mut got = klein_demo().map_err(err("demo"))?;
        ensure!(got.quotient_effective_witness.is_some(), "no witness for non-effectiveness");
        got.quotient_effective_witness = None;
        let want = expected_klein();
        ensure!(got == want, "got {got:?}, expected {want:?}");
        Ok(None)
    })
}

/// `θ: Q → M` with `θ ∘ known_pi = pi` and `i ∘ θ = known_i`, if one exists.
pub fn factorization_iso(
    known_pi: &EquivariantFunctor,
    known_i: &EquivariantFunctor,
    pi: &EquivariantFunctor,
    i: &EquivariantFunctor,
) -> std::result::Result<EquivariantFunctor, String> {
    let (q, m) = (&known_pi.target, &pi.target);
    let mut hom = vec![usize::MAX; q.group.order()];
    for (g, &kg) in known_pi.group_hom.iter().enumerate() {
        let want = pi.group_hom[g];
        ensure!(hom[kg] == usize::MAX || hom[kg] == want, "group map not well defined");
        hom[kg] = want;
    }
    let mut obj = vec![usize::MAX; q.carrier_size()];
    for x in 0..known_pi.source.carrier_size() {
        let (kx, want) = (known_pi.obj(x), pi.obj(x));
        ensure!(obj[kx] == usize::MAX || obj[kx] == want, "object map not well defined");
        obj[kx] = want;
    }
    ensure!(!hom.contains(&usize::MAX) && !obj.contains(&usize::MAX), "known π is not surjective");
    let theta = EquivariantFunctor::from_hom(q.clone(), m.clone(), hom, obj).map_err(err("θ"))?;
    ensure!(theta.functor.is_bijective(), "θ is not bijective");
    let through = EquivariantFunctor::compose(i, &theta).map_err(err("i ∘ θ"))?;
    ensure!(through.functor == known_i.functor, "i ∘ θ differs from the known inclusion");
    Ok(theta)
}

pub fn law_decomposition(wes: &[GeneratedWe]) -> LawResult {
    tally(law::DECOMPOSITION, 2, wes, |w| w.id.clone(), |w| {
        let d = decompose(&w.phi).map_err(err("decompose"))?;
        let composite = EquivariantFunctor::compose(&d.i, &d.pi).map_err(err("i ∘ π"))?;
        ensure!(composite.functor == w.phi.functor, "i ∘ π differs from φ");
        ensure!(weak_equivalence_report(&d.pi.functor).is_ssw(), "π is not ssw");
        ensure!(weak_equivalence_report(&d.i.functor).is_weak_equivalence(), "i is not a weak equivalence");
        let before = full_property_report(&w.phi.source);
        let after = full_property_report(d.middle());
        for p in Property::ALL {
            if p != Property::Effective && before.holds(p) == Some(true) {
                ensure!(after.holds(p) == Some(true), "{p} lost on the middle");
            }
        }
        factorization_iso(&w.pi, &w.i, &d.pi, &d.i)?;
        if weak_equivalence_report(&w.phi.functor).is_ssw() {
            let qf = quotient_factorization(&w.phi).map_err(err("quotient factorization"))?;
            ensure!(qf.kernel == d.kernel, "kernels differ between the two factorizations");
            ensure!(d.i.functor.is_bijective(), "i is not an isomorphism for an ssw φ");
        }
        Ok(None)
    })
}

/// Generated weak equivalences starting at the target of each generated one.
pub fn composable_pairs(wes: &[GeneratedWe], budget: &InstanceBudget) -> Vec<(GeneratedWe, GeneratedWe)> {
    wes.par_iter()
        .flat_map_iter(|w| {
            let inst = ActionInstance { id: format!("{}>", w.id), action: w.phi.target.clone() };
            weak_equivalences_from(&inst, budget)
                .into_iter()
                .filter(|next| next.phi.source == w.phi.target)
                .map(move |next| (w.clone(), next))
        })
        .collect()
}

pub fn law_two_out_of_three(wes: &[GeneratedWe], pairs: &[(GeneratedWe, GeneratedWe)]) -> LawResult {
    let mut triples: Vec<(String, Functor, Functor)> = Vec::new();
    for w in wes {
        triples.push((format!("{} then collapse", w.id), w.phi.functor.clone(), collapse(&w.phi.target).functor));
    }
    for (first, second) in pairs {
        triples.push((second.id.clone(), first.phi.functor.clone(), second.phi.functor.clone()));
    }
    tally(law::TWO_OUT_OF_THREE, 3, &triples, |t| t.0.clone(), |(_, f, g)| {
        let composite = crate::groupoid::functor::compose_functors(g, f).map_err(err("composite"))?;
        let verdicts = [f, g, &composite].map(|h| weak_equivalence_report(h).is_weak_equivalence());
        ensure!(verdicts.iter().filter(|&&v| v).count() != 2, "exactly two of f, g, gf are weak equivalences: {verdicts:?}");
        Ok(None)
    })
}

fn cospans(wes: &[GeneratedWe]) -> Vec<(String, EquivariantFunctor, EquivariantFunctor)> {
    let mut out = Vec::new();
    for w in wes {
        let id = EquivariantFunctor::identity(&w.phi.target);
        out.push((format!("{} × id", w.id), w.phi.clone(), id));
        out.push((format!("{} × self", w.id), w.phi.clone(), w.phi.clone()));
        out.push((format!("{} × i", w.id), w.phi.clone(), w.i.clone()));
    }
    out
}

fn same_free_transitive(a: &ActionGroupoid, b: &ActionGroupoid) -> std::result::Result<(), String> {
    let (ra, rb) = (full_property_report(a), full_property_report(b));
    for p in [Property::Free, Property::Transitive] {
        ensure!(ra.holds(p) == rb.holds(p), "{p} differs between the pullback and the foot");
    }
    Ok(())
}

pub fn law_pullbacks(wes: &[GeneratedWe]) -> Vec<LawResult> {
    let cs = cospans(wes);
    let ssw: Vec<_> = cs.iter().filter(|c| weak_equivalence_report(&c.1.functor).is_ssw()).cloned().collect();
    let id = |c: &(String, EquivariantFunctor, EquivariantFunctor)| c.0.clone();
    vec![
        tally(law::STRICT_PULLBACK, 3, &ssw, id, |(_, phi, psi)| {
            let p = strict_pullback(&phi.functor, &psi.functor).map_err(err("strict pullback"))?;
            p.verify_ssw_transfer(&phi.functor).map_err(err("transfer"))?;
            ensure!(weak_equivalence_report(&p.pr2).is_ssw(), "pr2 is not ssw");
            Ok(None)
        }),
        tally(law::WEAK_PULLBACK, 3, &cs, id, |(_, phi, psi)| {
            let p = weak_pullback(&phi.functor, &psi.functor).map_err(err("weak pullback"))?;
            p.verify_ssw_transfer(&phi.functor).map_err(err("transfer"))?;
            ensure!(weak_equivalence_report(&p.pr3).is_ssw(), "pr3 is not ssw");
            Ok(None)
        }),
        tally(law::EQUIVARIANT_STRICT_PULLBACK, 3, &ssw, id, |(_, phi, psi)| {
            let p = equivariant_strict_pullback(phi, psi).map_err(err("equivariant strict pullback"))?;
            same_free_transitive(&p.action, &psi.source)?;
            Ok(None)
        }),
        tally(law::EQUIVARIANT_WEAK_PULLBACK, 3, &cs, id, |(_, phi, psi)| {
            let p = equivariant_weak_pullback(&phi.source, &phi.functor, &psi.source, &psi.functor)
                .map_err(err("equivariant weak pullback"))?;
            same_free_transitive(&p.action, &psi.source)?;
            Ok(None)
        }),
    ]
}

/// Diagrams over `f = (id, φ)` with their normal forms, in the order
/// identity, left unitor, right unitor and the two reversed unitors.
struct CellKit {
    f: Anafunctor,
    diagrams: [TwoCellDiagram; 5],
    normal: Vec<AnaTwoCell>,
}

const IDENTITY: usize = 0;
const LEFT: usize = 1;
const LEFT_REVERSED: usize = 3;

fn cell_kit(w: &GeneratedWe) -> std::result::Result<CellKit, String> {
    let f = Anafunctor::new(Functor::identity(&w.phi.source.groupoid), w.phi.functor.clone()).map_err(err("anafunctor"))?;
    let left = left_unitor(f.as_generalized()).map_err(err("left unitor"))?;
    let right = right_unitor(f.as_generalized()).map_err(err("right unitor"))?;
    let diagrams = [identity_diagram(f.as_generalized()), left.clone(), right.clone(), reverse(&left), reverse(&right)];
    let normal = diagrams.iter().map(normalize).collect::<std::result::Result<_, _>>()?;
    Ok(CellKit { f, diagrams, normal })
}

fn normalize(d: &TwoCellDiagram) -> std::result::Result<AnaTwoCell, String> {
    normalize_two_cell(d).map_err(err("normalize"))
}

fn vertical(c1: &AnaTwoCell, c2: &AnaTwoCell) -> std::result::Result<AnaTwoCell, String> {
    vertical_compose_ana(c1, c2).map_err(err("vertical composition"))
}

/// 2-cells `id ⇒ id` on `G ⋉ X` from central elements acting trivially.
fn central_cells(a: &Arc<ActionGroupoid>) -> std::result::Result<Vec<AnaTwoCell>, String> {
    let g = &a.group;
    let f = identity_anafunctor(&a.groupoid);
    let p = strict_pullback(&f.left, &f.left).map_err(err("pullback"))?;
    let central = (0..g.order()).filter(|&z| {
        (0..g.order()).all(|h| g.mul(z, h) == g.mul(h, z)) && (0..a.carrier_size()).all(|x| a.act(z, x) == x)
    });
    central
        .map(|z| {
            let components = (0..p.apex.object_count()).map(|o| a.arrow(z, p.object_parts(o).0)).collect();
            AnaTwoCell::new(f.clone(), f.clone(), components).map_err(err("central cell"))
        })
        .collect()
}

pub fn law_two_cells(wes: &[GeneratedWe]) -> Vec<LawResult> {
    let kits: Vec<_> = wes.par_iter().map(cell_kit).collect();
    let items: Vec<_> = wes.iter().zip(&kits).collect();
    let id = |(w, _): &(&GeneratedWe, &std::result::Result<CellKit, String>)| w.id.clone();
    vec![
        tally(law::NORMALIZATION_IDEMPOTENT, 4, &items, id, |(_, kit)| {
            let k = kit.as_ref().map_err(Clone::clone)?;
            for n in &k.normal {
                ensure!(n.same_nu(&normalize(&embed(n))?), "normal form is not fixed by normalization");
            }
            let ident = identity_two_cell(&k.f).map_err(err("identity cell"))?;
            ensure!(k.normal[IDENTITY].same_nu(&ident), "identity diagram does not normalize to ι");
            Ok(None)
        }),
        tally(law::TWO_CELL_EQUALITY, 4, &items, id, |(w, kit)| {
            let k = kit.as_ref().map_err(Clone::clone)?;
            let base = &k.diagrams[IDENTITY];
            let n = &k.normal[IDENTITY];
            let unit = identity_two_cell(&k.f).map_err(err("identity cell"))?;
            let mut ds = vec![
                base.clone(),
                perturb(base, &doubling(&base.mediator)).map_err(err("perturb"))?,
                embed(n),
                embed(&vertical(n, &unit)?),
            ];
            if identity_anafunctor(&w.phi.source.groupoid) == k.f {
                ds.extend(central_cells(&w.phi.source)?.iter().skip(1).take(2).map(embed));
            }
            let eq = |a: &TwoCellDiagram, b: &TwoCellDiagram| two_cells_equal(a, b).map_err(err("2-cell equality"));
            let m = ds.len();
            let mut table = vec![vec![false; m]; m];
            for (i, a) in ds.iter().enumerate() {
                for (j, b) in ds.iter().enumerate() {
                    table[i][j] = eq(a, b)?;
                }
            }
            ensure!(table[0][1] && table[0][2] && table[0][3], "identity representatives are not identified");
            for i in 0..m {
                ensure!(table[i][i], "not reflexive at {i}");
                for j in 0..m {
                    ensure!(table[i][j] == table[j][i], "not symmetric at ({i}, {j})");
                    for l in 0..m {
                        ensure!(!(table[i][j] && table[j][l]) || table[i][l], "not transitive at ({i}, {j}, {l})");
                    }
                }
            }
            Ok(None)
        }),
        tally(law::VERTICAL_COMPOSITION, 4, &items, id, |(w, kit)| {
            let k = kit.as_ref().map_err(Clone::clone)?;
            let c = &k.normal[LEFT];
            let ci = &k.normal[LEFT_REVERSED];
            let unit_f = identity_two_cell(&k.f).map_err(err("identity cell"))?;
            let unit_top = identity_two_cell(&c.top).map_err(err("identity cell"))?;
            ensure!(vertical(c, &unit_f)?.same_nu(c), "right unit law fails");
            ensure!(vertical(&unit_top, c)?.same_nu(c), "left unit law fails");
            ensure!(vertical(c, ci)?.same_nu(&unit_top), "reversed cell is not an inverse");
            let lhs = vertical(&vertical(c, ci)?, c)?;
            let rhs = vertical(c, &vertical(ci, c)?)?;
            ensure!(lhs.same_nu(&rhs), "associativity fails");
            let cells = central_cells(&w.phi.source)?;
            let g = &w.phi.source.group;
            for c1 in cells.iter().take(3) {
                for c2 in cells.iter().take(3) {
                    let v = vertical(c1, c2)?;
                    for (o, &a) in v.nu.components.iter().enumerate() {
                        let (z1, _) = w.phi.source.split(c1.nu.components[o]);
                        let (z2, x) = w.phi.source.split(c2.nu.components[o]);
                        ensure!(a == w.phi.source.arrow(g.mul(z2, z1), x), "composite is not pointwise");
                    }
                    for c3 in cells.iter().take(3) {
                        let lhs = vertical(&vertical(c1, c2)?, c3)?;
                        let rhs = vertical(c1, &vertical(c2, c3)?)?;
                        ensure!(lhs.same_nu(&rhs), "associativity fails on central cells");
                    }
                }
            }
            Ok(None)
        }),
        tally(law::PERTURBATION, 4, &items, id, |(_, kit)| {
            let k = kit.as_ref().map_err(Clone::clone)?;
            for (d, n) in k.diagrams.iter().zip(&k.normal).take(3) {
                let moved = perturb(d, &doubling(&d.mediator)).map_err(err("perturb"))?;
                ensure!(normalize(&moved)?.same_nu(n), "perturbed diagram normalizes differently");
            }
            Ok(None)
        }),
    ]
}

fn spans(wes: &[GeneratedWe]) -> Vec<(String, EquivariantFunctor, EquivariantFunctor)> {
    let mut out = Vec::new();
    for w in wes {
        out.push((format!("{} | id", w.id), w.phi.clone(), EquivariantFunctor::identity(&w.phi.source)));
        out.push((format!("{} | self", w.id), w.phi.clone(), w.phi.clone()));
        out.push((format!("{} | π", w.id), w.phi.clone(), w.pi.clone()));
    }
    out
}

fn span_of(phi: &EquivariantFunctor, psi: &EquivariantFunctor) -> std::result::Result<GeneralizedMorphism, String> {
    GeneralizedMorphism::new(phi.functor.clone(), psi.functor.clone()).map_err(err("span"))
}

fn validates(d: &TwoCellDiagram, what: &str) -> std::result::Result<(), String> {
    let r = validate_two_cell(d).map_err(err("validate"))?;
    ensure!(r.ok, "{what}: {r}");
    Ok(())
}

pub fn law_localization(wes: &[GeneratedWe]) -> Vec<LawResult> {
    let sp = spans(wes);
    let id = |s: &(String, EquivariantFunctor, EquivariantFunctor)| s.0.clone();
    vec![
        tally(law::ANAFUNCTORIFY, 5, &sp, id, |(_, phi, psi)| {
            let (_, witness) = anafunctorify(&span_of(phi, psi)?).map_err(err("anafunctorify"))?;
            validates(&witness, "witness")?;
            Ok(None)
        }),
        tally(law::EQUIVARIANT_ANAFUNCTORIFY, 5, &sp, id, |(_, phi, psi)| {
            let out = equivariant_anafunctorify(&span_of(phi, psi)?, &phi.target, &psi.target)
                .map_err(err("equivariant anafunctorify"))?;
            validates(&out.witness, "witness")?;
            Ok(out.effective_divergence.map(|w| format!("middle not effective ({w}) although both feet are")))
        }),
        tally(law::STRICTIFY, 5, &sp, id, |(_, phi, psi)| {
            let f = span_of(phi, psi)?;
            let c = &psi.target;
            let to_point = Anafunctor::new(Functor::identity(&c.groupoid), collapse(c).functor).map_err(err("anafunctor"))?;
            for g in [identity_anafunctor(&c.groupoid), to_point] {
                let d = strictify_composition(&f, &g).map_err(err("strictify"))?;
                validates(&d, "strictified diagram")?;
            }
            Ok(None)
        }),
    ]
}

/// Skeleton and free/transitive verdicts must agree across `φ`; a change in
/// effectiveness is reported as an expected divergence.
pub fn invariance_check(phi: &EquivariantFunctor) -> Check {
    let (ra, rb) = (full_property_report(&phi.source), full_property_report(&phi.target));
    for p in [Property::Free, Property::Transitive] {
        ensure!(ra.holds(p) == rb.holds(p), "{p} differs across the weak equivalence");
    }
    let (ea, eb) = (ra.holds(Property::Effective), rb.holds(Property::Effective));
    Ok((ea != eb).then(|| format!("effective {} → {}", ea == Some(true), eb == Some(true))))
}

pub fn law_invariance(wes: &[GeneratedWe]) -> Vec<LawResult> {
    let id = |w: &GeneratedWe| w.id.clone();
    vec![
        tally(law::SKELETON_INVARIANCE, 6, wes, id, |w| {
            let (a, b) = (skeleton_invariant(&w.phi.source.groupoid), skeleton_invariant(&w.phi.target.groupoid));
            ensure!(a.morita_equivalent(&b), "skeletons differ");
            Ok(None)
        }),
        tally(law::PROPERTY_INVARIANCE, 6, wes, id, |w| invariance_check(&w.phi)),
    ]
}

/// Every law over the instances generated from `budget`, in a fixed order.
pub fn run_law_suite(budget: &InstanceBudget) -> SuiteReport {
    let actions = enumerate_actions(budget);
    let wes = generate_weak_equivalences(budget);
    let pairs = composable_pairs(&wes, budget);
    let mut laws = vec![law_groupoid_axioms(budget, &actions), law_generator_soundness(&wes), law_klein_golden()];
    laws.push(law_decomposition(&wes));
    laws.push(law_two_out_of_three(&wes, &pairs));
    laws.extend(law_pullbacks(&wes));
    laws.extend(law_two_cells(&wes));
    laws.extend(law_localization(&wes));
    laws.extend(law_invariance(&wes));
    SuiteReport { budget: budget.clone(), actions: actions.len(), weak_equivalences: wes.len(), laws }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> InstanceBudget {
        InstanceBudget { max_group_order: 2, max_carrier_size: 2, max_objects: 4, ..InstanceBudget::default() }
    }

    #[test]
    fn tiny_suite_passes() {
        let r = run_law_suite(&tiny());
        for l in &r.laws {
            assert!(l.passed(), "{}: {:?}", l.law, l.witness);
        }
    }

    #[test]
    fn corrupted_composition_is_caught_and_shrunk() {
        let b = InstanceBudget { corrupt_composition: true, ..tiny() };
        let r = law_groupoid_axioms(&b, &enumerate_actions(&b));
        assert!(r.failures > 0);
        assert!(r.witness.unwrap().contains("shrunk to"));
    }

    #[test]
    fn klein_projection_is_an_expected_divergence() {
        let pi = crate::workbench::klein::klein_projection().unwrap();
        let note = invariance_check(&pi).unwrap();
        assert_eq!(note.as_deref(), Some("effective true → false"));
    }
}
