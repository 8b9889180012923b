use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::functor::{compose_unchecked, Functor};
use crate::groupoid::natural::{validate_nat_trans, whisker_unchecked, NaturalTransformation, Side};
use crate::groupoid::FiniteGroupoid;
use crate::localization::span::{Anafunctor, GeneralizedMorphism};
use crate::morita::equivalence::{weak_equivalence_report, FfInverse};
use crate::morita::pullback::{strict_pullback, StrictPullback};
use crate::report::ValidationReport;

pub mod obligation {
    pub const PARALLEL: &str = "parallel spans";
    pub const ALPHA_SHAPE: &str = "alpha shape";
    pub const ALPHA_PRIME_SHAPE: &str = "alpha_prime shape";
    pub const ALPHA_WE: &str = "alpha weak equivalence";
    pub const ALPHA_PRIME_WE: &str = "alpha_prime weak equivalence";
    pub const ETA1_FUNCTORS: &str = "eta1 functors";
    pub const ETA2_FUNCTORS: &str = "eta2 functors";
    pub const ETA1_NATURAL: &str = "eta1 natural";
    pub const ETA2_NATURAL: &str = "eta2 natural";
}

/// One representative `(L, α, α', η1, η2)` of a 2-cell between parallel
/// generalized morphisms `top = (φ, ψ)` and `bottom = (φ', ψ')`, with
/// `η1: φα ⇒ φ'α'` and `η2: ψα ⇒ ψ'α'`.
#[derive(Clone, Debug)]
pub struct TwoCellDiagram {
    pub top: GeneralizedMorphism,
    pub bottom: GeneralizedMorphism,
    pub mediator: Arc<FiniteGroupoid>,
    pub alpha: Functor,
    pub alpha_prime: Functor,
    pub eta1: NaturalTransformation,
    pub eta2: NaturalTransformation,
}

/// A 2-cell between anafunctors in normal form: a single transformation
/// `ν: ψ∘pr1 ⇒ ψ'∘pr2` over `K ×_{φ,φ'} K'`.
#[derive(Clone, Debug)]
pub struct AnaTwoCell {
    pub top: Anafunctor,
    pub bottom: Anafunctor,
    pub pullback: StrictPullback,
    pub nu: NaturalTransformation,
}

impl AnaTwoCell {
    /// Builds a 2-cell from components over the strict pullback of the left legs.
    pub fn new(top: Anafunctor, bottom: Anafunctor, components: Vec<usize>) -> Result<AnaTwoCell> {
        if !top.parallel(&bottom) {
            return Err(Error::mismatch("anafunctors are not parallel"));
        }
        let pullback = strict_pullback(&top.left, &bottom.left)?;
        let nu = NaturalTransformation::new(
            compose_unchecked(&top.right, &pullback.pr1),
            compose_unchecked(&bottom.right, &pullback.pr2),
            components,
        )?;
        let cell = AnaTwoCell { top, bottom, pullback, nu };
        let report = validate_ana_two_cell(&cell);
        if !report.ok {
            return Err(Error::Invalid { what: "ana 2-cell".into(), report });
        }
        Ok(cell)
    }

    pub fn same_nu(&self, other: &AnaTwoCell) -> bool {
        self.nu.components == other.nu.components
    }
}

pub fn validate_ana_two_cell(c: &AnaTwoCell) -> ValidationReport {
    let mut report = ValidationReport::new();
    if c.nu.source != compose_unchecked(&c.top.right, &c.pullback.pr1)
        || c.nu.target != compose_unchecked(&c.bottom.right, &c.pullback.pr2)
    {
        report.push("nu functors", "ν does not run from ψ∘pr1 to ψ'∘pr2");
        return report;
    }
    if compose_unchecked(&c.top.left, &c.pullback.pr1).arr_map
        != compose_unchecked(&c.bottom.left, &c.pullback.pr2).arr_map
    {
        report.push("left triangle", "φ∘pr1 and φ'∘pr2 differ");
    }
    report.merge(validate_nat_trans(&c.nu));
    report
}

/// Checks every obligation of a 2-cell diagram. Only a structural
/// mismatch of the endpoints is an error.
pub fn validate_two_cell(d: &TwoCellDiagram) -> Result<ValidationReport> {
    use obligation::*;

    if !d.top.parallel(&d.bottom) {
        return Err(Error::mismatch("top and bottom spans are not parallel"));
    }
    let mut report = ValidationReport::new();
    let mut shapes_ok = true;
    if d.alpha.dom != d.mediator || d.alpha.cod != *d.top.middle() {
        report.push(ALPHA_SHAPE, "α must run from the mediator to the top middle");
        shapes_ok = false;
    }
    if d.alpha_prime.dom != d.mediator || d.alpha_prime.cod != *d.bottom.middle() {
        report.push(ALPHA_PRIME_SHAPE, "α' must run from the mediator to the bottom middle");
        shapes_ok = false;
    }
    if !shapes_ok {
        return Ok(report);
    }
    for (f, name) in [(&d.alpha, ALPHA_WE), (&d.alpha_prime, ALPHA_PRIME_WE)] {
        let fr = crate::groupoid::functor::validate_functor(f);
        if !fr.ok {
            report.push(name, format!("not a functor: {fr}"));
            continue;
        }
        let we = weak_equivalence_report(f);
        if !we.is_weak_equivalence() {
            report.push(name, we.es_witness.or(we.ff_witness).unwrap_or_default());
        }
    }
    let legs = [
        (&d.eta1, &d.top.left, &d.bottom.left, ETA1_FUNCTORS, ETA1_NATURAL),
        (&d.eta2, &d.top.right, &d.bottom.right, ETA2_FUNCTORS, ETA2_NATURAL),
    ];
    for (eta, upper, lower, functors, natural) in legs {
        if eta.source != compose_unchecked(upper, &d.alpha) || eta.target != compose_unchecked(lower, &d.alpha_prime)
        {
            report.push(functors, "transformation does not connect the composite legs");
            continue;
        }
        let nr = validate_nat_trans(eta);
        if let Some(v) = nr.first() {
            report.push(natural, format!("{}: {}", v.axiom, v.witness));
        }
    }
    Ok(report)
}

fn checked(eta: NaturalTransformation, step: &str) -> Result<NaturalTransformation> {
    let report = validate_nat_trans(&eta);
    if !report.ok {
        return Err(Error::obligation(step, report.to_string()));
    }
    Ok(eta)
}

/// The normal form of a diagram between anafunctors.
///
/// With `P = K ×_{φ,φ'} K'` and `L̃ = P ×ʷ_{pr1,α} L`, at each object
/// `(p, k, l)` of `L̃` the lift `μ` of `η1(l)∘φ(k)` through `φ'` gives
/// `(ψ'μ⁻¹)∘η2(l)∘ψ(k)`, which must agree across the fiber over `p`.
/// Only the objects of `L̃` are visited.
pub fn normalize_two_cell(d: &TwoCellDiagram) -> Result<AnaTwoCell> {
    let report = validate_two_cell(d)?;
    if !report.ok {
        return Err(Error::Invalid { what: "2-cell diagram".into(), report });
    }
    let top = Anafunctor::from_generalized(d.top.clone())?;
    let bottom = Anafunctor::from_generalized(d.bottom.clone())?;
    let (phi, psi) = (&top.left, &top.right);
    let (phi_p, psi_p) = (&bottom.left, &bottom.right);
    let k = &phi.dom;
    let (x, y) = (&phi.cod, &psi.cod);

    let p = strict_pullback(phi, phi_p)?;
    let inv = FfInverse::new(phi_p)?;
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); k.object_count()];
    for l in 0..d.mediator.object_count() {
        over[d.alpha.obj(l)].push(l);
    }
    let mut components = Vec::with_capacity(p.apex.object_count());
    for o in 0..p.apex.object_count() {
        let (y1, y2) = p.object_parts(o);
        let mut found: Option<usize> = None;
        for &c in k.out_arrows(y1) {
            for &l in &over[k.tgt(c)] {
                let lifted = x.compose(d.eta1.component(l), phi.arr(c)).expect("composable");
                let mu = inv
                    .lift(y2, d.alpha_prime.obj(l), lifted)
                    .ok_or_else(|| Error::obligation("fully faithful lift", format!("no arrow over {}", x.arrow_id(lifted))))?;
                let value = y
                    .compose_all(&[y.inverse(psi_p.arr(mu)), d.eta2.component(l), psi.arr(c)])
                    .expect("composable");
                match found {
                    None => found = Some(value),
                    Some(prev) if prev != value => {
                        return Err(Error::FiberDisagreement {
                            object: p.apex.object_id(o).to_string(),
                            detail: format!("{} vs {}", y.arrow_id(prev), y.arrow_id(value)),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        components.push(found.ok_or_else(|| {
            Error::precondition(format!("empty fiber over {}", p.apex.object_id(o)))
        })?);
    }
    let nu = checked(
        NaturalTransformation {
            source: compose_unchecked(psi, &p.pr1),
            target: compose_unchecked(psi_p, &p.pr2),
            components,
        },
        "ν",
    )?;
    Ok(AnaTwoCell { top, bottom, pullback: p, nu })
}

/// Decides equality of the 2-cells represented by two diagrams between the
/// same pair of anafunctors.
pub fn two_cells_equal(d1: &TwoCellDiagram, d2: &TwoCellDiagram) -> Result<bool> {
    if d1.top != d2.top || d1.bottom != d2.bottom {
        return Err(Error::mismatch("diagrams are not between the same pair of anafunctors"));
    }
    Ok(normalize_two_cell(d1)?.same_nu(&normalize_two_cell(d2)?))
}

/// `ι(y1, y2) = ψ(Ff(φ)⁻¹(y1, y2, u_{φ(y1)}))`.
pub fn identity_two_cell(f: &Anafunctor) -> Result<AnaTwoCell> {
    let (phi, psi) = (&f.left, &f.right);
    let p = strict_pullback(phi, phi)?;
    let inv = FfInverse::new(phi)?;
    let mut components = Vec::with_capacity(p.apex.object_count());
    for o in 0..p.apex.object_count() {
        let (y1, y2) = p.object_parts(o);
        let lift = inv
            .lift(y1, y2, phi.cod.unit(phi.obj(y1)))
            .ok_or_else(|| Error::obligation("ι", "no arrow over the unit"))?;
        components.push(psi.arr(lift));
    }
    let nu = NaturalTransformation {
        source: compose_unchecked(psi, &p.pr1),
        target: compose_unchecked(psi, &p.pr2),
        components,
    };
    let cell = AnaTwoCell { top: f.clone(), bottom: f.clone(), pullback: p, nu };
    let report = validate_ana_two_cell(&cell);
    if !report.ok {
        return Err(Error::obligation("ι natural", report.to_string()));
    }
    Ok(cell)
}

/// `λ(y, y'') = ν2(y', y'')∘ν1(y, y')`, checked to be independent of the
/// middle `y'` on every fiber.
pub fn vertical_compose_ana(c1: &AnaTwoCell, c2: &AnaTwoCell) -> Result<AnaTwoCell> {
    if c1.bottom != c2.top {
        return Err(Error::mismatch("middle anafunctors differ"));
    }
    let (p12, p23) = (&c1.pullback, &c2.pullback);
    let p13 = strict_pullback(&c1.top.left, &c2.bottom.left)?;
    let y = &c1.top.right.cod;
    let mut after: Vec<Vec<usize>> = vec![Vec::new(); c2.top.left.dom.object_count()];
    for o in 0..p23.apex.object_count() {
        after[p23.object_parts(o).0].push(o);
    }
    let mut components: Vec<Option<usize>> = vec![None; p13.apex.object_count()];
    for o12 in 0..p12.apex.object_count() {
        let (y1, y2) = p12.object_parts(o12);
        for &o23 in &after[y2] {
            let y3 = p23.object_parts(o23).1;
            let o13 = p13.object(y1, y3).expect("outer pair lies in the pullback");
            let value = y.compose(c2.nu.component(o23), c1.nu.component(o12)).expect("components compose");
            match components[o13] {
                None => components[o13] = Some(value),
                Some(prev) if prev != value => {
                    return Err(Error::FiberDisagreement {
                        object: p13.apex.object_id(o13).to_string(),
                        detail: format!("{} vs {}", y.arrow_id(prev), y.arrow_id(value)),
                    });
                }
                Some(_) => {}
            }
        }
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(o, c)| c.ok_or_else(|| Error::precondition(format!("empty fiber over {}", p13.apex.object_id(o)))))
        .collect::<Result<Vec<_>>>()?;
    let lambda = checked(
        NaturalTransformation {
            source: compose_unchecked(&c1.top.right, &p13.pr1),
            target: compose_unchecked(&c2.bottom.right, &p13.pr2),
            components,
        },
        "λ",
    )?;
    Ok(AnaTwoCell { top: c1.top.clone(), bottom: c2.bottom.clone(), pullback: p13, nu: lambda })
}

/// Renders a normal form as a diagram with mediator `P`, legs the
/// projections and trivial `η1`.
pub fn embed(c: &AnaTwoCell) -> TwoCellDiagram {
    let p = &c.pullback;
    let source = compose_unchecked(&c.top.left, &p.pr1);
    let eta1 = NaturalTransformation {
        components: NaturalTransformation::identity(&source).components,
        source,
        target: compose_unchecked(&c.bottom.left, &p.pr2),
    };
    TwoCellDiagram {
        top: c.top.as_generalized().clone(),
        bottom: c.bottom.as_generalized().clone(),
        mediator: p.apex.clone(),
        alpha: p.pr1.clone(),
        alpha_prime: p.pr2.clone(),
        eta1,
        eta2: c.nu.clone(),
    }
}

/// Pre-composes the mediator of `d` with `e: L' → L`.
pub fn perturb(d: &TwoCellDiagram, e: &Functor) -> Result<TwoCellDiagram> {
    if e.cod != d.mediator {
        return Err(Error::mismatch("perturbation does not land in the mediator"));
    }
    Ok(TwoCellDiagram {
        top: d.top.clone(),
        bottom: d.bottom.clone(),
        mediator: e.dom.clone(),
        alpha: compose_unchecked(&d.alpha, e),
        alpha_prime: compose_unchecked(&d.alpha_prime, e),
        eta1: whisker_unchecked(&d.eta1, e, Side::Right),
        eta2: whisker_unchecked(&d.eta2, e, Side::Right),
    })
}

/// The same diagram read from `bottom` to `top`.
pub fn reverse(d: &TwoCellDiagram) -> TwoCellDiagram {
    TwoCellDiagram {
        top: d.bottom.clone(),
        bottom: d.top.clone(),
        mediator: d.mediator.clone(),
        alpha: d.alpha_prime.clone(),
        alpha_prime: d.alpha.clone(),
        eta1: d.eta1.inverse(),
        eta2: d.eta2.inverse(),
    }
}

/// The diagram with mediator `K`, both legs the identity and identity
/// transformations.
pub fn identity_diagram(f: &GeneralizedMorphism) -> TwoCellDiagram {
    let k = f.middle();
    let id = Functor::identity(k);
    TwoCellDiagram {
        top: f.clone(),
        bottom: f.clone(),
        mediator: k.clone(),
        alpha: id.clone(),
        alpha_prime: id.clone(),
        eta1: NaturalTransformation::identity(&compose_unchecked(&f.left, &id)),
        eta2: NaturalTransformation::identity(&compose_unchecked(&f.right, &id)),
    }
}
