use crate::error::{Error, Result};
use crate::groupoid::functor::{compose_unchecked, Functor};
use crate::groupoid::{Arr, Obj};
use crate::report::ValidationReport;

pub mod axiom {
    pub const ENDPOINTS: &str = "endpoints";
    pub const NATURALITY: &str = "naturality";
}

/// A transformation `source ⇒ target` between parallel functors.
#[derive(Clone, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<Arr>,
}

impl std::fmt::Debug for NaturalTransformation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NaturalTransformation").field("components", &self.components).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `F η`: components `z ↦ F(η(z))`.
    Left,
    /// `η F`: components `z ↦ η(F(z))`.
    Right,
}

impl NaturalTransformation {
    pub fn new(source: Functor, target: Functor, components: Vec<Arr>) -> Result<Self> {
        if !source.parallel(&target) {
            return Err(Error::mismatch("source and target functors are not parallel"));
        }
        if components.len() != source.dom.object_count() || components.iter().any(|&c| c >= source.cod.arrow_count())
        {
            return Err(Error::mismatch("components do not match the domain"));
        }
        Ok(NaturalTransformation { source, target, components })
    }

    pub fn identity(f: &Functor) -> Self {
        let components = f.obj_map.iter().map(|&y| f.cod.unit(y)).collect();
        NaturalTransformation { source: f.clone(), target: f.clone(), components }
    }

    pub fn component(&self, z: Obj) -> Arr {
        self.components[z]
    }

    pub fn inverse(&self) -> Self {
        let cod = &self.source.cod;
        NaturalTransformation {
            source: self.target.clone(),
            target: self.source.clone(),
            components: self.components.iter().map(|&c| cod.inverse(c)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.components.iter().all(|&c| self.source.cod.is_unit(c))
    }
}

pub fn validate_nat_trans(eta: &NaturalTransformation) -> ValidationReport {
    use axiom::*;

    let (f, g) = (&eta.source, &eta.target);
    let (k, h) = (&*f.dom, &*f.cod);
    let mut report = ValidationReport::new();
    for z in 0..k.object_count() {
        let c = eta.component(z);
        if h.src(c) != f.obj(z) || h.tgt(c) != g.obj(z) {
            report.push(ENDPOINTS, format!("component at {} is {}", k.object_id(z), h.arrow_id(c)));
        }
    }
    if !report.ok {
        return report;
    }
    for a in 0..k.arrow_count() {
        let (z, w) = (k.src(a), k.tgt(a));
        let lhs = h.compose(eta.component(w), f.arr(a));
        let rhs = h.compose(g.arr(a), eta.component(z));
        if lhs.is_none() || lhs != rhs {
            report.push(NATURALITY, format!("square at arrow {}", k.arrow_id(a)));
        }
    }
    report
}

/// Whiskers `eta` by `f` on the given side.
pub fn whisker(eta: &NaturalTransformation, f: &Functor, side: Side) -> Result<NaturalTransformation> {
    match side {
        Side::Left => {
            if eta.source.cod != f.dom {
                return Err(Error::mismatch("functor does not start where the transformation lands"));
            }
        }
        Side::Right => {
            if f.cod != eta.source.dom {
                return Err(Error::mismatch("functor does not land where the transformation starts"));
            }
        }
    }
    Ok(whisker_unchecked(eta, f, side))
}

pub(crate) fn whisker_unchecked(eta: &NaturalTransformation, f: &Functor, side: Side) -> NaturalTransformation {
    match side {
        Side::Left => NaturalTransformation {
            source: compose_unchecked(f, &eta.source),
            target: compose_unchecked(f, &eta.target),
            components: eta.components.iter().map(|&c| f.arr(c)).collect(),
        },
        Side::Right => NaturalTransformation {
            source: compose_unchecked(&eta.source, f),
            target: compose_unchecked(&eta.target, f),
            components: f.obj_map.iter().map(|&z| eta.component(z)).collect(),
        },
    }
}

/// `eta2 ∘ eta1`, componentwise.
pub fn vertical_compose_nat(eta2: &NaturalTransformation, eta1: &NaturalTransformation) -> Result<NaturalTransformation> {
    if eta1.target != eta2.source {
        return Err(Error::mismatch("target of the first transformation is not the source of the second"));
    }
    Ok(vertical_unchecked(eta2, eta1))
}

pub(crate) fn vertical_unchecked(eta2: &NaturalTransformation, eta1: &NaturalTransformation) -> NaturalTransformation {
    let h = &eta1.source.cod;
    let components = eta1
        .components
        .iter()
        .zip(&eta2.components)
        .map(|(&c1, &c2)| h.compose(c2, c1).expect("components compose"))
        .collect();
    NaturalTransformation { source: eta1.source.clone(), target: eta2.target.clone(), components }
}
