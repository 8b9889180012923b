use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use morita_core::equivariant::EquivariantFunctor;
use morita_core::localization::{GeneralizedMorphism, TwoCellDiagram};
use morita_core::workbench::InstanceBudget;
use morita_core::{
    action_groupoid, ActionGroupoid, FiniteGroup, FiniteGroupoid, Functor, NaturalTransformation, RawGroupoid,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Groupoid(RawGroupoid),
    ActionGroupoid(ActionDoc),
    Functor(FunctorDoc),
    Span(SpanDoc),
    TwoCellDiagram(DiagramDoc),
    SuiteConfig(InstanceBudget),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::ActionGroupoid(_) => "action_groupoid",
            Document::Functor(_) => "functor",
            Document::Span(_) => "span",
            Document::TwoCellDiagram(_) => "two_cell_diagram",
            Document::SuiteConfig(_) => "suite_config",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub elements: Vec<String>,
    /// Row `a` lists `a·b` for every `b`, in `elements` order.
    pub mul: Vec<Vec<String>>,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: GroupDoc,
    pub set: Vec<String>,
    /// Entries `[g, x, g·x]`.
    pub action: Vec<[String; 3]>,
}

/// `dom` and `cod` name groupoid or action-groupoid documents of the bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub dom: String,
    pub cod: String,
    pub obj_map: BTreeMap<String, String>,
    pub arr_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<EquivariantDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantDoc {
    pub group_hom: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDoc {
    pub left: FunctorDoc,
    pub right: FunctorDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatDoc {
    /// Mediator object id to arrow id.
    pub components: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub top: SpanDoc,
    pub bottom: SpanDoc,
    pub mediator: String,
    pub alpha: FunctorDoc,
    pub alpha_prime: FunctorDoc,
    pub eta1: NatDoc,
    pub eta2: NatDoc,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub documents: BTreeMap<String, Document>,
}

/// Accepts a bundle or a single document, which is named `main`.
pub fn parse(bytes: &[u8]) -> Result<Bundle, CliError> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(CliError::parse)?;
    if value.get("kind").is_some() {
        let doc: Document = serde_json::from_value(value).map_err(CliError::schema)?;
        return Ok(Bundle { documents: BTreeMap::from([("main".to_string(), doc)]) });
    }
    // Re-parse from bytes so schema errors keep their positions.
    serde_json::from_slice(bytes).map_err(CliError::schema)
}

/// Canonical form: sorted keys, two-space indentation, trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> Vec<u8> {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut out = serde_json::to_vec_pretty(&v).expect("values serialize");
    out.push(b'\n');
    out
}

pub fn serialize(bundle: &Bundle) -> Vec<u8> {
    to_canonical(bundle)
}

#[derive(Debug, Clone)]
pub enum Resolved {
    Plain(Arc<FiniteGroupoid>),
    Action(Arc<ActionGroupoid>),
}

impl Resolved {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        match self {
            Resolved::Plain(g) => g,
            Resolved::Action(a) => &a.groupoid,
        }
    }
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<FiniteGroup, CliError> {
    FiniteGroup::from_ids(doc.elements.clone(), &doc.mul, &doc.unit).map_err(|e| CliError::Schema(format!("group: {e}")))
}

pub fn action_from_doc(doc: &ActionDoc) -> Result<ActionGroupoid, CliError> {
    let group = Arc::new(group_from_doc(&doc.group)?);
    let m = doc.set.len();
    let point: HashMap<&str, usize> = doc.set.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let mut act = vec![usize::MAX; group.order() * m];
    for [g, x, gx] in &doc.action {
        let look = |id: &str| point.get(id).copied().ok_or_else(|| CliError::Schema(format!("action: unknown point {id}")));
        let gi = group.index_of(g).ok_or_else(|| CliError::Schema(format!("action: unknown element {g}")))?;
        let slot = &mut act[gi * m + look(x)?];
        if *slot != usize::MAX {
            return Err(CliError::Schema(format!("action: ({g}, {x}) listed twice")));
        }
        *slot = look(gx)?;
    }
    if act.contains(&usize::MAX) {
        return Err(CliError::Schema("action: table does not cover every (g, x)".into()));
    }
    action_groupoid(group, doc.set.clone(), act).map_err(CliError::from)
}

pub fn action_to_doc(a: &ActionGroupoid) -> ActionDoc {
    ActionDoc {
        group: GroupDoc {
            elements: a.group.elements().to_vec(),
            mul: a.group.table_ids(),
            unit: a.group.element_id(a.group.unit()).to_string(),
        },
        set: a.carrier.clone(),
        action: a.action_triples(),
    }
}

/// Resolves names of a bundle to shared runtime values.
pub struct Workspace<'a> {
    pub bundle: &'a Bundle,
    cache: std::cell::RefCell<HashMap<String, Resolved>>,
}

impl<'a> Workspace<'a> {
    pub fn new(bundle: &'a Bundle) -> Self {
        Workspace { bundle, cache: Default::default() }
    }

    pub fn document(&self, name: &str) -> Result<&'a Document, CliError> {
        self.bundle.documents.get(name).ok_or_else(|| CliError::Input(format!("no document named {name:?}")))
    }

    pub fn groupoid(&self, name: &str) -> Result<Resolved, CliError> {
        if let Some(r) = self.cache.borrow().get(name) {
            return Ok(r.clone());
        }
        let resolved = match self.document(name)? {
            Document::Groupoid(raw) => Resolved::Plain(Arc::new(FiniteGroupoid::from_raw(raw)?)),
            Document::ActionGroupoid(doc) => Resolved::Action(Arc::new(action_from_doc(doc)?)),
            other => return Err(CliError::Input(format!("{name:?} is a {}, not a groupoid", other.kind()))),
        };
        self.cache.borrow_mut().insert(name.to_string(), resolved.clone());
        Ok(resolved)
    }

    pub fn action(&self, name: &str) -> Result<Arc<ActionGroupoid>, CliError> {
        match self.groupoid(name)? {
            Resolved::Action(a) => Ok(a),
            Resolved::Plain(_) => Err(CliError::Input(format!("{name:?} is not an action groupoid"))),
        }
    }

    pub fn functor(&self, doc: &FunctorDoc) -> Result<Functor, CliError> {
        let dom = self.groupoid(&doc.dom)?.groupoid().clone();
        let cod = self.groupoid(&doc.cod)?.groupoid().clone();
        let obj_map = (0..dom.object_count())
            .map(|x| {
                let id = dom.object_id(x);
                let y = doc.obj_map.get(id).ok_or_else(|| CliError::Schema(format!("obj_map: missing {id}")))?;
                cod.object_by_id(y).ok_or_else(|| CliError::Schema(format!("obj_map: unknown object {y}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arr_map = (0..dom.arrow_count())
            .map(|a| {
                let id = dom.arrow_id(a);
                let b = doc.arr_map.get(id).ok_or_else(|| CliError::Schema(format!("arr_map: missing {id}")))?;
                cod.arrow_by_id(b).ok_or_else(|| CliError::Schema(format!("arr_map: unknown arrow {b}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Functor::new(dom, cod, obj_map, arr_map)?)
    }

    pub fn functor_named(&self, name: &str) -> Result<(Functor, &'a FunctorDoc), CliError> {
        match self.document(name)? {
            Document::Functor(doc) => Ok((self.functor(doc)?, doc)),
            other => Err(CliError::Input(format!("{name:?} is a {}, not a functor", other.kind()))),
        }
    }

    /// The functor as an equivariant one; both ends must be action groupoids.
    pub fn equivariant(&self, name: &str) -> Result<EquivariantFunctor, CliError> {
        let (f, doc) = self.functor_named(name)?;
        let (a, b) = (self.action(&doc.dom)?, self.action(&doc.cod)?);
        let e = morita_core::equivariant::as_equivariant(&f, &a, &b)?;
        if let Some(eq) = &doc.equivariant {
            for (g, h) in &eq.group_hom {
                let gi = a.group.index_of(g).ok_or_else(|| CliError::Schema(format!("group_hom: unknown {g}")))?;
                if b.group.element_id(e.group_hom[gi]) != h {
                    return Err(CliError::Input(format!("group_hom disagrees with the arrow map at {g}")));
                }
            }
        }
        Ok(e)
    }

    pub fn span(&self, doc: &SpanDoc) -> Result<GeneralizedMorphism, CliError> {
        Ok(GeneralizedMorphism::new(self.functor(&doc.left)?, self.functor(&doc.right)?)?)
    }

    pub fn span_named(&self, name: &str) -> Result<(GeneralizedMorphism, &'a SpanDoc), CliError> {
        match self.document(name)? {
            Document::Span(doc) => Ok((self.span(doc)?, doc)),
            other => Err(CliError::Input(format!("{name:?} is a {}, not a span", other.kind()))),
        }
    }

    pub fn diagram(&self, doc: &DiagramDoc) -> Result<TwoCellDiagram, CliError> {
        let top = self.span(&doc.top)?;
        let bottom = self.span(&doc.bottom)?;
        let mediator = self.groupoid(&doc.mediator)?.groupoid().clone();
        let alpha = self.functor(&doc.alpha)?;
        let alpha_prime = self.functor(&doc.alpha_prime)?;
        let nat = |source: Functor, target: Functor, d: &NatDoc, field: &str| -> Result<NaturalTransformation, CliError> {
            let cod = source.cod.clone();
            let components = (0..mediator.object_count())
                .map(|x| {
                    let id = mediator.object_id(x);
                    let a = d.components.get(id).ok_or_else(|| CliError::Schema(format!("{field}: missing {id}")))?;
                    cod.arrow_by_id(a).ok_or_else(|| CliError::Schema(format!("{field}: unknown arrow {a}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NaturalTransformation::new(source, target, components)?)
        };
        let compose = morita_core::compose_functors;
        let eta1 = nat(compose(&top.left, &alpha)?, compose(&bottom.left, &alpha_prime)?, &doc.eta1, "eta1")?;
        let eta2 = nat(compose(&top.right, &alpha)?, compose(&bottom.right, &alpha_prime)?, &doc.eta2, "eta2")?;
        Ok(TwoCellDiagram { top, bottom, mediator, alpha, alpha_prime, eta1, eta2 })
    }

    pub fn diagram_named(&self, name: &str) -> Result<TwoCellDiagram, CliError> {
        match self.document(name)? {
            Document::TwoCellDiagram(doc) => self.diagram(doc),
            other => Err(CliError::Input(format!("{name:?} is a {}, not a two_cell_diagram", other.kind()))),
        }
    }
}

/// Collects output documents, naming every groupoid a functor touches.
#[derive(Default)]
pub struct Exporter {
    pub documents: BTreeMap<String, Document>,
    names: Vec<(Arc<FiniteGroupoid>, String)>,
}

impl Exporter {
    /// Copies input documents and registers their groupoids under their names.
    pub fn with_inputs(ws: &Workspace, names: &[&str]) -> Result<Exporter, CliError> {
        let mut ex = Exporter::default();
        for &name in names {
            ex.copy_with_dependencies(ws, name)?;
        }
        Ok(ex)
    }

    fn copy_with_dependencies(&mut self, ws: &Workspace, name: &str) -> Result<(), CliError> {
        if self.documents.contains_key(name) {
            return Ok(());
        }
        let doc = ws.document(name)?;
        self.documents.insert(name.to_string(), doc.clone());
        let mut refs: Vec<&str> = Vec::new();
        fn functor_refs<'d>(f: &'d FunctorDoc, refs: &mut Vec<&'d str>) {
            refs.push(&f.dom);
            refs.push(&f.cod);
        }
        match doc {
            Document::Groupoid(_) | Document::ActionGroupoid(_) => {
                let g = ws.groupoid(name)?.groupoid().clone();
                self.names.push((g, name.to_string()));
            }
            Document::Functor(f) => functor_refs(f, &mut refs),
            Document::Span(s) => {
                functor_refs(&s.left, &mut refs);
                functor_refs(&s.right, &mut refs);
            }
            Document::TwoCellDiagram(d) => {
                for f in [&d.top.left, &d.top.right, &d.bottom.left, &d.bottom.right, &d.alpha, &d.alpha_prime] {
                    functor_refs(f, &mut refs);
                }
                refs.push(&d.mediator);
            }
            Document::SuiteConfig(_) => {}
        }
        for r in refs {
            self.copy_with_dependencies(ws, r)?;
        }
        Ok(())
    }

    fn fresh(&self, suggested: &str) -> String {
        if !self.documents.contains_key(suggested) {
            return suggested.to_string();
        }
        (2..).map(|i| format!("{suggested}_{i}")).find(|n| !self.documents.contains_key(n)).unwrap()
    }

    fn lookup(&self, g: &Arc<FiniteGroupoid>) -> Option<String> {
        self.names.iter().find(|(h, _)| Arc::ptr_eq(h, g)).or_else(|| self.names.iter().find(|(h, _)| h == g)).map(|p| p.1.clone())
    }

    pub fn groupoid(&mut self, g: &Arc<FiniteGroupoid>, suggested: &str) -> String {
        if let Some(n) = self.lookup(g) {
            return n;
        }
        let name = self.fresh(suggested);
        self.documents.insert(name.clone(), Document::Groupoid(g.to_raw()));
        self.names.push((g.clone(), name.clone()));
        name
    }

    pub fn action(&mut self, a: &ActionGroupoid, suggested: &str) -> String {
        if let Some(n) = self.lookup(&a.groupoid) {
            return n;
        }
        let name = self.fresh(suggested);
        self.documents.insert(name.clone(), Document::ActionGroupoid(action_to_doc(a)));
        self.names.push((a.groupoid.clone(), name.clone()));
        name
    }

    pub fn functor_doc(&mut self, f: &Functor, hint: &str) -> FunctorDoc {
        let dom = self.groupoid(&f.dom, &format!("{hint}.dom"));
        let cod = self.groupoid(&f.cod, &format!("{hint}.cod"));
        FunctorDoc {
            dom,
            cod,
            obj_map: (0..f.dom.object_count())
                .map(|x| (f.dom.object_id(x).to_string(), f.cod.object_id(f.obj(x)).to_string()))
                .collect(),
            arr_map: (0..f.dom.arrow_count())
                .map(|a| (f.dom.arrow_id(a).to_string(), f.cod.arrow_id(f.arr(a)).to_string()))
                .collect(),
            equivariant: None,
        }
    }

    pub fn equivariant_doc(&mut self, f: &EquivariantFunctor, hint: &str) -> FunctorDoc {
        self.action(&f.source, &format!("{hint}.dom"));
        self.action(&f.target, &format!("{hint}.cod"));
        let mut doc = self.functor_doc(&f.functor, hint);
        doc.equivariant = Some(EquivariantDoc {
            group_hom: f
                .group_hom
                .iter()
                .enumerate()
                .map(|(g, &h)| (f.source.group.element_id(g).to_string(), f.target.group.element_id(h).to_string()))
                .collect(),
        });
        doc
    }

    pub fn span_doc(&mut self, s: &GeneralizedMorphism, hint: &str) -> SpanDoc {
        SpanDoc { left: self.functor_doc(&s.left, &format!("{hint}.left")), right: self.functor_doc(&s.right, &format!("{hint}.right")) }
    }

    pub fn diagram_doc(&mut self, d: &TwoCellDiagram, hint: &str) -> DiagramDoc {
        let nat = |t: &NaturalTransformation| NatDoc {
            components: (0..d.mediator.object_count())
                .map(|x| (d.mediator.object_id(x).to_string(), t.source.cod.arrow_id(t.component(x)).to_string()))
                .collect(),
        };
        DiagramDoc {
            top: self.span_doc(&d.top, &format!("{hint}.top")),
            bottom: self.span_doc(&d.bottom, &format!("{hint}.bottom")),
            mediator: self.groupoid(&d.mediator, &format!("{hint}.mediator")),
            alpha: self.functor_doc(&d.alpha, &format!("{hint}.alpha")),
            alpha_prime: self.functor_doc(&d.alpha_prime, &format!("{hint}.alpha_prime")),
            eta1: nat(&d.eta1),
            eta2: nat(&d.eta2),
        }
    }

    pub fn insert(&mut self, name: &str, doc: Document) -> String {
        let name = self.fresh(name);
        self.documents.insert(name.clone(), doc);
        name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_inverse_names_the_field() {
        let text = br#"{"kind":"groupoid","objects":[],"arrows":[],"compose":[],"identity":{}}"#;
        let err = parse(text).unwrap_err();
        assert!(err.to_string().contains("inverse"), "{err}");
    }

    #[test]
    fn empty_groupoid_parses() {
        let text = br#"{"kind":"groupoid","objects":[],"arrows":[],"compose":[],"identity":{},"inverse":{}}"#;
        let b = parse(text).unwrap();
        let ws = Workspace::new(&b);
        assert!(ws.groupoid("main").unwrap().groupoid().is_empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse(b"{\n  \"documents\": [\n").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
