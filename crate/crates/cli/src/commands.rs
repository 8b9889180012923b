use std::collections::BTreeMap;

use morita_core::equivariant::{
    balanced_product, decompose, equivariant_anafunctorify, property_report, quotient_factorization, Property,
};
use morita_core::localization::{
    anafunctorify, compose_anafunctors, compose_generalized, embed, normalize_two_cell, two_cells_equal,
    validate_two_cell, Anafunctor,
};
use morita_core::morita::{skeleton_invariant, strict_pullback, weak_equivalence_report, weak_pullback};
use morita_core::workbench::klein::klein_projection;
use morita_core::workbench::{klein_demo, run_law_suite, InstanceBudget};
use morita_core::{validate_functor, validate_groupoid, ValidationReport};
use serde::Serialize;
use serde_json::{json, Value};

use crate::document::{action_from_doc, Bundle, Document, Exporter, Workspace};
use crate::error::CliError;
use crate::{Command, PullbackMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Error => 2,
        }
    }
}

/// What every command prints. Re-parses as a bundle of its `documents`.
#[derive(Debug, Serialize)]
pub struct Output {
    pub command: String,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub report: Value,
    pub documents: BTreeMap<String, Document>,
}

struct Outcome {
    verdict: Verdict,
    report: Value,
    documents: BTreeMap<String, Document>,
}

impl Outcome {
    fn new(holds: bool, report: impl Serialize) -> Outcome {
        Outcome {
            verdict: if holds { Verdict::Holds } else { Verdict::Fails },
            report: serde_json::to_value(report).expect("reports serialize"),
            documents: BTreeMap::new(),
        }
    }

    fn with(mut self, ex: Exporter) -> Outcome {
        self.documents = ex.documents;
        self
    }
}

pub fn dispatch(command: &Command, bundle: Option<&Bundle>) -> Output {
    let name = command.name().to_string();
    let empty = Bundle::default();
    let ws = Workspace::new(bundle.unwrap_or(&empty));
    let result = match command {
        Command::Validate { .. } => validate(&ws),
        Command::CheckWe { names, .. } => check_we(&ws, names),
        Command::CheckProperties { names, props, .. } => check_properties(&ws, names, props.as_deref()),
        Command::Pullback { names, mode, .. } => pullback(&ws, names, *mode),
        Command::ComposeAna { names, .. } => compose(&ws, names, true),
        Command::ComposeGen { names, .. } => compose(&ws, names, false),
        Command::Decompose { names, .. } => decompose_cmd(&ws, names),
        Command::QuotientFactorize { names, .. } => quotient_factorize(&ws, names),
        Command::BalancedProduct { names, hom, .. } => balanced(&ws, names, hom.as_deref()),
        Command::Anafunctorify { names, equivariant, .. } => anafunctorify_cmd(&ws, names, *equivariant),
        Command::Normalize2cell { names, .. } => normalize(&ws, names),
        Command::TwoCellsEqual { names, .. } => cells_equal(&ws, names),
        Command::Skeleton { names, .. } => skeleton(&ws, names),
        Command::Suite { budget, seed, .. } => suite(&ws, budget, *seed),
        Command::DemoKlein => demo_klein(),
    };
    match result {
        Ok(o) => Output { command: name, verdict: o.verdict, exit_code: o.verdict.exit_code(), report: o.report, documents: o.documents },
        Err(e) => error_output(name, &e),
    }
}

pub fn error_output(command: String, e: &CliError) -> Output {
    let code = e.exit_code();
    let mut report = json!({ "error": e.to_string() });
    if let CliError::Core(morita_core::Error::Invalid { report: r, .. }) = e {
        report["violations"] = serde_json::to_value(r).expect("reports serialize");
    }
    Output {
        command,
        verdict: if code == 1 { Verdict::Fails } else { Verdict::Error },
        exit_code: code,
        report,
        documents: BTreeMap::new(),
    }
}

/// The named documents, or else every document of one of `kinds` when there
/// are exactly `count` of them.
fn pick<'a>(ws: &Workspace<'a>, names: &'a [String], kinds: &[&str], count: usize) -> Result<Vec<&'a str>, CliError> {
    if !names.is_empty() {
        if names.len() != count {
            return Err(CliError::Input(format!("expected {count} document name(s), got {}", names.len())));
        }
        return Ok(names.iter().map(String::as_str).collect());
    }
    let found: Vec<&'a str> =
        ws.bundle.documents.iter().filter(|(_, d)| kinds.contains(&d.kind())).map(|(n, _)| n.as_str()).collect();
    if found.len() != count {
        return Err(CliError::Input(format!(
            "cannot choose {count} {} document(s) among {}; name them explicitly",
            kinds.join("/"),
            found.len()
        )));
    }
    Ok(found)
}

const GROUPOIDS: &[&str] = &["groupoid", "action_groupoid"];

fn validate_one(ws: &Workspace, name: &str) -> Result<ValidationReport, CliError> {
    let report = match ws.document(name)? {
        Document::Groupoid(raw) => validate_groupoid(raw)?,
        Document::ActionGroupoid(doc) => {
            action_from_doc(doc)?;
            ValidationReport::new()
        }
        Document::Functor(doc) => {
            let f = ws.functor(doc)?;
            if doc.equivariant.is_some() {
                ws.equivariant(name)?;
            }
            validate_functor(&f)
        }
        Document::Span(doc) => {
            let s = ws.span(doc)?;
            let mut r = validate_functor(&s.left);
            r.merge(validate_functor(&s.right));
            r
        }
        Document::TwoCellDiagram(doc) => validate_two_cell(&ws.diagram(doc)?)?,
        Document::SuiteConfig(_) => ValidationReport::new(),
    };
    Ok(report)
}

fn validate(ws: &Workspace) -> Result<Outcome, CliError> {
    let mut per_document = BTreeMap::new();
    let mut worst = 0;
    for name in ws.bundle.documents.keys() {
        let entry = match validate_one(ws, name) {
            Ok(r) => {
                if !r.ok {
                    worst = worst.max(1);
                }
                serde_json::to_value(&r).expect("reports serialize")
            }
            Err(e) => {
                worst = worst.max(e.exit_code());
                json!({ "ok": false, "error": e.to_string() })
            }
        };
        per_document.insert(name.clone(), entry);
    }
    let mut o = Outcome::new(worst == 0, json!({ "documents": per_document }));
    if worst == 2 {
        o.verdict = Verdict::Error;
    }
    Ok(o)
}

fn check_we(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["functor"], 1)?[..] else { unreachable!() };
    let (f, _) = ws.functor_named(name)?;
    let r = weak_equivalence_report(&f);
    let report = json!({
        "functor": name,
        "weak_equivalence": r.is_weak_equivalence(),
        "ssw": r.is_ssw(),
        "fully_faithful": r.is_fully_faithful(),
        "fields": r,
    });
    Ok(Outcome::new(r.is_weak_equivalence(), report))
}

fn check_properties(ws: &Workspace, names: &[String], props: Option<&str>) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["action_groupoid"], 1)?[..] else { unreachable!() };
    let a = ws.action(name)?;
    let requested: Vec<Property> = match props {
        None => Property::ALL.to_vec(),
        Some(list) => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
    };
    let r = property_report(&a, &requested);
    let verdicts: BTreeMap<&str, _> = r.verdicts.iter().map(|(p, v)| (p.name(), v)).collect();
    Ok(Outcome::new(r.all_hold(), json!({ "action_groupoid": name, "properties": verdicts })))
}

fn pullback(ws: &Workspace, names: &[String], mode: PullbackMode) -> Result<Outcome, CliError> {
    let picked = pick(ws, names, &["functor"], 2)?;
    let (phi, _) = ws.functor_named(picked[0])?;
    let (psi, _) = ws.functor_named(picked[1])?;
    let mut ex = Exporter::with_inputs(ws, &picked)?;
    let (apex, legs) = match mode {
        PullbackMode::Strict => {
            let p = strict_pullback(&phi, &psi)?;
            (p.apex.clone(), vec![("pr1", p.pr1), ("pr2", p.pr2)])
        }
        PullbackMode::Weak => {
            let p = weak_pullback(&phi, &psi)?;
            (p.apex.clone(), vec![("pr1", p.pr1), ("pr3", p.pr3)])
        }
    };
    let apex_name = ex.groupoid(&apex, "apex");
    for (leg, f) in &legs {
        let doc = ex.functor_doc(f, leg);
        ex.insert(leg, Document::Functor(doc));
    }
    let report = json!({
        "mode": mode,
        "apex": apex_name,
        "objects": apex.object_count(),
        "arrows": apex.arrow_count(),
    });
    Ok(Outcome::new(true, report).with(ex))
}

fn compose(ws: &Workspace, names: &[String], ana: bool) -> Result<Outcome, CliError> {
    let picked = pick(ws, names, &["span"], 2)?;
    let (f, _) = ws.span_named(picked[0])?;
    let (g, _) = ws.span_named(picked[1])?;
    let composite = if ana {
        compose_anafunctors(&Anafunctor::from_generalized(f)?, &Anafunctor::from_generalized(g)?)?.into_generalized()
    } else {
        compose_generalized(&f, &g)?
    };
    let mut ex = Exporter::with_inputs(ws, &picked)?;
    let doc = ex.span_doc(&composite, "composite");
    ex.insert("composite", Document::Span(doc));
    let middle = composite.middle();
    let report = json!({ "middle_objects": middle.object_count(), "middle_arrows": middle.arrow_count() });
    Ok(Outcome::new(true, report).with(ex))
}

fn decompose_cmd(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["functor"], 1)?[..] else { unreachable!() };
    let phi = ws.equivariant(name)?;
    let d = decompose(&phi)?;
    let mut ex = Exporter::with_inputs(ws, &[name])?;
    for (label, f) in [("quotient", &d.quotient), ("middle_iso", &d.middle_iso), ("pi", &d.pi), ("i", &d.i)] {
        let doc = ex.equivariant_doc(f, label);
        ex.insert(label, Document::Functor(doc));
    }
    let g = &phi.source.group;
    let report = json!({
        "kernel": d.kernel.iter().map(|&k| g.element_id(k)).collect::<Vec<_>>(),
        "middle_objects": d.i.source.carrier.clone(),
        "preserved": d.preserved.iter().map(|p| p.name()).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(true, report).with(ex))
}

fn quotient_factorize(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["functor"], 1)?[..] else { unreachable!() };
    let phi = ws.equivariant(name)?;
    let q = quotient_factorization(&phi)?;
    let mut ex = Exporter::with_inputs(ws, &[name])?;
    for (label, f) in [("pi", &q.pi), ("psi", &q.psi)] {
        let doc = ex.equivariant_doc(f, label);
        ex.insert(label, Document::Functor(doc));
    }
    let g = &phi.source.group;
    let report = json!({ "kernel": q.kernel.iter().map(|&k| g.element_id(k)).collect::<Vec<_>>() });
    Ok(Outcome::new(true, report).with(ex))
}

/// `names` are the `K`-action and an action groupoid supplying `G`. Without
/// `hom`, elements of `K` map to the elements of `G` with the same id.
fn balanced(ws: &Workspace, names: &[String], hom: Option<&str>) -> Result<Outcome, CliError> {
    if names.len() != 2 {
        return Err(CliError::Input("balanced-product takes the action and the action groupoid supplying the group".into()));
    }
    let a = ws.action(&names[0])?;
    let g = ws.action(&names[1])?.group.clone();
    let pairs: BTreeMap<String, String> = match hom {
        None => a.group.elements().iter().map(|k| (k.clone(), k.clone())).collect(),
        Some(spec) => spec
            .split(';')
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| CliError::Input(format!("--hom: expected k=g pairs separated by ';', got {p:?}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let incl = a
        .group
        .elements()
        .iter()
        .map(|k| {
            let target = pairs.get(k).ok_or_else(|| CliError::Input(format!("--hom: no image for {k}")))?;
            g.index_of(target).ok_or_else(|| CliError::Input(format!("--hom: {target} is not an element of G")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let b = balanced_product(&g, &incl, &a)?;
    let mut ex = Exporter::with_inputs(ws, &[names[0].as_str()])?;
    let action = ex.action(&b.action, "balanced");
    let doc = ex.equivariant_doc(&b.inclusion, "inclusion");
    ex.insert("inclusion", Document::Functor(doc));
    let report = json!({ "action": action, "objects": b.action.carrier.clone() });
    Ok(Outcome::new(true, report).with(ex))
}

fn anafunctorify_cmd(ws: &Workspace, names: &[String], equivariant: bool) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["span"], 1)?[..] else { unreachable!() };
    let (f, doc) = ws.span_named(name)?;
    let mut ex = Exporter::with_inputs(ws, &[name])?;
    let report = if equivariant {
        let (a, b) = (ws.action(&doc.left.cod)?, ws.action(&doc.right.cod)?);
        let e = equivariant_anafunctorify(&f, &a, &b)?;
        let middle = ex.action(&e.action, "bibundle");
        let span = ex.span_doc(&e.anafunctor, "anafunctor");
        ex.insert("anafunctor", Document::Span(span));
        let witness = ex.diagram_doc(&e.witness, "witness");
        ex.insert("witness", Document::TwoCellDiagram(witness));
        for (label, f) in [("chi", &e.chi), ("omega", &e.omega)] {
            let doc = ex.equivariant_doc(f, label);
            ex.insert(label, Document::Functor(doc));
        }
        let props = morita_core::equivariant::full_property_report(&e.action);
        json!({
            "middle": middle,
            "witness_valid": validate_two_cell(&e.witness)?.ok,
            "middle_properties": props.verdicts.iter().map(|(p, v)| (p.name(), v.holds)).collect::<BTreeMap<_, _>>(),
            "effective_divergence": e.effective_divergence,
        })
    } else {
        let (ana, witness) = anafunctorify(&f)?;
        let span = ex.span_doc(&ana, "anafunctor");
        ex.insert("anafunctor", Document::Span(span));
        let w = ex.diagram_doc(&witness, "witness");
        ex.insert("witness", Document::TwoCellDiagram(w));
        json!({ "witness_valid": validate_two_cell(&witness)?.ok, "middle_objects": ana.middle().object_count() })
    };
    let holds = report["witness_valid"] == json!(true);
    Ok(Outcome::new(holds, report).with(ex))
}

fn normalize(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let [name] = pick(ws, names, &["two_cell_diagram"], 1)?[..] else { unreachable!() };
    let d = ws.diagram_named(name)?;
    let cell = normalize_two_cell(&d)?;
    let mut ex = Exporter::with_inputs(ws, &[name])?;
    let doc = ex.diagram_doc(&embed(&cell), "normal");
    ex.insert("normal", Document::TwoCellDiagram(doc));
    let p = &cell.pullback.apex;
    let nu: BTreeMap<&str, &str> =
        (0..p.object_count()).map(|o| (p.object_id(o), cell.nu.source.cod.arrow_id(cell.nu.component(o)))).collect();
    Ok(Outcome::new(true, json!({ "nu": nu })).with(ex))
}

fn cells_equal(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let picked = pick(ws, names, &["two_cell_diagram"], 2)?;
    let (d1, d2) = (ws.diagram_named(picked[0])?, ws.diagram_named(picked[1])?);
    let equal = two_cells_equal(&d1, &d2)?;
    Ok(Outcome::new(equal, json!({ "equal": equal, "diagrams": picked })))
}

fn skeleton(ws: &Workspace, names: &[String]) -> Result<Outcome, CliError> {
    let picked: Vec<&str> = match names.len() {
        1 | 2 => names.iter().map(String::as_str).collect(),
        0 => pick(ws, names, GROUPOIDS, 1)?,
        _ => return Err(CliError::Input("skeleton takes one groupoid, or two to compare".into())),
    };
    let invariants = picked
        .iter()
        .map(|n| Ok(skeleton_invariant(ws.groupoid(n)?.groupoid())))
        .collect::<Result<Vec<_>, CliError>>()?;
    if let [a, b] = &invariants[..] {
        let equivalent = a.morita_equivalent(b);
        return Ok(Outcome::new(equivalent, json!({ "morita_equivalent": equivalent, "invariants": invariants })));
    }
    Ok(Outcome::new(true, json!({ "invariant": invariants[0] })))
}

fn suite(ws: &Workspace, budget: &Option<String>, seed: Option<u64>) -> Result<Outcome, CliError> {
    let configs: Vec<&InstanceBudget> =
        ws.bundle.documents.values().filter_map(|d| if let Document::SuiteConfig(b) = d { Some(b) } else { None }).collect();
    let mut b = match (budget, configs.as_slice()) {
        (Some(spec), _) => InstanceBudget::parse(spec).map_err(CliError::Input)?,
        (None, [one]) => (*one).clone(),
        (None, []) => InstanceBudget::default(),
        (None, _) => return Err(CliError::Input("several suite_config documents; pass --budget".into())),
    };
    if let Some(s) = seed {
        b.sample_seed = s;
    }
    let r = run_law_suite(&b);
    Ok(Outcome::new(r.all_pass(), r))
}

fn demo_klein() -> Result<Outcome, CliError> {
    let r = klein_demo()?;
    let pi = klein_projection()?;
    let mut ex = Exporter::default();
    ex.action(&pi.source, "square");
    ex.action(&pi.target, "quotient");
    let doc = ex.equivariant_doc(&pi, "projection");
    ex.insert("projection", Document::Functor(doc));
    Ok(Outcome::new(true, r).with(ex))
}
