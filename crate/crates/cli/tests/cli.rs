use std::path::{Path, PathBuf};
use std::process::Command;

use morita_cli::document::{parse, serialize, Bundle, Document};
use serde_json::{json, Value};
use tempfile::TempDir;

fn morita(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_morita")).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn klein(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("klein.json");
    let (code, _) = morita(&["demo-klein", "--out", s(&p)]);
    assert_eq!(code, 0);
    p
}

/// Klein bundle plus a span with both legs the projection, and the identity
/// on the quotient.
fn extended(dir: &TempDir) -> PathBuf {
    let k: Value = serde_json::from_slice(&std::fs::read(klein(dir)).unwrap()).unwrap();
    let mut docs = k["documents"].clone();
    let mut leg = docs["projection"].clone();
    leg.as_object_mut().unwrap().remove("kind");
    docs["sp"] = json!({"kind": "span", "left": leg, "right": leg});
    docs["sp2"] = docs["sp"].clone();
    let arrows: serde_json::Map<String, Value> = docs["quotient"]["action"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let id = format!("({},{})", t[0].as_str().unwrap(), t[1].as_str().unwrap());
            (id.clone(), Value::String(id))
        })
        .collect();
    docs["ident"] = json!({
        "kind": "functor", "dom": "quotient", "cod": "quotient",
        "obj_map": {"[N]": "[N]", "[E]": "[E]"}, "arr_map": arrows,
    });
    write(dir, "extended.json", &json!({ "documents": docs }))
}

fn revalidates(dir: &TempDir, output: &Value) {
    let p = write(dir, "output.json", output);
    let (code, v) = morita(&["validate", s(&p)]);
    assert_eq!(code, 0, "{v:#}");
    assert!(!output["documents"].as_object().unwrap().is_empty());
}

#[test]
fn klein_bundle_round_trips() {
    let dir = TempDir::new().unwrap();
    let bytes = std::fs::read(klein(&dir)).unwrap();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    let bundle: Bundle = Bundle { documents: serde_json::from_value(v["documents"].clone()).unwrap() };
    let canonical = serialize(&bundle);
    assert_eq!(parse(&canonical).unwrap(), bundle);
    assert_eq!(serialize(&parse(&canonical).unwrap()), canonical);
    assert!(canonical.ends_with(b"\n"));
}

#[test]
fn single_document_becomes_main() {
    let b = parse(br#"{"kind":"suite_config","max_group_order":2}"#).unwrap();
    assert!(matches!(b.documents["main"], Document::SuiteConfig(_)));
}

#[test]
fn projection_is_a_weak_equivalence() {
    let dir = TempDir::new().unwrap();
    let (code, v) = morita(&["check-we", s(&klein(&dir)), "projection"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["report"]["ssw"], true);
}

#[test]
fn quotient_is_not_effective() {
    let dir = TempDir::new().unwrap();
    let (code, v) = morita(&["check-properties", "--props", "effective", s(&klein(&dir)), "quotient"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fails");
    assert!(v["report"]["properties"]["effective"]["witness"].as_str().unwrap().contains("(e,τ)"));
}

#[test]
fn square_is_effective() {
    let dir = TempDir::new().unwrap();
    let (code, _) = morita(&["check-properties", "--props", "effective", s(&klein(&dir)), "square"]);
    assert_eq!(code, 0);
}

#[test]
fn decompose_rejects_plain_functors() {
    let dir = TempDir::new().unwrap();
    let g = json!({
        "kind": "groupoid", "objects": ["a"], "arrows": [{"id": "1", "src": "a", "tgt": "a"}],
        "compose": [["1", "1", "1"]], "identity": {"a": "1"}, "inverse": {"1": "1"},
    });
    let f = json!({"kind": "functor", "dom": "g", "cod": "g", "obj_map": {"a": "a"}, "arr_map": {"1": "1"}});
    let p = write(&dir, "plain.json", &json!({"documents": {"g": g, "f": f}}));
    let (code, v) = morita(&["decompose", s(&p)]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
    let (code, _) = morita(&["check-we", s(&p)]);
    assert_eq!(code, 0);
}

#[test]
fn schema_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", &json!({"kind": "groupoid", "objects": [], "arrows": [], "compose": [], "identity": {}}));
    let (code, v) = morita(&["validate", s(&p)]);
    assert_eq!(code, 2);
    assert!(v["report"]["error"].as_str().unwrap().contains("inverse"));
}

#[test]
fn broken_composition_is_a_definite_negative() {
    let dir = TempDir::new().unwrap();
    let g = json!({
        "kind": "groupoid", "objects": ["a"],
        "arrows": [{"id": "1", "src": "a", "tgt": "a"}, {"id": "t", "src": "a", "tgt": "a"}],
        "compose": [["1", "1", "1"], ["1", "t", "t"], ["t", "1", "t"], ["t", "t", "t"]],
        "identity": {"a": "1"}, "inverse": {"1": "1", "t": "t"},
    });
    let p = write(&dir, "g.json", &g);
    let (code, v) = morita(&["validate", s(&p)]);
    assert_eq!(code, 1);
    assert!(!v["report"]["documents"]["main"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn constructions_revalidate() {
    let dir = TempDir::new().unwrap();
    let b = extended(&dir);
    let b = s(&b);
    for args in [
        vec!["pullback", b, "projection", "projection"],
        vec!["pullback", "--mode", "weak", b, "projection", "ident"],
        vec!["compose-ana", b, "sp", "sp2"],
        vec!["compose-gen", b, "sp", "sp2"],
        vec!["decompose", b, "projection"],
        vec!["quotient-factorize", b, "projection"],
        vec!["anafunctorify", b, "sp"],
        vec!["anafunctorify", "--equivariant", b, "sp"],
        vec!["balanced-product", b, "quotient", "square", "--hom", "[(e,e)]=(e,e);[(e,τ)]=(e,τ)"],
    ] {
        let (code, v) = morita(&args);
        assert_eq!(code, 0, "{args:?}: {v:#}");
        revalidates(&dir, &v);
    }
}

#[test]
fn witness_normalizes_to_an_equal_cell() {
    let dir = TempDir::new().unwrap();
    let b = extended(&dir);
    let (_, ana) = morita(&["anafunctorify", s(&b), "sp"]);
    let a = write(&dir, "ana.json", &ana);
    let (code, normal) = morita(&["normalize-2cell", s(&a), "witness"]);
    assert_eq!(code, 0);
    revalidates(&dir, &normal);
    let mut docs = ana["documents"].clone();
    for (k, v) in normal["documents"].as_object().unwrap() {
        docs.as_object_mut().unwrap().entry(k.clone()).or_insert(v.clone());
    }
    let both = write(&dir, "both.json", &json!({ "documents": docs }));
    let (code, v) = morita(&["2cells-equal", s(&both), "witness", "normal"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["equal"], true);
}

#[test]
fn skeleton_compares_square_and_quotient() {
    let dir = TempDir::new().unwrap();
    let (code, v) = morita(&["skeleton", s(&klein(&dir)), "square", "quotient"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["morita_equivalent"], true);
}

#[test]
fn ambiguous_defaults_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let (code, _) = morita(&["check-properties", s(&klein(&dir))]);
    assert_eq!(code, 2);
}

#[test]
fn small_suite_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = |name: &str| {
        let p = dir.path().join(name);
        let (code, _) = morita(&["suite", "--budget", "group=2,carrier=5,objects=6", "--seed", "3", "--out", s(&p)]);
        assert_eq!(code, 0);
        std::fs::read(p).unwrap()
    };
    assert_eq!(out("a.json"), out("b.json"));
}

#[test]
fn suite_reads_its_budget_from_a_config_document() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "cfg.json", &json!({"kind": "suite_config", "max_group_order": 2, "max_carrier_size": 2}));
    let (code, v) = morita(&["suite", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["budget"]["max_group_order"], 2);
}
