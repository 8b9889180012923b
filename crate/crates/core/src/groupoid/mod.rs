//! Finite groupoids, functors, natural transformations, finite groups and
//! group actions.

pub mod action;
pub mod functor;
pub mod group;
pub mod iso;
pub mod natural;

use std::collections::BTreeMap;

use rustc_hash::FxHashMap as HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

pub type Obj = usize;
pub type Arr = usize;

/// Composition rule `(after, first) -> after ∘ first`, only ever called on
/// composable pairs.
pub(crate) type Composer = Arc<dyn Fn(Arr, Arr) -> Arr + Send + Sync>;

/// Renders a tuple id such as `(x,k,y)`.
pub fn tuple_id(parts: &[&str]) -> String {
    let mut s = String::with_capacity(parts.iter().map(|p| p.len() + 1).sum::<usize>() + 2);
    s.push('(');
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(p);
    }
    s.push(')');
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowData {
    pub id: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// A finite groupoid with dense object and arrow indices.
///
/// Ids are opaque strings; constructions derive their ids deterministically
/// from the ids of their inputs, so rebuilding a construction is bit-identical.
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    units: Vec<Arr>,
    inverses: Vec<Arr>,
    out: Vec<Vec<Arr>>,
    composer: Composer,
    object_index: HashMap<String, Obj>,
    arrow_index: HashMap<String, Arr>,
}

impl FiniteGroupoid {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowData] {
        &self.arrows
    }

    pub fn object_id(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, a: Arr) -> &str {
        &self.arrows[a].id
    }

    pub fn object_by_id(&self, id: &str) -> Option<Obj> {
        self.object_index.get(id).copied()
    }

    pub fn arrow_by_id(&self, id: &str) -> Option<Arr> {
        self.arrow_index.get(id).copied()
    }

    pub fn src(&self, a: Arr) -> Obj {
        self.arrows[a].src
    }

    pub fn tgt(&self, a: Arr) -> Obj {
        self.arrows[a].tgt
    }

    pub fn unit(&self, x: Obj) -> Arr {
        self.units[x]
    }

    pub fn inverse(&self, a: Arr) -> Arr {
        self.inverses[a]
    }

    pub fn is_unit(&self, a: Arr) -> bool {
        self.units[self.src(a)] == a
    }

    /// `after ∘ first`, defined iff `src(after) = tgt(first)`.
    pub fn compose(&self, after: Arr, first: Arr) -> Option<Arr> {
        (self.src(after) == self.tgt(first)).then(|| (self.composer)(after, first))
    }

    /// Composition of a chain given in diagrammatic order is awkward to read,
    /// so this takes arrows right to left like function composition.
    pub fn compose_all(&self, arrows: &[Arr]) -> Option<Arr> {
        let (&last, rest) = arrows.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &a| self.compose(a, acc))
    }

    /// Arrows with source `x`, in index order.
    pub fn out_arrows(&self, x: Obj) -> &[Arr] {
        &self.out[x]
    }

    pub fn hom(&self, from: Obj, to: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.out[from].iter().copied().filter(move |&a| self.arrows[a].tgt == to)
    }

    pub fn loops(&self, x: Obj) -> Vec<Arr> {
        self.hom(x, x).collect()
    }

    /// All composable pairs `(after, first)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arr, Arr)> + '_ {
        (0..self.arrows.len())
            .flat_map(move |first| self.out[self.tgt(first)].iter().map(move |&after| (after, first)))
    }

    /// Connected components, each sorted, ordered by least object.
    pub fn components(&self) -> Vec<Vec<Obj>> {
        let n = self.objects.len();
        let mut label = vec![usize::MAX; n];
        let mut comps = Vec::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![root];
            label[root] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &a in &self.out[x] {
                    let y = self.tgt(a);
                    if label[y] == usize::MAX {
                        label[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    pub fn to_raw(&self) -> RawGroupoid {
        let objects = self.objects.clone();
        let arrows = self
            .arrows
            .iter()
            .map(|a| RawArrow {
                id: a.id.clone(),
                src: self.objects[a.src].clone(),
                tgt: self.objects[a.tgt].clone(),
            })
            .collect();
        let compose = self
            .composable_pairs()
            .map(|(after, first)| {
                let r = (self.composer)(after, first);
                [self.arrows[after].id.clone(), self.arrows[first].id.clone(), self.arrows[r].id.clone()]
            })
            .collect();
        let identity =
            (0..self.objects.len()).map(|x| (self.objects[x].clone(), self.arrows[self.units[x]].id.clone())).collect();
        let inverse = (0..self.arrows.len())
            .map(|a| (self.arrows[a].id.clone(), self.arrows[self.inverses[a]].id.clone()))
            .collect();
        RawGroupoid { objects, arrows, compose, identity, inverse }
    }

    /// Parses hand-written tables; fails unless every groupoid axiom holds.
    pub fn from_raw(raw: &RawGroupoid) -> Result<FiniteGroupoid> {
        let report = validate_groupoid(raw)?;
        if !report.ok {
            return Err(Error::Invalid { what: "groupoid".into(), report });
        }
        let object_index: HashMap<&str, Obj> =
            raw.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let arrow_index: HashMap<&str, Arr> =
            raw.arrows.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        let mut b = GroupoidBuilder::default();
        for o in &raw.objects {
            b.add_object(o.clone());
        }
        for a in &raw.arrows {
            b.add_arrow(a.id.clone(), object_index[a.src.as_str()], object_index[a.tgt.as_str()]);
        }
        b.units = raw.objects.iter().map(|o| arrow_index[raw.identity[o].as_str()]).collect();
        b.inverses = raw.arrows.iter().map(|a| arrow_index[raw.inverse[&a.id].as_str()]).collect();
        let table: HashMap<(Arr, Arr), Arr> = raw
            .compose
            .iter()
            .map(|[after, first, res]| {
                ((arrow_index[after.as_str()], arrow_index[first.as_str()]), arrow_index[res.as_str()])
            })
            .collect();
        b.build(Arc::new(move |after, first| table[&(after, first)]))
    }

    pub fn empty() -> FiniteGroupoid {
        GroupoidBuilder::default().build(Arc::new(|_, _| unreachable!("empty groupoid has no arrows"))).unwrap()
    }

    /// The groupoid with one object and only its unit arrow.
    pub fn terminal() -> FiniteGroupoid {
        let mut b = GroupoidBuilder::default();
        b.add_object("*".into());
        b.add_arrow("1".into(), 0, 0);
        b.units = vec![0];
        b.inverses = vec![0];
        b.build(Arc::new(|_, _| 0)).unwrap()
    }

    /// Codiscrete groupoid on the given objects: exactly one arrow `x -> y`
    /// for every ordered pair.
    pub fn pair_groupoid(objects: &[&str]) -> FiniteGroupoid {
        let n = objects.len();
        let mut b = GroupoidBuilder::default();
        for o in objects {
            b.add_object(o.to_string());
        }
        for x in 0..n {
            for y in 0..n {
                b.add_arrow(tuple_id(&[objects[y], objects[x]]), x, y);
            }
        }
        b.units = (0..n).map(|x| x * n + x).collect();
        b.inverses = (0..b.arrows.len()).map(|a| (a % n) * n + a / n).collect();
        b.build(Arc::new(move |after, first| (first / n) * n + after % n)).unwrap()
    }

    /// Cartesian product; ids are pairs.
    pub fn product(left: &Arc<FiniteGroupoid>, right: &Arc<FiniteGroupoid>) -> FiniteGroupoid {
        let (n0, m0) = (left.object_count(), right.object_count());
        let m1 = right.arrow_count();
        let mut b = GroupoidBuilder::default();
        for x in 0..n0 {
            for y in 0..m0 {
                b.add_object(tuple_id(&[left.object_id(x), right.object_id(y)]));
            }
        }
        for a in 0..left.arrow_count() {
            for c in 0..m1 {
                b.add_arrow(
                    tuple_id(&[left.arrow_id(a), right.arrow_id(c)]),
                    left.src(a) * m0 + right.src(c),
                    left.tgt(a) * m0 + right.tgt(c),
                );
            }
        }
        b.units = (0..n0 * m0).map(|o| left.unit(o / m0) * m1 + right.unit(o % m0)).collect();
        b.inverses = (0..b.arrows.len()).map(|a| left.inverse(a / m1) * m1 + right.inverse(a % m1)).collect();
        let (l, r) = (left.clone(), right.clone());
        b.build(Arc::new(move |after, first| {
            let a = l.compose(after / m1, first / m1).expect("composable");
            let c = r.compose(after % m1, first % m1).expect("composable");
            a * m1 + c
        }))
        .expect("product ids are distinct")
    }
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.units == other.units
            && self.inverses == other.inverses
            && self.composable_pairs().all(|(after, first)| (self.composer)(after, first) == (other.composer)(after, first))
    }
}

impl Eq for FiniteGroupoid {}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.objects.len())
            .field("arrows", &self.arrows.len())
            .finish()
    }
}

/// Assembles a groupoid from index data plus a composition rule. Construction
/// sites are responsible for the axioms; the tests re-validate them.
#[derive(Default)]
pub(crate) struct GroupoidBuilder {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowData>,
    pub units: Vec<Arr>,
    pub inverses: Vec<Arr>,
}

impl GroupoidBuilder {
    pub fn add_object(&mut self, id: String) -> Obj {
        self.objects.push(id);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, id: String, src: Obj, tgt: Obj) -> Arr {
        self.arrows.push(ArrowData { id, src, tgt });
        self.arrows.len() - 1
    }

    pub fn build(self, composer: Composer) -> Result<FiniteGroupoid> {
        let mut object_index = HashMap::with_capacity_and_hasher(self.objects.len(), Default::default());
        for (i, o) in self.objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::DuplicateId(o.clone()));
            }
        }
        let mut arrow_index = HashMap::with_capacity_and_hasher(self.arrows.len(), Default::default());
        let mut out = vec![Vec::new(); self.objects.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            out[a.src].push(i);
        }
        debug_assert_eq!(self.units.len(), self.objects.len());
        debug_assert_eq!(self.inverses.len(), self.arrows.len());
        Ok(FiniteGroupoid {
            objects: self.objects,
            arrows: self.arrows,
            units: self.units,
            inverses: self.inverses,
            out,
            composer,
            object_index,
            arrow_index,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Groupoid tables as written by hand: nothing is assumed valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<RawArrow>,
    /// Entries `[after, first, after∘first]`.
    pub compose: Vec<[String; 3]>,
    pub identity: BTreeMap<String, String>,
    pub inverse: BTreeMap<String, String>,
}

pub mod axiom {
    pub const DISTINCT_IDS: &str = "distinct ids";
    pub const COMPOSABILITY: &str = "composability";
    pub const COMPOSITION_ENDPOINTS: &str = "composition endpoints";
    pub const COMPOSITION_FUNCTIONAL: &str = "composition functional";
    pub const COMPOSITION_TOTALITY: &str = "composition totality";
    pub const UNIT_TOTALITY: &str = "unit totality";
    pub const UNIT_ENDPOINTS: &str = "unit endpoints";
    pub const UNIT_LAW: &str = "unit law";
    pub const ASSOCIATIVITY: &str = "associativity";
    pub const INVERSE_TOTALITY: &str = "inverse totality";
    pub const INVERSE_LAW: &str = "inverse law";
}

/// Checks every groupoid axiom on hand-written tables.
///
/// Dangling references are an error rather than a violation: nothing
/// meaningful can be said about a table that mentions undeclared ids.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<ValidationReport> {
    use axiom::*;

    let mut report = ValidationReport::new();
    let mut objs: HashMap<&str, Obj> = HashMap::default();
    for (i, o) in raw.objects.iter().enumerate() {
        if objs.contains_key(o.as_str()) {
            report.push(DISTINCT_IDS, format!("object {o}"));
        } else {
            objs.insert(o, i);
        }
    }
    let obj = |table: &str, id: &str| -> Result<Obj> {
        objs.get(id).copied().ok_or_else(|| Error::DanglingId { table: table.into(), id: id.into() })
    };
    let mut arrs: HashMap<&str, Arr> = HashMap::default();
    let mut ends = Vec::with_capacity(raw.arrows.len());
    for (i, a) in raw.arrows.iter().enumerate() {
        ends.push((obj("arrows", &a.src)?, obj("arrows", &a.tgt)?));
        if arrs.contains_key(a.id.as_str()) {
            report.push(DISTINCT_IDS, format!("arrow {}", a.id));
        } else {
            arrs.insert(&a.id, i);
        }
    }
    let arr = |table: &str, id: &str| -> Result<Arr> {
        arrs.get(id).copied().ok_or_else(|| Error::DanglingId { table: table.into(), id: id.into() })
    };
    let name = |a: Arr| raw.arrows[a].id.as_str();

    let mut table: HashMap<(Arr, Arr), Arr> = HashMap::default();
    for [after, first, res] in &raw.compose {
        let (a2, a1, r) = (arr("compose", after)?, arr("compose", first)?, arr("compose", res)?);
        let witness = format!("compose({after}, {first}) = {res}");
        if ends[a2].0 != ends[a1].1 {
            report.push(COMPOSABILITY, witness);
            continue;
        }
        if ends[r] != (ends[a1].0, ends[a2].1) {
            report.push(COMPOSITION_ENDPOINTS, witness.clone());
        }
        if let Some(prev) = table.insert((a2, a1), r) {
            if prev != r {
                report.push(COMPOSITION_FUNCTIONAL, format!("{witness} conflicts with {}", name(prev)));
            }
        }
    }
    let mut out: Vec<Vec<Arr>> = vec![Vec::new(); raw.objects.len()];
    for (i, &(s, _)) in ends.iter().enumerate() {
        out[s].push(i);
    }
    for a1 in 0..ends.len() {
        for &a2 in &out[ends[a1].1] {
            if !table.contains_key(&(a2, a1)) {
                report.push(COMPOSITION_TOTALITY, format!("({}, {}) has no composite", name(a2), name(a1)));
            }
        }
    }

    let mut units = vec![None; raw.objects.len()];
    for (o, u) in &raw.identity {
        let (x, a) = (obj("identity", o)?, arr("identity", u)?);
        if ends[a] != (x, x) {
            report.push(UNIT_ENDPOINTS, format!("identity({o}) = {u}"));
        }
        units[x] = Some(a);
    }
    for (x, u) in units.iter().enumerate() {
        if u.is_none() {
            report.push(UNIT_TOTALITY, format!("object {} has no identity", raw.objects[x]));
        }
    }
    for a in 0..ends.len() {
        let (s, t) = ends[a];
        if let Some(us) = units[s] {
            if let Some(&r) = table.get(&(a, us)) {
                if r != a {
                    report.push(UNIT_LAW, format!("{} ∘ id({}) = {}", name(a), raw.objects[s], name(r)));
                }
            }
        }
        if let Some(ut) = units[t] {
            if let Some(&r) = table.get(&(ut, a)) {
                if r != a {
                    report.push(UNIT_LAW, format!("id({}) ∘ {} = {}", raw.objects[t], name(a), name(r)));
                }
            }
        }
    }

    for a in 0..ends.len() {
        for &b in &out[ends[a].1] {
            let Some(&ba) = table.get(&(b, a)) else { continue };
            for &c in &out[ends[b].1] {
                let (Some(&cb), Some(&c_ba)) = (table.get(&(c, b)), table.get(&(c, ba))) else { continue };
                if let Some(&cb_a) = table.get(&(cb, a)) {
                    if c_ba != cb_a {
                        report.push(ASSOCIATIVITY, format!("({}, {}, {})", name(c), name(b), name(a)));
                    }
                }
            }
        }
    }

    let mut inverses = vec![None; ends.len()];
    for (a, i) in &raw.inverse {
        inverses[arr("inverse", a)?] = Some(arr("inverse", i)?);
    }
    for (a, inv) in inverses.iter().enumerate() {
        let Some(i) = *inv else {
            report.push(INVERSE_TOTALITY, format!("arrow {} has no inverse", name(a)));
            continue;
        };
        let (s, t) = ends[a];
        let left = table.get(&(i, a)).copied();
        let right = table.get(&(a, i)).copied();
        if left != units[s] || right != units[t] || units[s].is_none() || units[t].is_none() {
            report.push(INVERSE_LAW, format!("inverse({}) = {}", name(a), name(i)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn raw_terminal() -> RawGroupoid {
        RawGroupoid {
            objects: vec!["*".into()],
            arrows: vec![RawArrow { id: "1".into(), src: "*".into(), tgt: "*".into() }],
            compose: vec![["1".into(), "1".into(), "1".into()]],
            identity: [("*".to_string(), "1".to_string())].into(),
            inverse: [("1".to_string(), "1".to_string())].into(),
        }
    }

    #[test]
    fn terminal_validates() {
        let report = validate_groupoid(&raw_terminal()).unwrap();
        assert!(report.ok, "{report}");
        assert_eq!(FiniteGroupoid::terminal().to_raw(), raw_terminal());
    }

    #[test]
    fn empty_groupoid_validates() {
        let raw = RawGroupoid::default();
        assert!(validate_groupoid(&raw).unwrap().ok);
        let g = FiniteGroupoid::from_raw(&raw).unwrap();
        assert!(g.is_empty());
        assert_eq!(g, FiniteGroupoid::empty());
    }

    #[test]
    fn dangling_id_is_an_error() {
        let mut raw = raw_terminal();
        raw.identity.insert("ghost".into(), "1".into());
        assert!(matches!(validate_groupoid(&raw), Err(Error::DanglingId { .. })));
    }

    #[test]
    fn composing_non_composable_pair_is_flagged() {
        let g = FiniteGroupoid::pair_groupoid(&["a", "b"]);
        let mut raw = g.to_raw();
        // (b,a) is the arrow a -> b; composing it after itself is not composable.
        raw.compose.push(["(b,a)".into(), "(b,a)".into(), "(b,a)".into()]);
        let report = validate_groupoid(&raw).unwrap();
        assert!(report.has(axiom::COMPOSABILITY), "{report}");
    }

    #[test]
    fn missing_composite_is_flagged() {
        let mut raw = FiniteGroupoid::pair_groupoid(&["a", "b"]).to_raw();
        raw.compose.pop();
        let report = validate_groupoid(&raw).unwrap();
        assert!(report.has(axiom::COMPOSITION_TOTALITY));
    }

    #[test]
    fn wrong_inverse_is_flagged() {
        let mut raw = FiniteGroupoid::pair_groupoid(&["a", "b"]).to_raw();
        raw.inverse.insert("(b,a)".into(), "(b,a)".into());
        let report = validate_groupoid(&raw).unwrap();
        assert!(report.has(axiom::INVERSE_LAW));
    }

    #[test]
    fn pair_groupoid_and_product_validate() {
        let p = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b", "c"]));
        assert!(validate_groupoid(&p.to_raw()).unwrap().ok);
        assert_eq!(p.arrow_count(), 9);
        let q = Arc::new(FiniteGroupoid::pair_groupoid(&["0", "1"]));
        let prod = FiniteGroupoid::product(&p, &q);
        assert_eq!(prod.object_count(), 6);
        assert_eq!(prod.arrow_count(), 36);
        assert!(validate_groupoid(&prod.to_raw()).unwrap().ok);
        assert_eq!(prod.components().len(), 1);
    }

    #[test]
    fn raw_round_trip_preserves_groupoid() {
        let p = FiniteGroupoid::pair_groupoid(&["a", "b"]);
        let back = FiniteGroupoid::from_raw(&p.to_raw()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_raw(), p.to_raw());
    }
}
