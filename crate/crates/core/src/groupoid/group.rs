use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groupoid::iso::IsoOutcome;
use crate::report::ValidationReport;

pub mod axiom {
    pub const TABLE_SHAPE: &str = "table shape";
    pub const UNIT_LAW: &str = "unit law";
    pub const ASSOCIATIVITY: &str = "associativity";
    pub const INVERSE_EXISTENCE: &str = "inverse existence";
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    elements: Vec<String>,
    mul: Vec<usize>,
    unit: usize,
    inverses: Vec<usize>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({:?})", self.elements)
    }
}

/// Group axioms over a flat row-major table.
pub fn validate_group(n: usize, mul: &[usize], unit: usize) -> ValidationReport {
    use axiom::*;
    let mut report = ValidationReport::new();
    if mul.len() != n * n || mul.iter().any(|&c| c >= n) || (n > 0 && unit >= n) || n == 0 {
        report.push(TABLE_SHAPE, format!("{n} elements, {} entries", mul.len()));
        return report;
    }
    for a in 0..n {
        if mul[unit * n + a] != a || mul[a * n + unit] != a {
            report.push(UNIT_LAW, format!("element {a}"));
        }
        if !(0..n).any(|b| mul[a * n + b] == unit && mul[b * n + a] == unit) {
            report.push(INVERSE_EXISTENCE, format!("element {a}"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = mul[a * n + b];
            for c in 0..n {
                if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                    report.push(ASSOCIATIVITY, format!("({a}, {b}, {c})"));
                }
            }
        }
    }
    report
}

impl FiniteGroup {
    /// Builds a group from a flat row-major table `mul[a * n + b] = a·b`.
    pub fn from_indices(elements: Vec<String>, mul: Vec<usize>, unit: usize) -> Result<FiniteGroup> {
        let n = elements.len();
        let report = validate_group(n, &mul, unit);
        if !report.ok {
            return Err(Error::Invalid { what: "group".into(), report });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateId(e.clone()));
            }
        }
        let inverses = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == unit).unwrap()).collect();
        Ok(FiniteGroup { elements, mul, unit, inverses, index })
    }

    /// Builds a group from a table of element ids, row `a` listing `a·b`.
    pub fn from_ids(elements: Vec<String>, rows: &[Vec<String>], unit: &str) -> Result<FiniteGroup> {
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let look = |id: &str| {
            index.get(id).copied().ok_or_else(|| Error::DanglingId { table: "mul".into(), id: id.into() })
        };
        let n = elements.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            let mut report = ValidationReport::new();
            report.push(axiom::TABLE_SHAPE, format!("expected a {n}x{n} table"));
            return Err(Error::Invalid { what: "group".into(), report });
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in rows {
            for id in row {
                mul.push(look(id)?);
            }
        }
        let unit = index
            .get(unit)
            .copied()
            .ok_or_else(|| Error::DanglingId { table: "unit".into(), id: unit.into() })?;
        FiniteGroup::from_indices(elements, mul, unit)
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// `Z/n` with elements `"0".."n-1"`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n * n).map(|ab| (ab / n + ab % n) % n).collect();
        FiniteGroup::from_indices(elements, mul, 0).expect("cyclic table")
    }

    /// Direct product with pair ids; `(g, h)` has index `g * |H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (g.order(), h.order());
        let elements =
            (0..n * m).map(|i| format!("({},{})", g.element_id(i / m), h.element_id(i % m))).collect();
        let mut mul = Vec::with_capacity(n * n * m * m);
        for a in 0..n * m {
            for b in 0..n * m {
                mul.push(g.mul(a / m, b / m) * m + h.mul(a % m, b % m));
            }
        }
        FiniteGroup::from_indices(elements, mul, g.unit() * m + h.unit()).expect("product table")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_id(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Row-major table of ids, as serialized.
    pub fn table_ids(&self) -> Vec<Vec<String>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.elements[self.mul(a, b)].clone()).collect()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[self.unit] = true;
        let mut out = vec![self.unit];
        let mut i = 0;
        while i < out.len() {
            let a = out[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !member[b] {
                    member[b] = true;
                    out.push(b);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Greedy generating set: each element not yet generated, in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = self.generated(&gens);
        for a in 0..self.order() {
            if reached.binary_search(&a).is_err() {
                gens.push(a);
                reached = self.generated(&gens);
            }
        }
        gens
    }

    /// Every subgroup generated by at most two elements, sorted; for groups
    /// of order at most 8 this is every subgroup.
    pub fn two_generated_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..self.order() {
            for b in a..self.order() {
                out.push(self.generated(&[a, b]));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &a in subset {
            if a >= self.order() {
                return false;
            }
            member[a] = true;
        }
        member[self.unit] && subset.iter().all(|&a| subset.iter().all(|&b| member[self.mul(a, self.inv(b))]))
    }

    pub fn is_normal(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &a in subset {
            member[a] = true;
        }
        (0..self.order()).all(|g| subset.iter().all(|&k| member[self.mul(self.mul(g, k), self.inv(g))]))
    }

    /// Left cosets `gK`: returns the coset label of every element and the
    /// least element of each coset, labels ordered by that representative.
    pub fn left_cosets(&self, subgroup: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut label = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if label[g] != usize::MAX {
                continue;
            }
            for &k in subgroup {
                label[self.mul(g, k)] = reps.len();
            }
            reps.push(g);
        }
        (label, reps)
    }

    /// `G/N` for a normal subgroup, with the projection. Quotient elements
    /// carry the id of their least representative in brackets.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::precondition("quotient by a subset that is not a normal subgroup"));
        }
        let (label, reps) = self.left_cosets(normal);
        let m = reps.len();
        let elements = reps.iter().map(|&r| format!("[{}]", self.elements[r])).collect();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                mul.push(label[self.mul(a, b)]);
            }
        }
        let q = FiniteGroup::from_indices(elements, mul, label[self.unit])?;
        Ok((q, label))
    }

    /// The subgroup as a group in its own right, keeping element ids, with
    /// the inclusion map.
    pub fn subgroup(&self, subset: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(subset) {
            return Err(Error::precondition("subset is not a subgroup"));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos: HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let elements = sorted.iter().map(|&a| self.elements[a].clone()).collect();
        let mut mul = Vec::with_capacity(sorted.len() * sorted.len());
        for &a in &sorted {
            for &b in &sorted {
                mul.push(pos[&self.mul(a, b)]);
            }
        }
        let g = FiniteGroup::from_indices(elements, mul, pos[&self.unit])?;
        Ok((g, sorted))
    }

    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        let n = self.order();
        map.len() == n
            && map.iter().all(|&h| h < target.order())
            && (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }

    /// Sorted kernel of a homomorphism.
    pub fn kernel(&self, target: &FiniteGroup, map: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&a| map[a] == target.unit()).collect()
    }

    /// Sorted image of a map.
    pub fn image(map: &[usize]) -> Vec<usize> {
        let mut im = map.to_vec();
        im.sort_unstable();
        im.dedup();
        im
    }

    /// Extends generator images to a homomorphism into any group given by a
    /// multiplication rule; `None` if the images are inconsistent or the
    /// generators do not generate.
    pub fn extend_homomorphism<T: Clone + PartialEq>(
        &self,
        gens: &[usize],
        images: &[T],
        identity: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Option<Vec<T>> {
        let mut map: Vec<Option<T>> = vec![None; self.order()];
        map[self.unit] = Some(identity);
        let mut queue = vec![self.unit];
        let mut i = 0;
        while i < queue.len() {
            let a = queue[i];
            let fa = map[a].clone().unwrap();
            for (&g, img) in gens.iter().zip(images) {
                let b = self.mul(a, g);
                let fb = mul(&fa, img);
                match &map[b] {
                    None => {
                        map[b] = Some(fb);
                        queue.push(b);
                    }
                    Some(existing) if *existing != fb => return None,
                    Some(_) => {}
                }
            }
            i += 1;
        }
        map.into_iter().collect()
    }

    /// Exhaustive isomorphism search by backtracking over generator images.
    /// `budget` counts candidate assignments and is decremented in place.
    pub fn find_isomorphism(&self, other: &FiniteGroup, budget: &mut u64) -> IsoOutcome<Vec<usize>> {
        if self.order() != other.order() || self.is_abelian() != other.is_abelian() {
            return IsoOutcome::NotIsomorphic;
        }
        let orders_a: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        let orders_b: Vec<usize> = (0..other.order()).map(|b| other.element_order(b)).collect();
        let (mut sa, mut sb) = (orders_a.clone(), orders_b.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return IsoOutcome::NotIsomorphic;
        }
        let gens = self.generators();
        let mut images = Vec::with_capacity(gens.len());
        match self.iso_backtrack(other, &gens, &orders_a, &orders_b, &mut images, budget) {
            Ok(Some(map)) => IsoOutcome::Found(map),
            Ok(None) => IsoOutcome::NotIsomorphic,
            Err(()) => IsoOutcome::BudgetExceeded,
        }
    }

    fn iso_backtrack(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        orders_a: &[usize],
        orders_b: &[usize],
        images: &mut Vec<usize>,
        budget: &mut u64,
    ) -> std::result::Result<Option<Vec<usize>>, ()> {
        if images.len() == gens.len() {
            let map = self.extend_homomorphism(gens, images, other.unit(), |&x, &y| other.mul(x, y));
            return Ok(map.filter(|m| {
                let mut seen = vec![false; other.order()];
                m.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
            }));
        }
        let g = gens[images.len()];
        for b in 0..other.order() {
            if orders_b[b] != orders_a[g] {
                continue;
            }
            if *budget == 0 {
                return Err(());
            }
            *budget -= 1;
            images.push(b);
            if let Some(found) = self.iso_backtrack(other, gens, orders_a, orders_b, images, budget)? {
                return Ok(Some(found));
            }
            images.pop();
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_are_valid() {
        for n in 1..=8 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
            assert_eq!(g.generators().len(), usize::from(n > 1));
        }
    }

    #[test]
    fn bad_table_is_rejected() {
        // Constant table fails the unit law.
        let err = FiniteGroup::from_indices(vec!["a".into(), "b".into()], vec![0; 4], 0).unwrap_err();
        assert!(matches!(err, Error::Invalid { .. }));
    }

    #[test]
    fn quotient_and_kernel() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, proj) = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert!(z4.is_homomorphism(&q, &proj));
        assert_eq!(z4.kernel(&q, &proj), vec![0, 2]);
        assert!(z4.quotient(&[0, 1]).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let v4 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let z4 = FiniteGroup::cyclic(4);
        let mut budget = 1_000;
        assert_eq!(v4.find_isomorphism(&z4, &mut budget), IsoOutcome::NotIsomorphic);
        let z6 = FiniteGroup::cyclic(6);
        let z2z3 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        let IsoOutcome::Found(map) = z6.find_isomorphism(&z2z3, &mut budget) else { panic!() };
        assert!(z6.is_homomorphism(&z2z3, &map));
        let mut none = 0;
        assert_eq!(z6.find_isomorphism(&z2z3, &mut none), IsoOutcome::BudgetExceeded);
    }

    #[test]
    fn extension_detects_inconsistency() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        // 1 ↦ 1 is a homomorphism Z/4 → Z/2.
        assert!(z4.extend_homomorphism(&[1], &[1], 0, |&a, &b| z2.mul(a, b)).is_some());
        let z3 = FiniteGroup::cyclic(3);
        assert!(z4.extend_homomorphism(&[1], &[1], 0, |&a, &b| z3.mul(a, b)).is_none());
    }
}
