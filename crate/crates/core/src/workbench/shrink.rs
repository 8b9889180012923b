use std::collections::HashSet;

use crate::groupoid::{validate_groupoid, RawGroupoid};

/// First violated axiom, or `None` if the tables are valid. Dangling ids
/// count as a different failure.
fn failing_axiom(raw: &RawGroupoid) -> Option<String> {
    match validate_groupoid(raw) {
        Ok(r) => r.first().map(|v| v.axiom.clone()),
        Err(e) => Some(format!("error: {e}")),
    }
}

fn without_arrows(raw: &RawGroupoid, dropped: &HashSet<String>) -> RawGroupoid {
    RawGroupoid {
        objects: raw.objects.clone(),
        arrows: raw.arrows.iter().filter(|a| !dropped.contains(&a.id)).cloned().collect(),
        compose: raw.compose.iter().filter(|c| c.iter().all(|id| !dropped.contains(id))).cloned().collect(),
        identity: raw.identity.iter().filter(|(_, a)| !dropped.contains(*a)).map(|(o, a)| (o.clone(), a.clone())).collect(),
        inverse: raw
            .inverse
            .iter()
            .filter(|(a, b)| !dropped.contains(*a) && !dropped.contains(*b))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect(),
    }
}

fn without_object(raw: &RawGroupoid, object: &str) -> RawGroupoid {
    let dropped = raw.arrows.iter().filter(|a| a.src == object || a.tgt == object).map(|a| a.id.clone()).collect();
    let mut out = without_arrows(raw, &dropped);
    out.objects.retain(|o| o != object);
    out.identity.remove(object);
    out
}

/// Deletes objects, then arrows, one at a time while the same axiom still
/// fails. Returns the input unchanged if it is valid.
pub fn shrink_groupoid(raw: &RawGroupoid) -> RawGroupoid {
    let Some(axiom) = failing_axiom(raw) else {
        return raw.clone();
    };
    let still_fails = |r: &RawGroupoid| failing_axiom(r).as_deref() == Some(axiom.as_str());
    let mut current = raw.clone();
    let mut progress = true;
    while progress {
        progress = false;
        for o in current.objects.clone() {
            let candidate = without_object(&current, &o);
            if still_fails(&candidate) {
                current = candidate;
                progress = true;
            }
        }
        for a in current.arrows.clone() {
            let candidate = without_arrows(&current, &HashSet::from([a.id.clone()]));
            if still_fails(&candidate) {
                current = candidate;
                progress = true;
            }
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn corrupted_pair_groupoid_shrinks() {
        let mut raw = FiniteGroupoid::pair_groupoid(&["a", "b", "c", "d"]).to_raw();
        let bad = raw.compose.iter().position(|c| c[0] != c[1]).unwrap();
        let result = raw.compose[bad][2].clone();
        let other = raw.arrows.iter().find(|a| a.id != result).unwrap().id.clone();
        raw.compose[bad][2] = other;
        let shrunk = shrink_groupoid(&raw);
        assert!(!validate_groupoid(&shrunk).unwrap().ok);
        assert!(shrunk.objects.len() < raw.objects.len());
        assert!(shrunk.arrows.len() < raw.arrows.len());
    }

    #[test]
    fn valid_tables_are_left_alone() {
        let raw = FiniteGroupoid::pair_groupoid(&["a", "b"]).to_raw();
        assert_eq!(shrink_groupoid(&raw), raw);
    }
}
