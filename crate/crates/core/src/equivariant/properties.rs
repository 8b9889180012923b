use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::groupoid::action::ActionGroupoid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Free,
    LocallyFree,
    Transitive,
    Effective,
    Compact,
    Discrete,
    Proper,
    Orbifold,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Free,
        Property::LocallyFree,
        Property::Transitive,
        Property::Effective,
        Property::Compact,
        Property::Discrete,
        Property::Proper,
        Property::Orbifold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Free => "free",
            Property::LocallyFree => "locally_free",
            Property::Transitive => "transitive",
            Property::Effective => "effective",
            Property::Compact => "compact",
            Property::Discrete => "discrete",
            Property::Proper => "proper",
            Property::Orbifold => "orbifold",
        }
    }

    /// Automatically true for finite groups acting on finite sets.
    pub fn trivial_in_finite_setting(self) -> bool {
        !matches!(self, Property::Free | Property::Transitive | Property::Effective)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().replace('-', "_");
        Property::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::Precondition(format!("unknown property `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub trivial_in_finite_setting: bool,
}

/// Verdicts for the requested properties, in the order of [`Property::ALL`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub verdicts: Vec<(Property, Verdict)>,
}

impl PropertyReport {
    pub fn get(&self, p: Property) -> Option<&Verdict> {
        self.verdicts.iter().find(|(q, _)| *q == p).map(|(_, v)| v)
    }

    pub fn holds(&self, p: Property) -> Option<bool> {
        self.get(p).map(|v| v.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.holds)
    }
}

pub fn property_report(a: &ActionGroupoid, requested: &[Property]) -> PropertyReport {
    let mut verdicts = Vec::new();
    for p in Property::ALL {
        if !requested.contains(&p) {
            continue;
        }
        let witness = match p {
            Property::Free => free_witness(a),
            Property::Transitive => transitive_witness(a),
            Property::Effective => effective_witness(a),
            _ => None,
        };
        verdicts.push((
            p,
            Verdict { holds: witness.is_none(), witness, trivial_in_finite_setting: p.trivial_in_finite_setting() },
        ));
    }
    PropertyReport { verdicts }
}

pub fn full_property_report(a: &ActionGroupoid) -> PropertyReport {
    property_report(a, &Property::ALL)
}

fn free_witness(a: &ActionGroupoid) -> Option<String> {
    let e = a.group.unit();
    (0..a.carrier_size()).find_map(|x| {
        a.stabilizer(x)
            .into_iter()
            .find(|&g| g != e)
            .map(|g| format!("{} fixes {}", a.group.element_id(g), a.carrier[x]))
    })
}

fn transitive_witness(a: &ActionGroupoid) -> Option<String> {
    if a.carrier_size() == 0 {
        return Some("empty carrier has no orbit".into());
    }
    let (_, reps) = a.orbits();
    (reps.len() > 1).then(|| format!("{} and {} lie in different orbits", a.carrier[reps[0]], a.carrier[reps[1]]))
}

fn effective_witness(a: &ActionGroupoid) -> Option<String> {
    let e = a.group.unit();
    (0..a.group.order())
        .find(|&g| g != e && (0..a.carrier_size()).all(|x| a.act(g, x) == x))
        .map(|g| format!("{} fixes every point", a.group.element_id(g)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::group::FiniteGroup;

    #[test]
    fn swap_is_free_transitive_effective() {
        let a = action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
            .unwrap();
        let r = full_property_report(&a);
        assert!(r.all_hold());
        assert!(r.get(Property::Compact).unwrap().trivial_in_finite_setting);
    }

    #[test]
    fn trivial_action_on_point_is_not_free() {
        let a = action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["*".into()], vec![0, 0]).unwrap();
        let r = property_report(&a, &[Property::Free, Property::Effective]);
        assert_eq!(r.holds(Property::Free), Some(false));
        assert_eq!(r.holds(Property::Effective), Some(false));
        assert!(r.get(Property::Transitive).is_none());
        assert!(r.get(Property::Free).unwrap().witness.as_ref().unwrap().contains("fixes"));
    }

    #[test]
    fn parse_names() {
        assert_eq!("locally-free".parse::<Property>().unwrap(), Property::LocallyFree);
        assert!("shiny".parse::<Property>().is_err());
    }
}
