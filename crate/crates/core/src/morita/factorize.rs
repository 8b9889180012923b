use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupoid::functor::{compose_unchecked, Functor};
use crate::groupoid::natural::{validate_nat_trans, whisker_unchecked, NaturalTransformation, Side};
use crate::groupoid::FiniteGroupoid;
use crate::morita::equivalence::{weak_equivalence_report, FfInverse};
use crate::morita::pullback::weak_pullback;

/// Given a fully faithful `φ: G → H` and `η: φψ ⇒ φψ'`, the unique `η'`
/// with `φη' = η`.
pub fn ff_factorize(
    phi: &Functor,
    psi: &Functor,
    psi_prime: &Functor,
    eta: &NaturalTransformation,
) -> Result<NaturalTransformation> {
    let inv = FfInverse::new(phi)?;
    ff_factorize_with(&inv, phi, psi, psi_prime, eta)
}

/// As [`ff_factorize`] with a precomputed `Ff(φ)⁻¹`.
pub fn ff_factorize_with(
    inv: &FfInverse,
    phi: &Functor,
    psi: &Functor,
    psi_prime: &Functor,
    eta: &NaturalTransformation,
) -> Result<NaturalTransformation> {
    if psi.cod != phi.dom || !psi.parallel(psi_prime) {
        return Err(Error::mismatch("ψ and ψ' must be parallel functors into the domain of φ"));
    }
    if eta.source != compose_unchecked(phi, psi) || eta.target != compose_unchecked(phi, psi_prime) {
        return Err(Error::mismatch("η must run from φψ to φψ'"));
    }
    let report = validate_nat_trans(eta);
    if !report.ok {
        return Err(Error::Invalid { what: "transformation".into(), report });
    }
    let k = &psi.dom;
    let mut components = Vec::with_capacity(k.object_count());
    for z in 0..k.object_count() {
        let lifted = inv.lift(psi.obj(z), psi_prime.obj(z), eta.component(z)).ok_or_else(|| {
            Error::obligation("fully faithful lift", format!("no arrow over component at {}", k.object_id(z)))
        })?;
        components.push(lifted);
    }
    let result = NaturalTransformation { source: psi.clone(), target: psi_prime.clone(), components };
    if whisker_unchecked(&result, phi, Side::Left).components != eta.components {
        return Err(Error::obligation("φη' = η", "whiskered lift differs from η"));
    }
    let report = validate_nat_trans(&result);
    if !report.ok {
        return Err(Error::obligation("lift natural", report.to_string()));
    }
    Ok(result)
}

/// Given an ssw `φ: G → H` and `η: ψφ ⇒ ψ'φ`, the unique `η'` with
/// `η'φ = η`.
pub fn coff_factorize(
    phi: &Functor,
    psi: &Functor,
    psi_prime: &Functor,
    eta: &NaturalTransformation,
) -> Result<NaturalTransformation> {
    let report = weak_equivalence_report(phi);
    if !report.is_ssw() {
        return Err(Error::precondition("coff_factorize needs an ssw functor"));
    }
    coff_factorize_unchecked(phi, psi, psi_prime, eta)
}

/// As [`coff_factorize`] without re-deciding that `φ` is ssw; object
/// surjectivity is still required to fill every component.
pub(crate) fn coff_factorize_unchecked(
    phi: &Functor,
    psi: &Functor,
    psi_prime: &Functor,
    eta: &NaturalTransformation,
) -> Result<NaturalTransformation> {
    if psi.dom != phi.cod || !psi.parallel(psi_prime) {
        return Err(Error::mismatch("ψ and ψ' must be parallel functors out of the codomain of φ"));
    }
    if eta.source != compose_unchecked(psi, phi) || eta.target != compose_unchecked(psi_prime, phi) {
        return Err(Error::mismatch("η must run from ψφ to ψ'φ"));
    }
    let h = &phi.cod;
    let mut components: Vec<Option<usize>> = vec![None; h.object_count()];
    for x in 0..phi.dom.object_count() {
        let y = phi.obj(x);
        let c = eta.component(x);
        match components[y] {
            None => components[y] = Some(c),
            Some(prev) if prev != c => {
                return Err(Error::FiberDisagreement {
                    object: h.object_id(y).to_string(),
                    detail: format!(
                        "{} vs {}",
                        psi.cod.arrow_id(prev),
                        psi.cod.arrow_id(c)
                    ),
                });
            }
            Some(_) => {}
        }
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(y, c)| c.ok_or_else(|| Error::precondition(format!("empty fiber over {}", h.object_id(y)))))
        .collect::<Result<Vec<_>>>()?;
    let result = NaturalTransformation { source: psi.clone(), target: psi_prime.clone(), components };
    let report = validate_nat_trans(&result);
    if !report.ok {
        return Err(Error::obligation("descended transformation natural", report.to_string()));
    }
    if whisker_unchecked(&result, phi, Side::Right).components != eta.components {
        return Err(Error::obligation("η'φ = η", "restriction differs from η"));
    }
    Ok(result)
}

/// `(K, ψ, σ, η)` with `ψ: K → H` ssw, `σ: K → G` and `η: φσ ⇒ ψ`.
#[derive(Debug, Clone)]
pub struct LocallySplit {
    pub apex: Arc<FiniteGroupoid>,
    pub psi: Functor,
    pub sigma: Functor,
    pub eta: NaturalTransformation,
}

pub fn locally_split_witness(phi: &Functor) -> Result<LocallySplit> {
    if !weak_equivalence_report(phi).is_weak_equivalence() {
        return Err(Error::precondition("locally split witness needs a weak equivalence"));
    }
    let wp = weak_pullback(phi, &Functor::identity(&phi.cod))?;
    if !weak_equivalence_report(&wp.pr3).is_ssw() {
        return Err(Error::obligation("ψ ssw", "pr3 is not ssw"));
    }
    let report = validate_nat_trans(&wp.pr2);
    if !report.ok {
        return Err(Error::obligation("η natural", report.to_string()));
    }
    Ok(LocallySplit { apex: wp.apex, psi: wp.pr3, sigma: wp.pr1, eta: wp.pr2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::action::action_groupoid;
    use crate::groupoid::group::FiniteGroup;

    fn swap_to_terminal() -> Functor {
        let a = action_groupoid(Arc::new(FiniteGroup::cyclic(2)), vec!["0".into(), "1".into()], vec![0, 1, 1, 0])
            .unwrap();
        Functor::new(a.groupoid, Arc::new(FiniteGroupoid::terminal()), vec![0, 0], vec![0; 4]).unwrap()
    }

    #[test]
    fn ff_through_identity_is_identity() {
        let phi = swap_to_terminal();
        let g = phi.dom.clone();
        let id = Functor::identity(&g);
        let eta = NaturalTransformation::identity(&compose_unchecked(&id, &id));
        let out = ff_factorize(&id, &id, &id, &eta).unwrap();
        assert_eq!(out.components, eta.components);
    }

    #[test]
    fn ff_recovers_unique_lift_over_collapse() {
        // φ collapses the swap groupoid; a transformation between the two
        // constant-object functors from the terminal groupoid lifts uniquely.
        let phi = swap_to_terminal();
        let t = Arc::new(FiniteGroupoid::terminal());
        let at0 = Functor::new(t.clone(), phi.dom.clone(), vec![0], vec![0]).unwrap();
        let at1 = Functor::new(t.clone(), phi.dom.clone(), vec![1], vec![1]).unwrap();
        let eta = NaturalTransformation {
            source: compose_unchecked(&phi, &at0),
            target: compose_unchecked(&phi, &at1),
            components: vec![0],
        };
        let lift = ff_factorize(&phi, &at0, &at1, &eta).unwrap();
        // The only arrow 0 -> 1 is (1,0), index 2.
        assert_eq!(lift.components, vec![2]);
    }

    #[test]
    fn coff_rejects_non_ssw() {
        let t = Arc::new(FiniteGroupoid::terminal());
        let g = Arc::new(FiniteGroupoid::pair_groupoid(&["a", "b"]));
        let incl = Functor::new(t.clone(), g.clone(), vec![0], vec![0]).unwrap();
        let id = Functor::identity(&g);
        let eta = NaturalTransformation::identity(&incl);
        assert!(matches!(coff_factorize(&incl, &id, &id, &eta), Err(Error::Precondition(_))));
    }

    #[test]
    fn locally_split_for_swap() {
        let w = locally_split_witness(&swap_to_terminal()).unwrap();
        assert_eq!(w.apex.object_count(), 2);
    }
}
