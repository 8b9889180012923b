//! Action groupoids of finite groups: properties, equivariant functors and
//! their factorizations, pullbacks, and bibundle anafunctors.

pub mod balanced;
pub mod bibundle;
pub mod decompose;
pub mod functor;
pub mod properties;
pub mod pullback;
pub mod quotient;

pub use balanced::{balanced_product, restrict_action, BalancedProduct};
pub use bibundle::{equivariant_anafunctorify, EquivariantAnafunctor};
pub use decompose::{decompose, DecompositionResult};
pub use functor::{as_equivariant, EquivariantFunctor};
pub use properties::{full_property_report, property_report, Property, PropertyReport, Verdict};
pub use pullback::{
    equivariant_strict_pullback, equivariant_weak_pullback, EquivariantStrictPullback, EquivariantWeakPullback,
};
pub use quotient::{check_free, quotient_action, quotient_factorization, QuotientFactorization};
