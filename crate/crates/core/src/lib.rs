//! Finite groupoids and their Morita calculus.
//!
//! Everything here works over finite (discrete) groupoids, where weak
//! equivalences, pullbacks, anafunctors and their 2-cells are all exactly
//! computable. Values are immutable once built and every operation is a pure
//! function, so they can be shared freely across threads.

pub mod equivariant;
pub mod error;
pub mod groupoid;
pub mod localization;
pub mod morita;
pub mod report;
pub mod workbench;

pub use error::{Error, Result};
pub use groupoid::action::{action_groupoid, ActionGroupoid};
pub use groupoid::functor::{compose_functors, validate_functor, Functor};
pub use groupoid::group::FiniteGroup;
pub use groupoid::iso::{groupoid_iso_search, IsoOutcome};
pub use groupoid::natural::{vertical_compose_nat, validate_nat_trans, whisker, NaturalTransformation, Side};
pub use groupoid::{validate_groupoid, Arr, FiniteGroupoid, Obj, RawGroupoid};
pub use report::{ValidationReport, Violation};
