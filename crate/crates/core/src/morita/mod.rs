//! Weak equivalences, strict and weak pullbacks, the two factorization
//! lemmas, and a skeleton-based Morita oracle.

pub mod equivalence;
pub mod factorize;
pub mod pullback;
pub mod skeleton;

pub use equivalence::{is_ssw, is_weak_equivalence, weak_equivalence_report, FfInverse, WeReport};
pub use factorize::{coff_factorize, ff_factorize, locally_split_witness, LocallySplit};
pub use pullback::{strict_pullback, weak_pullback, StrictPullback, WeakPullback};
pub use skeleton::{morita_oracle, skeleton_invariant, SkeletonInvariant};
