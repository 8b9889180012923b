//! Spans between groupoids, their composites, and the 2-cell calculus of
//! anafunctors.

pub mod span;
pub mod two_cell;

pub use span::{
    anafunctorify, compose_anafunctors, compose_generalized, identity_anafunctor, left_unitor, right_unitor,
    strictify_composition, Anafunctor, GeneralizedMorphism,
};
pub use span::doubling;
pub use two_cell::{
    embed, identity_diagram, identity_two_cell, normalize_two_cell, perturb, reverse, two_cells_equal, validate_two_cell,
    vertical_compose_ana, AnaTwoCell, TwoCellDiagram,
};
