use thiserror::Error;

use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table `{table}` references undeclared id `{id}`")]
    DanglingId { table: String, id: String },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("invalid {what}: {report}")]
    Invalid { what: String, report: ValidationReport },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("action axiom violated at (g1={g1}, g2={g2}, x={x})")]
    ActionAxiom { g1: String, g2: String, x: String },

    #[error("not equivariant: {0}")]
    NotEquivariant(String),

    #[error("transformation not well defined on the fiber over `{object}`: {detail}")]
    FiberDisagreement { object: String, detail: String },

    #[error("obligation `{obligation}` failed: {detail}")]
    Obligation { obligation: String, detail: String },
}

impl Error {
    pub(crate) fn obligation(obligation: &str, detail: impl Into<String>) -> Self {
        Error::Obligation { obligation: obligation.to_string(), detail: detail.into() }
    }

    pub(crate) fn precondition(detail: impl Into<String>) -> Self {
        Error::Precondition(detail.into())
    }

    pub(crate) fn mismatch(detail: impl Into<String>) -> Self {
        Error::Mismatch(detail.into())
    }
}
