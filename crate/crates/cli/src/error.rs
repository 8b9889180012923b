use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] morita_core::Error),
}

impl CliError {
    pub fn parse(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }

    pub fn schema(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }

    /// 1 for a definite negative found while checking a construction, 2 for
    /// anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        use morita_core::Error as E;
        match self {
            CliError::Core(E::Invalid { .. } | E::Obligation { .. } | E::FiberDisagreement { .. } | E::ActionAxiom { .. }) => 1,
            _ => 2,
        }
    }
}

