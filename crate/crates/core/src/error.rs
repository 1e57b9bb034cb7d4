use thiserror::Error;

/// Failure classes shared by every operation in the crate.
///
/// The three variants map one-to-one onto the report statuses
/// `input_error`, `contract_error` and `numerical_failure`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KreinError {
    /// Malformed or dimensionally inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input that violates a precondition (for example a
    /// matrix that is not pseudo-hermitian).
    #[error("contract error: {0}")]
    Contract(String),
    /// A numerical step could not reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl KreinError {
    pub fn input(msg: impl Into<String>) -> Self {
        KreinError::Input(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        KreinError::Contract(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        KreinError::Numerical(msg.into())
    }

    /// Prefix the message with context, keeping the variant.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            KreinError::Input(m) => KreinError::Input(format!("{ctx}: {m}")),
            KreinError::Contract(m) => KreinError::Contract(format!("{ctx}: {m}")),
            KreinError::Numerical(m) => KreinError::Numerical(format!("{ctx}: {m}")),
        }
    }
}

pub type Result<T, E = KreinError> = std::result::Result<T, E>;
