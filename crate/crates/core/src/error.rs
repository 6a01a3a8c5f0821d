use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported coefficient field: {0}")]
    UnsupportedField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
    #[error("unsupported ideal class: {0}")]
    UnsupportedIdealClass(String),
    #[error("unsupported module class: {0}")]
    UnsupportedModuleClass(String),
    #[error("no avoiding element found within a budget of {budget} candidates")]
    SearchBudgetExceeded { budget: usize },
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }

    /// Failures meaning "outside the supported classes" rather than bad input.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedIdealClass(_)
                | Error::UnsupportedModuleClass(_)
                | Error::Undetermined(_)
                | Error::SearchBudgetExceeded { .. }
                | Error::EnumerationBudget(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
