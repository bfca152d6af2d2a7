use thiserror::Error;

/// Which of the two absorbing-rich cases blocked a partition derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BlockingCase {
    #[serde(rename = "case_a")]
    CaseA,
    #[serde(rename = "case_b")]
    CaseB,
}

impl std::fmt::Display for BlockingCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockingCase::CaseA => f.write_str("case (a)"),
            BlockingCase::CaseB => f.write_str("case (b)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("exact arithmetic overflow: {0}")]
    Overflow(String),
    #[error("parity certificate not applicable: {0}")]
    CertificateNotApplicable(String),
    #[error("partition derivation not applicable: {0} holds")]
    CaseHolds(BlockingCase),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
