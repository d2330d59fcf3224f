//! Analysis-level errors.

use thiserror::Error;

use crate::report::ValidationReport;

/// Errors raised by analysis and oracle operations.
///
/// Parse-time problems have their own type, [`crate::formats::ParseError`];
/// this enum covers everything that can go wrong once typed objects exist.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element not found: {0}")]
    ElementNotFound(String),

    #[error("unknown data item: {0}")]
    UnknownDataItem(String),

    #[error("relation not found: {0}")]
    RelationNotFound(String),

    #[error("data item `{item}` has an unresolved binding to `{relation}.{attribute}`")]
    UnresolvedBinding {
        item: String,
        relation: String,
        attribute: String,
    },

    #[error("relation `{relation}` is unreachable from identity relation `{identity}`")]
    UnreachableRelation { relation: String, identity: String },

    #[error("data item `{0}` is transient and cannot be shared across instances")]
    NotShareable(String),

    #[error("{subject} failed validation:\n{report}")]
    Validation {
        subject: String,
        report: ValidationReport,
    },

    #[error("unsatisfiable generator bounds: {0}")]
    InvalidBounds(String),
}

impl Error {
    pub(crate) fn validation(subject: impl Into<String>, report: ValidationReport) -> Self {
        Self::Validation {
            subject: subject.into(),
            report,
        }
    }
}
