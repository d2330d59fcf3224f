//! Validation reporting.
//!
//! Structural problems are collected into a [`ValidationReport`] instead of
//! failing on the first finding, so a caller can show everything that is
//! wrong with a document at once.

use std::fmt;

/// What kind of problem a [`Violation`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// A cross-reference names an element that does not exist.
    DanglingReference,
    /// The model declares no data items at all.
    EmptyDataItemSet,
    /// An input/output triple with neither input nor output.
    DegenerateIao,
    /// A routing constraint with an empty support set.
    EmptyConstraintSupport,
    /// A routing constraint guarding no control flows.
    EmptyGuardedFlows,
    /// A relation with no attributes.
    EmptyRelation,
    /// A relation without any primary-key attribute.
    MissingPrimaryKey,
    /// Two attributes of one relation share a name.
    DuplicateAttribute,
    /// The designated identity relation does not exist.
    UnknownIdentityRelation,
    /// A stored data item points at a relation or attribute that is not
    /// in the schema.
    UnresolvedBinding,
    /// Two process instances in one log share a case id.
    DuplicateCaseId,
    /// A trace entry names a node that is not an activity of the model.
    UnknownTraceActivity,
    /// A data-item instance names an item that is not in the model.
    UnknownDataItem,
    /// A stored data item was instantiated without a key value, or with a
    /// key of the wrong arity.
    MissingKeyValue,
    /// A transient data item was instantiated with a key value.
    UnexpectedKeyValue,
    /// The log claims to belong to a different model.
    ModelNameMismatch,
    /// An identity-relation attribute is held by more than one case under
    /// the same key, contradicting the case-to-tuple bijection.
    SharedIdentityAttribute,
    /// A non-trivial sharing set exists although the item's relation maps
    /// to the identity relation one-to-one or many-to-one.
    NarrowSharedCardinality,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Self::DanglingReference => "dangling reference",
            Self::EmptyDataItemSet => "empty data-item set",
            Self::DegenerateIao => "degenerate input/output triple",
            Self::EmptyConstraintSupport => "empty constraint support",
            Self::EmptyGuardedFlows => "empty guarded-flow set",
            Self::EmptyRelation => "relation without attributes",
            Self::MissingPrimaryKey => "relation without a primary key",
            Self::DuplicateAttribute => "duplicate attribute",
            Self::UnknownIdentityRelation => "unknown identity relation",
            Self::UnresolvedBinding => "unresolved binding",
            Self::DuplicateCaseId => "duplicate case id",
            Self::UnknownTraceActivity => "unknown trace activity",
            Self::UnknownDataItem => "unknown data item",
            Self::MissingKeyValue => "missing or malformed key value",
            Self::UnexpectedKeyValue => "unexpected key value",
            Self::ModelNameMismatch => "model name mismatch",
            Self::SharedIdentityAttribute => "shared identity-relation attribute",
            Self::NarrowSharedCardinality => "non-trivial sharing with narrow cardinality",
        };
        f.write_str(text)
    }
}

/// A single validation finding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// The outcome of a validation pass. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    /// Count of findings of one kind.
    pub fn count_of(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
