//! Identifier newtypes shared across the model, schema, and instance layers.

use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! define_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self::new(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

define_id! {
    /// Identifier of a control-flow node (an activity or a gateway).
    ///
    /// Activities and gateways share one id space: a control flow may
    /// connect any two nodes regardless of kind.
    NodeId
}

define_id! {
    /// Identifier of a control flow (an edge between two nodes).
    FlowId
}

define_id! {
    /// Identifier of a data item.
    ItemId
}

define_id! {
    /// Identifier of a routing constraint.
    ConstraintId
}

define_id! {
    /// Name of a relation (table) in the relational data model.
    RelationName
}
