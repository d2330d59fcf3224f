//! The relational data model: relations, attributes, cardinality-typed
//! references, and the identity relation whose tuples correspond
//! one-to-one with process instances.
//!
//! The central query is [`RelationalSchema::find_cardinality`]: the
//! multiplicity with which tuples of one relation map to tuples of
//! another, composed over reference paths. References are traversable in
//! both directions; traversing backward uses the dual cardinality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::ids::RelationName;
use crate::model::{Binding, DataItem, ProcessModel};
use crate::report::{ValidationReport, ViolationKind};

/// Tuple-mapping multiplicity between two relations.
///
/// The value is directional: `OneToMany` between `(R1, R2)` means one
/// tuple of `R1` may map to many tuples of `R2`, while each tuple of `R2`
/// maps back to at most one tuple of `R1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    OneToOne,
    OneToMany,
    ManyToOne,
    ManyToMany,
}

impl Cardinality {
    pub const ALL: [Cardinality; 4] = [
        Cardinality::OneToOne,
        Cardinality::OneToMany,
        Cardinality::ManyToOne,
        Cardinality::ManyToMany,
    ];

    /// The cardinality of the same mapping read in the opposite direction.
    pub fn dual(self) -> Cardinality {
        match self {
            Cardinality::OneToMany => Cardinality::ManyToOne,
            Cardinality::ManyToOne => Cardinality::OneToMany,
            other => other,
        }
    }

    /// The cardinality of `R1 -> R3` given `self: R1 -> R2` and
    /// `then: R2 -> R3`.
    ///
    /// One-to-one is the identity element, many-to-many absorbs, two
    /// at-most-one mappings compose to at-most-one, and mixing the two
    /// directed kinds loses both bounds.
    pub fn compose(self, then: Cardinality) -> Cardinality {
        use Cardinality::*;
        match (self, then) {
            (OneToOne, c) => c,
            (c, OneToOne) => c,
            (ManyToMany, _) | (_, ManyToMany) => ManyToMany,
            (ManyToOne, ManyToOne) => ManyToOne,
            (OneToMany, OneToMany) => OneToMany,
            (ManyToOne, OneToMany) | (OneToMany, ManyToOne) => ManyToMany,
        }
    }

    /// The widest of two cardinalities under the order
    /// `1-1 < {1-m, m-1} < m-m`; mixing `1-m` and `m-1` widens to `m-m`.
    pub fn widen(self, other: Cardinality) -> Cardinality {
        use Cardinality::*;
        match (self, other) {
            (a, b) if a == b => a,
            (OneToOne, c) | (c, OneToOne) => c,
            _ => ManyToMany,
        }
    }

    /// Whether a tuple of the mapped relation can be shared by several
    /// tuples of the target, i.e. the mapping is `1-m` or `m-m`.
    pub fn permits_sharing(self) -> bool {
        matches!(self, Cardinality::OneToMany | Cardinality::ManyToMany)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Cardinality::OneToOne => "1-1",
            Cardinality::OneToMany => "1-m",
            Cardinality::ManyToOne => "m-1",
            Cardinality::ManyToMany => "m-m",
        };
        f.write_str(text)
    }
}

impl FromStr for Cardinality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1-1" => Ok(Cardinality::OneToOne),
            "1-m" => Ok(Cardinality::OneToMany),
            "m-1" => Ok(Cardinality::ManyToOne),
            "m-m" => Ok(Cardinality::ManyToMany),
            other => Err(format!(
                "cardinality must be one of 1-1, 1-m, m-1, m-m (got `{other}`)"
            )),
        }
    }
}

/// A column of a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub is_primary_key: bool,
}

impl AttributeDef {
    pub fn key(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            is_primary_key: true,
        }
    }

    pub fn plain(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            is_primary_key: false,
        }
    }
}

/// A relation (table). Attribute order is meaningful: composite primary
/// keys are tuples of the key attributes in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: RelationName,
    pub attributes: Vec<AttributeDef>,
}

impl Relation {
    pub fn new(
        name: impl Into<RelationName>,
        attributes: impl IntoIterator<Item = AttributeDef>,
    ) -> Self {
        Self {
            name: name.into(),
            attributes: attributes.into_iter().collect(),
        }
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDef> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// Names of the primary-key attributes, in declaration order.
    pub fn primary_key(&self) -> Vec<&str> {
        self.attributes
            .iter()
            .filter(|a| a.is_primary_key)
            .map(|a| a.name.as_str())
            .collect()
    }
}

/// A directed, cardinality-typed association between two relations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReferenceMapping {
    pub from: RelationName,
    pub to: RelationName,
    pub cardinality: Cardinality,
}

impl ReferenceMapping {
    pub fn new(
        from: impl Into<RelationName>,
        to: impl Into<RelationName>,
        cardinality: Cardinality,
    ) -> Self {
        Self {
            from: from.into(),
            to: to.into(),
            cardinality,
        }
    }
}

/// The relational data model paired with a process model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalSchema {
    relations: BTreeMap<RelationName, Relation>,
    references: Vec<ReferenceMapping>,
    identity_relation: RelationName,
}

impl RelationalSchema {
    pub fn new(
        relations: impl IntoIterator<Item = Relation>,
        references: impl IntoIterator<Item = ReferenceMapping>,
        identity_relation: impl Into<RelationName>,
    ) -> Self {
        let mut refs: Vec<ReferenceMapping> = references.into_iter().collect();
        refs.sort();
        Self {
            relations: relations
                .into_iter()
                .map(|r| (r.name.clone(), r))
                .collect(),
            references: refs,
            identity_relation: identity_relation.into(),
        }
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn references(&self) -> &[ReferenceMapping] {
        &self.references
    }

    pub fn relation(&self, name: &RelationName) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn identity_relation(&self) -> &RelationName {
        &self.identity_relation
    }

    /// Checks structural well-formedness: every relation has attributes
    /// and a primary key with unique attribute names, every reference
    /// endpoint resolves, and the identity relation exists.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();

        for relation in self.relations.values() {
            if relation.attributes.is_empty() {
                report.push(
                    ViolationKind::EmptyRelation,
                    format!("relation `{}` has no attributes", relation.name),
                );
                continue;
            }
            if relation.primary_key().is_empty() {
                report.push(
                    ViolationKind::MissingPrimaryKey,
                    format!("relation `{}` has no primary-key attribute", relation.name),
                );
            }
            let mut seen = BTreeMap::new();
            for attr in &relation.attributes {
                if seen.insert(attr.name.as_str(), ()).is_some() {
                    report.push(
                        ViolationKind::DuplicateAttribute,
                        format!(
                            "relation `{}` declares attribute `{}` more than once",
                            relation.name, attr.name
                        ),
                    );
                }
            }
        }

        for reference in &self.references {
            for endpoint in [&reference.from, &reference.to] {
                if !self.relations.contains_key(endpoint) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!(
                            "reference `{} -> {}` names unknown relation `{}`",
                            reference.from, reference.to, endpoint
                        ),
                    );
                }
            }
        }

        if !self.relations.contains_key(&self.identity_relation) {
            report.push(
                ViolationKind::UnknownIdentityRelation,
                format!(
                    "identity relation `{}` is not declared",
                    self.identity_relation
                ),
            );
        }

        report
    }

    /// The relation a data item is stored in: `None` for transient items,
    /// an error for a stored binding that does not resolve (which should
    /// have been caught when the model/schema pair was loaded).
    pub fn find_rel(&self, item: &DataItem) -> Result<Option<&Relation>, Error> {
        match &item.binding {
            Binding::Transient => Ok(None),
            Binding::Stored {
                relation,
                attribute,
            } => {
                let rel = self.relations.get(relation).ok_or_else(|| {
                    Error::UnresolvedBinding {
                        item: item.id.to_string(),
                        relation: relation.to_string(),
                        attribute: attribute.clone(),
                    }
                })?;
                if rel.attribute(attribute).is_none() {
                    return Err(Error::UnresolvedBinding {
                        item: item.id.to_string(),
                        relation: relation.to_string(),
                        attribute: attribute.clone(),
                    });
                }
                Ok(Some(rel))
            }
        }
    }

    /// The cardinality between two relations, composed over reference
    /// paths.
    ///
    /// A relation maps to itself one-to-one. Otherwise every simple path
    /// through the reference graph is composed edge by edge (backward
    /// traversal uses the dual cardinality) and the results are widened
    /// across paths: a mapping is only as narrow as every path allows.
    /// Self-referencing edges never advance a simple path and are skipped.
    pub fn find_cardinality(
        &self,
        from: &RelationName,
        to: &RelationName,
    ) -> Result<Cardinality, Error> {
        for name in [from, to] {
            if !self.relations.contains_key(name) {
                return Err(Error::RelationNotFound(name.to_string()));
            }
        }
        if from == to {
            return Ok(Cardinality::OneToOne);
        }

        let mut adjacency: BTreeMap<&RelationName, Vec<(&RelationName, Cardinality)>> =
            BTreeMap::new();
        for reference in &self.references {
            if reference.from == reference.to {
                continue;
            }
            adjacency
                .entry(&reference.from)
                .or_default()
                .push((&reference.to, reference.cardinality));
            adjacency
                .entry(&reference.to)
                .or_default()
                .push((&reference.from, reference.cardinality.dual()));
        }

        fn search(
            adjacency: &BTreeMap<&RelationName, Vec<(&RelationName, Cardinality)>>,
            here: &RelationName,
            goal: &RelationName,
            composed: Option<Cardinality>,
            visited: &mut Vec<RelationName>,
            widest: &mut Option<Cardinality>,
        ) {
            let Some(edges) = adjacency.get(here) else {
                return;
            };
            for (next, step) in edges {
                let so_far = match composed {
                    None => *step,
                    Some(acc) => acc.compose(*step),
                };
                if *next == goal {
                    *widest = Some(match widest {
                        None => so_far,
                        Some(w) => w.widen(so_far),
                    });
                } else if !visited.contains(next) {
                    visited.push((*next).clone());
                    search(adjacency, next, goal, Some(so_far), visited, widest);
                    visited.pop();
                }
            }
        }

        let mut widest = None;
        let mut visited = vec![from.clone()];
        search(&adjacency, from, to, None, &mut visited, &mut widest);
        widest.ok_or_else(|| Error::UnreachableRelation {
            relation: from.to_string(),
            identity: to.to_string(),
        })
    }

    /// [`Self::find_cardinality`] against the identity relation.
    pub fn cardinality_with_identity(&self, relation: &RelationName) -> Result<Cardinality, Error> {
        self.find_cardinality(relation, &self.identity_relation)
    }
}

/// Checks that every stored data item of the model names a relation and
/// attribute that exist in the schema. Transient items are exempt; the
/// schema may also carry relations and attributes the process never
/// touches.
pub fn check_bindings(model: &ProcessModel, schema: &RelationalSchema) -> ValidationReport {
    let mut report = ValidationReport::new();
    for item in model.data_items() {
        if let Binding::Stored {
            relation,
            attribute,
        } = &item.binding
        {
            let resolved = schema
                .relation(relation)
                .and_then(|r| r.attribute(attribute));
            if resolved.is_none() {
                report.push(
                    ViolationKind::UnresolvedBinding,
                    format!(
                        "data item `{}` is bound to `{}.{}`, which does not exist",
                        item.id, relation, attribute
                    ),
                );
            }
        }
    }
    report
}
