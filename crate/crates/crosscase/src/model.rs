//! The data-aware process model: activities, gateways, control flows,
//! data items, routing constraints, and input/output triples.
//!
//! A model is immutable once built. Structural well-formedness is checked
//! by [`ProcessModel::validate`]; graph queries such as
//! [`ProcessModel::reachable_activity_set`] are pure and may be called
//! from any number of threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::ids::{ConstraintId, FlowId, ItemId, NodeId, RelationName};
use crate::report::{ValidationReport, ViolationKind};

/// Where a data item lives: in a relation of the companion data model, or
/// only in the process's working memory.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Binding {
    Stored {
        relation: RelationName,
        attribute: String,
    },
    Transient,
}

impl Binding {
    pub fn stored(relation: impl Into<RelationName>, attribute: impl Into<String>) -> Self {
        Self::Stored {
            relation: relation.into(),
            attribute: attribute.into(),
        }
    }

    pub fn is_stored(&self) -> bool {
        matches!(self, Self::Stored { .. })
    }
}

/// A data item read, written, or tested by the process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataItem {
    pub id: ItemId,
    pub name: String,
    pub binding: Binding,
}

/// A unit of work in the process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Activity {
    pub id: NodeId,
    pub name: String,
}

/// Split/join semantics of a gateway.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GatewayType {
    Xor,
    And,
}

impl fmt::Display for GatewayType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Xor => f.write_str("xor"),
            Self::And => f.write_str("and"),
        }
    }
}

/// A routing node. Reachability treats gateways as transparent; their
/// type only matters to the instance simulator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gateway {
    pub id: NodeId,
    pub gateway_type: GatewayType,
}

/// A directed control-flow edge between two nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlFlow {
    pub id: FlowId,
    pub source: NodeId,
    pub target: NodeId,
}

/// A data-predicated routing decision guarding one or more control flows.
///
/// `support` is the set of data items the predicate reads. The expression
/// itself is kept as opaque text; the analysis only uses the support set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingConstraint {
    pub id: ConstraintId,
    pub expression: Option<String>,
    pub support: BTreeSet<ItemId>,
    pub guarded_flows: BTreeSet<FlowId>,
}

/// An (input, activity, output) data flow. Either side may be absent:
/// an input consumed without a direct product, or an output produced
/// without a concrete input. Both absent carries no information and is
/// rejected at parse time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IaoTriple {
    pub input: Option<ItemId>,
    pub activity: NodeId,
    pub output: Option<ItemId>,
}

impl IaoTriple {
    pub fn new(input: Option<ItemId>, activity: NodeId, output: Option<ItemId>) -> Self {
        Self {
            input,
            activity,
            output,
        }
    }
}

/// An element a reachability query can start from.
#[derive(Clone, Copy, Debug)]
pub enum ElementRef<'a> {
    Activity(&'a NodeId),
    Constraint(&'a ConstraintId),
}

/// The data-aware process model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessModel {
    name: String,
    activities: BTreeMap<NodeId, Activity>,
    gateways: BTreeMap<NodeId, Gateway>,
    flows: BTreeMap<FlowId, ControlFlow>,
    routing_constraints: BTreeMap<ConstraintId, RoutingConstraint>,
    data_items: BTreeMap<ItemId, DataItem>,
    iao: BTreeSet<IaoTriple>,
    /// Forward adjacency over `flows`, derived at construction.
    successors: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl ProcessModel {
    pub fn builder(name: impl Into<String>) -> ProcessModelBuilder {
        ProcessModelBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn activities(&self) -> impl Iterator<Item = &Activity> {
        self.activities.values()
    }

    pub fn gateways(&self) -> impl Iterator<Item = &Gateway> {
        self.gateways.values()
    }

    pub fn flows(&self) -> impl Iterator<Item = &ControlFlow> {
        self.flows.values()
    }

    pub fn routing_constraints(&self) -> impl Iterator<Item = &RoutingConstraint> {
        self.routing_constraints.values()
    }

    pub fn data_items(&self) -> impl Iterator<Item = &DataItem> {
        self.data_items.values()
    }

    pub fn iao_triples(&self) -> impl Iterator<Item = &IaoTriple> {
        self.iao.iter()
    }

    pub fn activity(&self, id: &NodeId) -> Option<&Activity> {
        self.activities.get(id)
    }

    pub fn gateway(&self, id: &NodeId) -> Option<&Gateway> {
        self.gateways.get(id)
    }

    pub fn flow(&self, id: &FlowId) -> Option<&ControlFlow> {
        self.flows.get(id)
    }

    pub fn routing_constraint(&self, id: &ConstraintId) -> Option<&RoutingConstraint> {
        self.routing_constraints.get(id)
    }

    pub fn data_item(&self, id: &ItemId) -> Option<&DataItem> {
        self.data_items.get(id)
    }

    pub fn is_activity(&self, id: &NodeId) -> bool {
        self.activities.contains_key(id)
    }

    pub fn is_node(&self, id: &NodeId) -> bool {
        self.activities.contains_key(id) || self.gateways.contains_key(id)
    }

    pub fn successors(&self, id: &NodeId) -> impl Iterator<Item = &NodeId> {
        self.successors.get(id).into_iter().flatten()
    }

    /// Outgoing flows of a node, in flow-id order.
    pub fn outgoing_flows(&self, id: &NodeId) -> Vec<&ControlFlow> {
        self.flows.values().filter(|f| &f.source == id).collect()
    }

    /// Nodes without any incoming flow, in id order.
    pub fn entry_nodes(&self) -> Vec<&NodeId> {
        let targets: BTreeSet<&NodeId> = self.flows.values().map(|f| &f.target).collect();
        self.activities
            .keys()
            .chain(self.gateways.keys())
            .filter(|n| !targets.contains(n))
            .collect()
    }

    /// Checks the structural well-formedness rules: all cross-references
    /// resolve, the data-item set is non-empty, constraints have non-empty
    /// support and guard at least one flow, and no input/output triple is
    /// degenerate. Returns an empty report exactly when the model is
    /// well-formed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();

        if self.data_items.is_empty() {
            report.push(
                ViolationKind::EmptyDataItemSet,
                format!("model `{}` declares no data items", self.name),
            );
        }

        for flow in self.flows.values() {
            for endpoint in [&flow.source, &flow.target] {
                if !self.is_node(endpoint) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!("flow `{}` references unknown node `{}`", flow.id, endpoint),
                    );
                }
            }
        }

        for rc in self.routing_constraints.values() {
            if rc.support.is_empty() {
                report.push(
                    ViolationKind::EmptyConstraintSupport,
                    format!("routing constraint `{}` has an empty support set", rc.id),
                );
            }
            if rc.guarded_flows.is_empty() {
                report.push(
                    ViolationKind::EmptyGuardedFlows,
                    format!("routing constraint `{}` guards no control flows", rc.id),
                );
            }
            for item in &rc.support {
                if !self.data_items.contains_key(item) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!(
                            "routing constraint `{}` supports unknown data item `{}`",
                            rc.id, item
                        ),
                    );
                }
            }
            for flow in &rc.guarded_flows {
                if !self.flows.contains_key(flow) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!("routing constraint `{}` guards unknown flow `{}`", rc.id, flow),
                    );
                }
            }
        }

        for triple in &self.iao {
            if triple.input.is_none() && triple.output.is_none() {
                report.push(
                    ViolationKind::DegenerateIao,
                    format!(
                        "input/output triple at activity `{}` has neither input nor output",
                        triple.activity
                    ),
                );
            }
            if !self.activities.contains_key(&triple.activity) {
                report.push(
                    ViolationKind::DanglingReference,
                    format!(
                        "input/output triple references unknown activity `{}`",
                        triple.activity
                    ),
                );
            }
            for item in [&triple.input, &triple.output].into_iter().flatten() {
                if !self.data_items.contains_key(item) {
                    report.push(
                        ViolationKind::DanglingReference,
                        format!(
                            "input/output triple at activity `{}` references unknown data item `{}`",
                            triple.activity, item
                        ),
                    );
                }
            }
        }

        report
    }

    /// The set of activities reachable from a model element by following
    /// control flows forward.
    ///
    /// For an activity the result contains the activity itself plus every
    /// activity downstream of it. For a routing constraint the traversal
    /// starts at the target node of each guarded flow (the target counts
    /// when it is an activity). Gateways are traversed transparently and
    /// never appear in the result. Cycles terminate via a visited set.
    pub fn reachable_activity_set(&self, element: ElementRef<'_>) -> Result<BTreeSet<NodeId>, Error> {
        let seeds: Vec<NodeId> = match element {
            ElementRef::Activity(id) => {
                if !self.activities.contains_key(id) {
                    return Err(Error::ElementNotFound(id.to_string()));
                }
                vec![id.clone()]
            }
            ElementRef::Constraint(id) => {
                let rc = self
                    .routing_constraints
                    .get(id)
                    .ok_or_else(|| Error::ElementNotFound(id.to_string()))?;
                rc.guarded_flows
                    .iter()
                    .filter_map(|f| self.flows.get(f))
                    .map(|f| f.target.clone())
                    .collect()
            }
        };

        let mut visited: BTreeSet<NodeId> = BTreeSet::new();
        let mut queue: VecDeque<NodeId> = seeds.into();
        while let Some(node) = queue.pop_front() {
            if !visited.insert(node.clone()) {
                continue;
            }
            for next in self.successors(&node) {
                if !visited.contains(next) {
                    queue.push_back(next.clone());
                }
            }
        }

        Ok(visited
            .into_iter()
            .filter(|n| self.activities.contains_key(n))
            .collect())
    }

    /// Convenience wrapper for [`Self::reachable_activity_set`] with an
    /// activity argument.
    pub fn reachable_from_activity(&self, id: &NodeId) -> Result<BTreeSet<NodeId>, Error> {
        self.reachable_activity_set(ElementRef::Activity(id))
    }

    /// Convenience wrapper for [`Self::reachable_activity_set`] with a
    /// routing-constraint argument.
    pub fn reachable_from_constraint(&self, id: &ConstraintId) -> Result<BTreeSet<NodeId>, Error> {
        self.reachable_activity_set(ElementRef::Constraint(id))
    }
}

/// Incremental construction of a [`ProcessModel`].
///
/// The builder does not validate: it will happily assemble a model with
/// dangling references so that [`ProcessModel::validate`] can report them.
/// Elements added twice under one id replace the earlier entry; duplicate
/// detection belongs to the document parser, which sees the raw lists.
#[derive(Debug)]
pub struct ProcessModelBuilder {
    name: String,
    activities: BTreeMap<NodeId, Activity>,
    gateways: BTreeMap<NodeId, Gateway>,
    flows: BTreeMap<FlowId, ControlFlow>,
    routing_constraints: BTreeMap<ConstraintId, RoutingConstraint>,
    data_items: BTreeMap<ItemId, DataItem>,
    iao: BTreeSet<IaoTriple>,
}

impl ProcessModelBuilder {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            activities: BTreeMap::new(),
            gateways: BTreeMap::new(),
            flows: BTreeMap::new(),
            routing_constraints: BTreeMap::new(),
            data_items: BTreeMap::new(),
            iao: BTreeSet::new(),
        }
    }

    pub fn activity(mut self, id: impl Into<NodeId>, name: impl Into<String>) -> Self {
        let id = id.into();
        self.activities.insert(
            id.clone(),
            Activity {
                id,
                name: name.into(),
            },
        );
        self
    }

    pub fn gateway(mut self, id: impl Into<NodeId>, gateway_type: GatewayType) -> Self {
        let id = id.into();
        self.gateways.insert(id.clone(), Gateway { id, gateway_type });
        self
    }

    pub fn flow(
        mut self,
        id: impl Into<FlowId>,
        source: impl Into<NodeId>,
        target: impl Into<NodeId>,
    ) -> Self {
        let id = id.into();
        self.flows.insert(
            id.clone(),
            ControlFlow {
                id,
                source: source.into(),
                target: target.into(),
            },
        );
        self
    }

    pub fn routing_constraint(
        mut self,
        id: impl Into<ConstraintId>,
        expression: Option<&str>,
        support: impl IntoIterator<Item = impl Into<ItemId>>,
        guarded_flows: impl IntoIterator<Item = impl Into<FlowId>>,
    ) -> Self {
        let id = id.into();
        self.routing_constraints.insert(
            id.clone(),
            RoutingConstraint {
                id,
                expression: expression.map(str::to_owned),
                support: support.into_iter().map(Into::into).collect(),
                guarded_flows: guarded_flows.into_iter().map(Into::into).collect(),
            },
        );
        self
    }

    pub fn stored_item(
        mut self,
        id: impl Into<ItemId>,
        name: impl Into<String>,
        relation: impl Into<RelationName>,
        attribute: impl Into<String>,
    ) -> Self {
        let id = id.into();
        self.data_items.insert(
            id.clone(),
            DataItem {
                id,
                name: name.into(),
                binding: Binding::stored(relation, attribute),
            },
        );
        self
    }

    pub fn transient_item(mut self, id: impl Into<ItemId>, name: impl Into<String>) -> Self {
        let id = id.into();
        self.data_items.insert(
            id.clone(),
            DataItem {
                id,
                name: name.into(),
                binding: Binding::Transient,
            },
        );
        self
    }

    /// Adds an (input, activity, output) triple. `None` marks an absent side.
    pub fn iao(
        mut self,
        input: Option<&str>,
        activity: impl Into<NodeId>,
        output: Option<&str>,
    ) -> Self {
        self.iao.insert(IaoTriple::new(
            input.map(ItemId::from),
            activity.into(),
            output.map(ItemId::from),
        ));
        self
    }

    pub fn build(self) -> ProcessModel {
        let mut successors: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for flow in self.flows.values() {
            successors
                .entry(flow.source.clone())
                .or_default()
                .insert(flow.target.clone());
        }
        ProcessModel {
            name: self.name,
            activities: self.activities,
            gateways: self.gateways,
            flows: self.flows,
            routing_constraints: self.routing_constraints,
            data_items: self.data_items,
            iao: self.iao,
            successors,
        }
    }
}
