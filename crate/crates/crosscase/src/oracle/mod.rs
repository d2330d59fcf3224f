//! Runtime-side semantics: process instances, data sharing sets, impact
//! chains ordered by trace position, and the brute-force checks that
//! validate the design-time analysis against simulated executions.
//!
//! The design-time passes in [`crate::impact`] over-approximate; the
//! functions here compute what actually holds in a concrete instance log,
//! so that containment (everything observed at runtime was predicted) can
//! be checked mechanically. [`generate_random_log`] produces deterministic
//! seeded logs whose key assignments respect the declared cardinalities,
//! which drives the randomized soundness campaigns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ids::{ItemId, NodeId};
use crate::impact::PdiSet;
use crate::model::{Binding, ProcessModel};
use crate::report::{ValidationReport, ViolationKind};
use crate::schema::RelationalSchema;

mod generate;

pub use generate::{generate_random_log, GeneratorBounds};

/// A primitive value: case identities, key components, and payload
/// values. Floats are deliberately excluded so that values order and
/// hash cleanly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Int(i) => write!(f, "{i}"),
            Scalar::Str(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Str(s.to_owned())
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Self {
        Scalar::Int(i)
    }
}

/// The primary-key value identifying one tuple: one component per key
/// attribute, in the relation's declaration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PkValue(pub Vec<Scalar>);

impl PkValue {
    pub fn single(value: impl Into<Scalar>) -> Self {
        Self(vec![value.into()])
    }
}

impl fmt::Display for PkValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// One data item materialized in a process instance. Stored items carry
/// the key of the tuple they belong to; transient items carry none.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DataItemInstance {
    pub item: ItemId,
    pub pk_value: Option<PkValue>,
    pub value: Option<Scalar>,
}

impl DataItemInstance {
    pub fn stored(item: impl Into<ItemId>, pk_value: PkValue) -> Self {
        Self {
            item: item.into(),
            pk_value: Some(pk_value),
            value: None,
        }
    }

    pub fn transient(item: impl Into<ItemId>) -> Self {
        Self {
            item: item.into(),
            pk_value: None,
            value: None,
        }
    }
}

/// One execution of the process: a case identity, the trace of performed
/// activity instances, and the data-item instances it touched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessInstance {
    pub case_id: Scalar,
    pub trace: Vec<NodeId>,
    pub data_items: BTreeSet<DataItemInstance>,
}

impl ProcessInstance {
    pub fn new(
        case_id: impl Into<Scalar>,
        trace: impl IntoIterator<Item = impl Into<NodeId>>,
        data_items: impl IntoIterator<Item = DataItemInstance>,
    ) -> Self {
        Self {
            case_id: case_id.into(),
            trace: trace.into_iter().map(Into::into).collect(),
            data_items: data_items.into_iter().collect(),
        }
    }

    pub fn instantiates(&self, item: &ItemId) -> bool {
        self.data_items.iter().any(|d| &d.item == item)
    }

    /// Key values under which `item` is instantiated here.
    pub fn pk_values(&self, item: &ItemId) -> BTreeSet<&PkValue> {
        self.data_items
            .iter()
            .filter(|d| &d.item == item)
            .filter_map(|d| d.pk_value.as_ref())
            .collect()
    }
}

/// A set of process instances of one model. Instances are kept sorted by
/// case id so that serialization is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceLog {
    model_name: String,
    instances: Vec<ProcessInstance>,
}

impl InstanceLog {
    pub fn new(
        model_name: impl Into<String>,
        instances: impl IntoIterator<Item = ProcessInstance>,
    ) -> Self {
        let mut instances: Vec<ProcessInstance> = instances.into_iter().collect();
        instances.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        Self {
            model_name: model_name.into(),
            instances,
        }
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    pub fn instances(&self) -> &[ProcessInstance] {
        &self.instances
    }

    pub fn instance(&self, case_id: &Scalar) -> Option<&ProcessInstance> {
        self.instances.iter().find(|pi| &pi.case_id == case_id)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// Checks a log against its model and schema: case ids must be unique,
/// trace entries must name activities, item instances must resolve, and
/// key values must be present exactly for stored items with the arity of
/// the owning relation's primary key.
pub fn validate_log(
    model: &ProcessModel,
    schema: &RelationalSchema,
    log: &InstanceLog,
) -> ValidationReport {
    let mut report = ValidationReport::new();

    if log.model_name != model.name() {
        report.push(
            ViolationKind::ModelNameMismatch,
            format!(
                "log belongs to model `{}`, not `{}`",
                log.model_name,
                model.name()
            ),
        );
    }

    let mut seen_cases: BTreeSet<&Scalar> = BTreeSet::new();
    for pi in &log.instances {
        if !seen_cases.insert(&pi.case_id) {
            report.push(
                ViolationKind::DuplicateCaseId,
                format!("case id `{}` appears more than once", pi.case_id),
            );
        }
        for node in &pi.trace {
            if model.activity(node).is_none() {
                report.push(
                    ViolationKind::UnknownTraceActivity,
                    format!(
                        "case `{}` performs `{}`, which is not an activity of the model",
                        pi.case_id, node
                    ),
                );
            }
        }
        for instance in &pi.data_items {
            let Some(item) = model.data_item(&instance.item) else {
                report.push(
                    ViolationKind::UnknownDataItem,
                    format!(
                        "case `{}` instantiates unknown data item `{}`",
                        pi.case_id, instance.item
                    ),
                );
                continue;
            };
            match (&item.binding, &instance.pk_value) {
                (Binding::Stored { relation, .. }, Some(pk)) => {
                    if let Some(rel) = schema.relation(relation) {
                        let arity = rel.primary_key().len();
                        if pk.0.len() != arity {
                            report.push(
                                ViolationKind::MissingKeyValue,
                                format!(
                                    "case `{}`: key of `{}` has {} component(s), `{}` expects {}",
                                    pi.case_id,
                                    instance.item,
                                    pk.0.len(),
                                    relation,
                                    arity
                                ),
                            );
                        }
                    }
                }
                (Binding::Stored { .. }, None) => {
                    report.push(
                        ViolationKind::MissingKeyValue,
                        format!(
                            "case `{}`: stored item `{}` was instantiated without a key value",
                            pi.case_id, instance.item
                        ),
                    );
                }
                (Binding::Transient, Some(_)) => {
                    report.push(
                        ViolationKind::UnexpectedKeyValue,
                        format!(
                            "case `{}`: transient item `{}` carries a key value",
                            pi.case_id, instance.item
                        ),
                    );
                }
                (Binding::Transient, None) => {}
            }
        }
    }

    report
}

/// Precomputed step relation: which single-activity impacts exist.
pub(crate) struct ImpactIndex {
    /// Per activity: (input, output) pairs with both sides present.
    direct: BTreeMap<NodeId, BTreeSet<(ItemId, ItemId)>>,
    /// Per activity: every output it writes, including outputs of
    /// input-less triples.
    writes: BTreeMap<NodeId, BTreeSet<ItemId>>,
    /// Per activity: support items of every routing constraint from which
    /// the activity is reachable.
    support_reaching: BTreeMap<NodeId, BTreeSet<ItemId>>,
}

impl ImpactIndex {
    pub(crate) fn new(model: &ProcessModel) -> Self {
        let mut direct: BTreeMap<NodeId, BTreeSet<(ItemId, ItemId)>> = BTreeMap::new();
        let mut writes: BTreeMap<NodeId, BTreeSet<ItemId>> = BTreeMap::new();
        for triple in model.iao_triples() {
            if let Some(output) = &triple.output {
                writes
                    .entry(triple.activity.clone())
                    .or_default()
                    .insert(output.clone());
                if let Some(input) = &triple.input {
                    direct
                        .entry(triple.activity.clone())
                        .or_default()
                        .insert((input.clone(), output.clone()));
                }
            }
        }
        let mut support_reaching: BTreeMap<NodeId, BTreeSet<ItemId>> = BTreeMap::new();
        for rc in model.routing_constraints() {
            let Ok(reachable) = model.reachable_from_constraint(&rc.id) else {
                continue;
            };
            for activity in reachable {
                support_reaching
                    .entry(activity)
                    .or_default()
                    .extend(rc.support.iter().cloned());
            }
        }
        Self {
            direct,
            writes,
            support_reaching,
        }
    }

    /// Whether `source` directly impacts `target` with respect to `activity`.
    fn step(&self, source: &ItemId, activity: &NodeId, target: &ItemId) -> bool {
        if let Some(pairs) = self.direct.get(activity) {
            if pairs.contains(&(source.clone(), target.clone())) {
                return true;
            }
        }
        self.support_reaching
            .get(activity)
            .is_some_and(|support| support.contains(source))
            && self
                .writes
                .get(activity)
                .is_some_and(|outputs| outputs.contains(target))
    }

    /// All targets `source` directly impacts with respect to `activity`.
    fn step_targets(&self, source: &ItemId, activity: &NodeId) -> BTreeSet<ItemId> {
        let mut targets = BTreeSet::new();
        if let Some(pairs) = self.direct.get(activity) {
            targets.extend(
                pairs
                    .iter()
                    .filter(|(s, _)| s == source)
                    .map(|(_, t)| t.clone()),
            );
        }
        if self
            .support_reaching
            .get(activity)
            .is_some_and(|support| support.contains(source))
        {
            if let Some(outputs) = self.writes.get(activity) {
                targets.extend(outputs.iter().cloned());
            }
        }
        targets
    }

    /// Items reachable from `start` by a chain of at least one step whose
    /// activities occur at non-decreasing trace positions. Two chain steps
    /// may use the same activity instance; distinct instances must follow
    /// trace order.
    fn reach_in_trace(&self, trace: &[NodeId], start: &ItemId) -> BTreeSet<ItemId> {
        // Minimal position of the last step per reached item.
        let mut best: BTreeMap<ItemId, usize> = BTreeMap::new();
        let mut worklist: Vec<(ItemId, usize)> = vec![(start.clone(), 0)];
        while let Some((item, from)) = worklist.pop() {
            for (position, activity) in trace.iter().enumerate().skip(from) {
                for target in self.step_targets(&item, activity) {
                    let improved = best.get(&target).is_none_or(|&p| position < p);
                    if improved {
                        best.insert(target.clone(), position);
                        worklist.push((target, position));
                    }
                }
            }
        }
        best.into_keys().collect()
    }
}

fn require_item<'m>(model: &'m ProcessModel, id: &ItemId) -> Result<&'m crate::model::DataItem, Error> {
    model
        .data_item(id)
        .ok_or_else(|| Error::UnknownDataItem(id.to_string()))
}

/// The set of case ids holding an instance of `item` under the key `key`.
///
/// Only stored items have tuples to share; transient items are an error.
pub fn data_sharing_set(
    model: &ProcessModel,
    log: &InstanceLog,
    item: &ItemId,
    key: &PkValue,
) -> Result<BTreeSet<Scalar>, Error> {
    let declared = require_item(model, item)?;
    if !declared.binding.is_stored() {
        return Err(Error::NotShareable(item.to_string()));
    }
    Ok(log
        .instances
        .iter()
        .filter(|pi| pi.pk_values(item).contains(key))
        .map(|pi| pi.case_id.clone())
        .collect())
}

/// Whether `source` has a direct, single-activity impact on `target` with
/// respect to `activity`: either an explicit input/output triple, or the
/// source supports a routing constraint from which the activity is
/// reachable while the activity writes the target.
pub fn model_level_impact(
    model: &ProcessModel,
    source: &ItemId,
    activity: &NodeId,
    target: &ItemId,
) -> Result<bool, Error> {
    require_item(model, source)?;
    require_item(model, target)?;
    if model.activity(activity).is_none() {
        return Err(Error::ElementNotFound(activity.to_string()));
    }
    Ok(ImpactIndex::new(model).step(source, activity, target))
}

fn require_trace(model: &ProcessModel, pi: &ProcessInstance) -> Result<(), Error> {
    for node in &pi.trace {
        if model.activity(node).is_none() {
            return Err(Error::ElementNotFound(node.to_string()));
        }
    }
    Ok(())
}

/// Whether `source` impacts `target` within the instance `pi`: either
/// they are the same item (impact is reflexive), or a chain of
/// single-activity impacts exists whose activities occur in `pi`'s trace
/// in non-decreasing order.
pub fn intra_impact_in_trace(
    model: &ProcessModel,
    pi: &ProcessInstance,
    source: &ItemId,
    target: &ItemId,
) -> Result<bool, Error> {
    require_item(model, source)?;
    require_item(model, target)?;
    require_trace(model, pi)?;
    if source == target {
        return Ok(true);
    }
    let index = ImpactIndex::new(model);
    Ok(index.reach_in_trace(&pi.trace, source).contains(target))
}

/// Items instantiated in `pi` that `source` impacts there (including
/// `source` itself when instantiated).
pub fn impacted_set(
    model: &ProcessModel,
    pi: &ProcessInstance,
    source: &ItemId,
) -> Result<BTreeSet<ItemId>, Error> {
    require_item(model, source)?;
    require_trace(model, pi)?;
    let index = ImpactIndex::new(model);
    let mut reached = index.reach_in_trace(&pi.trace, source);
    reached.insert(source.clone());
    reached.retain(|item| pi.instantiates(item));
    Ok(reached)
}

/// Items instantiated in `pi` that impact `target` there (including
/// `target` itself when instantiated).
pub fn impacting_set(
    model: &ProcessModel,
    pi: &ProcessInstance,
    target: &ItemId,
) -> Result<BTreeSet<ItemId>, Error> {
    require_item(model, target)?;
    require_trace(model, pi)?;
    let index = ImpactIndex::new(model);
    Ok(model
        .data_items()
        .filter(|item| pi.instantiates(&item.id))
        .filter(|item| {
            item.id == *target || index.reach_in_trace(&pi.trace, &item.id).contains(target)
        })
        .map(|item| item.id.clone())
        .collect())
}

/// Whether the instance `source_case` impacts the instance `target_case`
/// through the shared item `shared`: the two distinct cases hold `shared`
/// under a common key, something impacts `shared` in the source, and
/// `shared` impacts something in the target.
pub fn inter_instance_impact(
    model: &ProcessModel,
    log: &InstanceLog,
    source_case: &Scalar,
    target_case: &Scalar,
    shared: &ItemId,
) -> Result<bool, Error> {
    let declared = require_item(model, shared)?;
    if !declared.binding.is_stored() {
        return Err(Error::NotShareable(shared.to_string()));
    }
    let source = log
        .instance(source_case)
        .ok_or_else(|| Error::ElementNotFound(source_case.to_string()))?;
    let target = log
        .instance(target_case)
        .ok_or_else(|| Error::ElementNotFound(target_case.to_string()))?;
    if source_case == target_case {
        return Ok(false);
    }

    let shared_keys: BTreeSet<&PkValue> = source
        .pk_values(shared)
        .intersection(&target.pk_values(shared))
        .copied()
        .collect();
    if shared_keys.is_empty() {
        return Ok(false);
    }

    let impacting = impacting_set(model, source, shared)?;
    if impacting.is_empty() {
        return Ok(false);
    }
    let impacted = impacted_set(model, target, shared)?;
    Ok(!impacted.is_empty())
}

/// One runtime-observed inter-instance impact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ObservedTriplet {
    pub trigger: ItemId,
    pub affected: ItemId,
    pub shared: ItemId,
    pub source_case: Scalar,
    pub target_case: Scalar,
    pub key: PkValue,
}

/// Enumerates every inter-instance impact observable in the log: for
/// every ordered pair of distinct instances sharing a stored item under a
/// common key, every trigger impacting the shared item in the source
/// instance crossed with every item the shared item impacts in the
/// target instance.
///
/// The log is taken at face value; entries that do not resolve in the
/// model simply contribute nothing. Run [`validate_log`] first to surface
/// such problems.
pub fn observed_triplets(model: &ProcessModel, log: &InstanceLog) -> BTreeSet<ObservedTriplet> {
    let index = ImpactIndex::new(model);

    // Per instance: item -> items it reaches within the trace.
    let reach: Vec<BTreeMap<ItemId, BTreeSet<ItemId>>> = log
        .instances
        .iter()
        .map(|pi| {
            model
                .data_items()
                .map(|item| (item.id.clone(), index.reach_in_trace(&pi.trace, &item.id)))
                .collect()
        })
        .collect();

    let stored: BTreeSet<&ItemId> = model
        .data_items()
        .filter(|item| item.binding.is_stored())
        .map(|item| &item.id)
        .collect();

    let mut observed = BTreeSet::new();
    for (a, source) in log.instances.iter().enumerate() {
        for (b, target) in log.instances.iter().enumerate() {
            if a == b || source.case_id == target.case_id {
                continue;
            }
            for shared in &stored {
                let keys: BTreeSet<&PkValue> = source
                    .pk_values(shared)
                    .intersection(&target.pk_values(shared))
                    .copied()
                    .collect();
                if keys.is_empty() {
                    continue;
                }

                let triggers: Vec<&ItemId> = model
                    .data_items()
                    .map(|item| &item.id)
                    .filter(|id| source.instantiates(id))
                    .filter(|id| *id == *shared || reach[a][*id].contains(shared))
                    .collect();
                let affected: Vec<&ItemId> = model
                    .data_items()
                    .map(|item| &item.id)
                    .filter(|id| target.instantiates(id))
                    .filter(|id| *id == *shared || reach[b][shared].contains(*id))
                    .collect();

                for key in &keys {
                    for trigger in &triggers {
                        for affect in &affected {
                            observed.insert(ObservedTriplet {
                                trigger: (*trigger).clone(),
                                affected: (*affect).clone(),
                                shared: (*shared).clone(),
                                source_case: source.case_id.clone(),
                                target_case: target.case_id.clone(),
                                key: (*key).clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    observed
}

/// The result of checking observed runtime triplets against the
/// design-time set: any `(trigger, affected, shared)` projection that was
/// observed but not predicted is a violation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContainmentReport {
    missing: BTreeSet<(ItemId, ItemId, ItemId)>,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn missing(&self) -> &BTreeSet<(ItemId, ItemId, ItemId)> {
        &self.missing
    }
}

/// Checks that every observed triplet's projection is contained in the
/// design-time triplet set.
pub fn check_containment(
    observed: &BTreeSet<ObservedTriplet>,
    pdi: &PdiSet,
) -> ContainmentReport {
    let mut missing = BTreeSet::new();
    for seen in observed {
        if !pdi.contains_projection(&seen.trigger, &seen.affected, &seen.shared) {
            missing.insert((seen.trigger.clone(), seen.affected.clone(), seen.shared.clone()));
        }
    }
    ContainmentReport { missing }
}

/// Flags data items bound to an attribute of the identity relation whose
/// instances are shared by more than one case. Case ids map one-to-one to
/// identity-relation tuples, so such a log is internally inconsistent.
pub fn check_identity_sharing(
    model: &ProcessModel,
    schema: &RelationalSchema,
    log: &InstanceLog,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let identity = schema.identity_relation();

    for item in model.data_items() {
        let Binding::Stored { relation, .. } = &item.binding else {
            continue;
        };
        if relation != identity {
            continue;
        }
        let mut holders: BTreeMap<&PkValue, BTreeSet<&Scalar>> = BTreeMap::new();
        for pi in log.instances() {
            for key in pi.pk_values(&item.id) {
                holders.entry(key).or_default().insert(&pi.case_id);
            }
        }
        for (key, cases) in holders {
            if cases.len() > 1 {
                let listed: Vec<String> = cases.iter().map(|c| c.to_string()).collect();
                report.push(
                    ViolationKind::SharedIdentityAttribute,
                    format!(
                        "identity-relation item `{}` with key {} is held by cases {}",
                        item.id,
                        key,
                        listed.join(", ")
                    ),
                );
            }
        }
    }
    report
}

/// Flags every non-trivial sharing set (two or more cases holding one
/// tuple of an item) whose relation maps to the identity relation `1-1`
/// or `m-1` — by construction such relations cannot be shared, so a
/// violation means the log contradicts the schema.
pub fn check_sharing_cardinality(
    model: &ProcessModel,
    schema: &RelationalSchema,
    log: &InstanceLog,
) -> Result<ValidationReport, Error> {
    let mut report = ValidationReport::new();

    for item in model.data_items() {
        let Some(relation) = schema.find_rel(item)? else {
            continue;
        };
        let mut holders: BTreeMap<&PkValue, BTreeSet<&Scalar>> = BTreeMap::new();
        for pi in log.instances() {
            for key in pi.pk_values(&item.id) {
                holders.entry(key).or_default().insert(&pi.case_id);
            }
        }
        let relation_name = relation.name.clone();
        for (key, cases) in holders {
            if cases.len() > 1 {
                let cardinality = schema.cardinality_with_identity(&relation_name)?;
                if !cardinality.permits_sharing() {
                    report.push(
                        ViolationKind::NarrowSharedCardinality,
                        format!(
                            "item `{}` (relation `{}`, cardinality {} with the identity relation) \
                             is shared by {} cases under key {}",
                            item.id,
                            relation_name,
                            cardinality,
                            cases.len(),
                            key
                        ),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Aggregated outcome of a seeded soundness campaign.
#[derive(Clone, Debug, Default)]
pub struct CampaignReport {
    /// How many logs were generated and checked.
    pub logs_run: usize,
    /// Total observed runtime triplets across all logs.
    pub observed_count: usize,
    /// Observed projections missing from the design-time set.
    pub containment_violations: BTreeSet<(ItemId, ItemId, ItemId)>,
    /// Identity-relation sharing findings.
    pub identity_violations: usize,
    /// Narrow-cardinality sharing findings.
    pub cardinality_violations: usize,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.containment_violations.is_empty()
            && self.identity_violations == 0
            && self.cardinality_violations == 0
    }
}

/// Runs the three runtime checks over one existing log.
pub fn check_log(
    model: &ProcessModel,
    schema: &RelationalSchema,
    log: &InstanceLog,
) -> Result<CampaignReport, Error> {
    let pdi = crate::impact::compute_pdi(model, schema)?;
    let mut report = CampaignReport::default();
    accumulate_checks(model, schema, &pdi, log, &mut report)?;
    Ok(report)
}

/// Generates one log per seed and accumulates the three runtime checks:
/// containment of observed triplets in the design-time set, absence of
/// identity-relation sharing, and wide cardinality for every non-trivial
/// sharing set.
pub fn soundness_campaign(
    model: &ProcessModel,
    schema: &RelationalSchema,
    seeds: impl IntoIterator<Item = u64>,
    bounds: &GeneratorBounds,
) -> Result<CampaignReport, Error> {
    let pdi = crate::impact::compute_pdi(model, schema)?;
    let mut report = CampaignReport::default();
    for seed in seeds {
        let log = generate_random_log(model, schema, seed, bounds)?;
        accumulate_checks(model, schema, &pdi, &log, &mut report)?;
    }
    Ok(report)
}

fn accumulate_checks(
    model: &ProcessModel,
    schema: &RelationalSchema,
    pdi: &PdiSet,
    log: &InstanceLog,
    report: &mut CampaignReport,
) -> Result<(), Error> {
    let observed = observed_triplets(model, log);
    report.observed_count += observed.len();
    let containment = check_containment(&observed, pdi);
    report
        .containment_violations
        .extend(containment.missing.iter().cloned());
    report.identity_violations += check_identity_sharing(model, schema, log).len();
    report.cardinality_violations += check_sharing_cardinality(model, schema, log)?.len();
    report.logs_run += 1;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::ConstraintId;
    use crate::schema::{AttributeDef, Cardinality, Relation, ReferenceMapping};

    /// Identity relation `Case` plus a shared relation `Pool` (1-m with
    /// the identity relation). Items: `local` in Case, `shared` in Pool,
    /// `scratch` transient.
    fn test_schema() -> RelationalSchema {
        RelationalSchema::new(
            [
                Relation::new(
                    "Case",
                    [AttributeDef::key("caseID"), AttributeDef::plain("local")],
                ),
                Relation::new(
                    "Pool",
                    [AttributeDef::key("poolID"), AttributeDef::plain("shared")],
                ),
            ],
            [ReferenceMapping::new("Case", "Pool", Cardinality::ManyToOne)],
            "Case",
        )
    }

    /// a1 writes `shared` from `local`; a2 writes `out` from `shared`.
    fn test_model() -> ProcessModel {
        ProcessModel::builder("test")
            .activity("a1", "A1")
            .activity("a2", "A2")
            .flow("f1", "a1", "a2")
            .stored_item("local", "local", "Case", "local")
            .stored_item("shared", "shared", "Pool", "shared")
            .transient_item("out", "out")
            .iao(Some("local"), "a1", Some("shared"))
            .iao(Some("shared"), "a2", Some("out"))
            .build()
    }

    fn item(id: &str) -> ItemId {
        ItemId::from(id)
    }

    fn full_instance(case: i64, pool_key: &str, trace: &[&str]) -> ProcessInstance {
        ProcessInstance::new(
            case,
            trace.iter().copied(),
            [
                DataItemInstance::stored("local", PkValue::single(format!("case-{case}").as_str())),
                DataItemInstance::stored("shared", PkValue::single(pool_key)),
                DataItemInstance::transient("out"),
            ],
        )
    }

    #[test]
    fn sharing_set_collects_cases_holding_the_same_key() {
        let model = test_model();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-15", &["a1", "a2"]),
                full_instance(2, "pool-15", &["a1", "a2"]),
                full_instance(3, "pool-9", &["a1", "a2"]),
            ],
        );
        let ds = data_sharing_set(&model, &log, &item("shared"), &PkValue::single("pool-15"))
            .unwrap();
        assert_eq!(ds, [Scalar::Int(1), Scalar::Int(2)].into());
    }

    #[test]
    fn sharing_sets_in_single_instance_logs_are_trivial() {
        let model = test_model();
        let log = InstanceLog::new("test", [full_instance(1, "pool-15", &["a1", "a2"])]);
        for key in ["pool-15", "case-1"] {
            for id in ["shared", "local"] {
                let ds = data_sharing_set(&model, &log, &item(id), &PkValue::single(key)).unwrap();
                assert!(ds.len() <= 1);
            }
        }
    }

    #[test]
    fn transient_items_are_not_shareable() {
        let model = test_model();
        let log = InstanceLog::new("test", []);
        assert!(matches!(
            data_sharing_set(&model, &log, &item("out"), &PkValue::single("x")),
            Err(Error::NotShareable(_))
        ));
    }

    #[test]
    fn direct_triple_is_a_model_level_impact() {
        let model = test_model();
        assert!(model_level_impact(
            &model,
            &item("local"),
            &NodeId::from("a1"),
            &item("shared")
        )
        .unwrap());
        assert!(!model_level_impact(
            &model,
            &item("shared"),
            &NodeId::from("a1"),
            &item("local")
        )
        .unwrap());
    }

    #[test]
    fn constraint_support_is_a_model_level_impact_on_downstream_writes() {
        // guard reads `g` on the flow into a2, which writes `out`.
        let model = ProcessModel::builder("guarded")
            .activity("a1", "A1")
            .activity("a2", "A2")
            .flow("f1", "a1", "a2")
            .transient_item("g", "g")
            .transient_item("u", "u")
            .transient_item("out", "out")
            .routing_constraint("rc", None, ["g"], ["f1"])
            .iao(Some("u"), "a2", Some("out"))
            .build();
        assert!(model_level_impact(&model, &item("g"), &NodeId::from("a2"), &item("out")).unwrap());
        assert!(
            !model_level_impact(&model, &item("g"), &NodeId::from("a1"), &item("out")).unwrap()
        );
    }

    #[test]
    fn unknown_ids_are_errors() {
        let model = test_model();
        assert!(model_level_impact(
            &model,
            &item("nope"),
            &NodeId::from("a1"),
            &item("shared")
        )
        .is_err());
        assert!(model_level_impact(
            &model,
            &item("local"),
            &NodeId::from("nope"),
            &item("shared")
        )
        .is_err());
    }

    #[test]
    fn trace_impact_is_reflexive() {
        let model = test_model();
        let pi = ProcessInstance::new(1, Vec::<&str>::new(), []);
        assert!(intra_impact_in_trace(&model, &pi, &item("local"), &item("local")).unwrap());
    }

    #[test]
    fn in_order_chain_is_found() {
        let model = test_model();
        let pi = ProcessInstance::new(1, ["a1", "a2"], []);
        assert!(intra_impact_in_trace(&model, &pi, &item("local"), &item("out")).unwrap());
    }

    #[test]
    fn out_of_order_chain_is_rejected() {
        // The chain needs a1 before a2; the trace performs a2 first.
        let model = test_model();
        let pi = ProcessInstance::new(1, ["a2", "a1"], []);
        assert!(!intra_impact_in_trace(&model, &pi, &item("local"), &item("out")).unwrap());
        // Each single step still works on its own.
        assert!(intra_impact_in_trace(&model, &pi, &item("local"), &item("shared")).unwrap());
        assert!(intra_impact_in_trace(&model, &pi, &item("shared"), &item("out")).unwrap());
    }

    #[test]
    fn same_activity_instance_may_carry_consecutive_steps() {
        // Both steps happen at one instance of `a`: reading x to write y
        // and reading y to write z can occur in a single execution.
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .transient_item("x", "x")
            .transient_item("y", "y")
            .transient_item("z", "z")
            .iao(Some("x"), "a", Some("y"))
            .iao(Some("y"), "a", Some("z"))
            .build();
        let pi = ProcessInstance::new(1, ["a"], []);
        assert!(intra_impact_in_trace(&model, &pi, &item("x"), &item("z")).unwrap());
    }

    #[test]
    fn impacted_set_contains_source_when_instantiated() {
        let model = test_model();
        let pi = full_instance(1, "pool-1", &["a1", "a2"]);
        let impacted = impacted_set(&model, &pi, &item("local")).unwrap();
        assert_eq!(impacted, ["local", "shared", "out"].map(item).into());
        // An empty trace leaves only the reflexive impact.
        let idle = full_instance(2, "pool-1", &[]);
        let impacted = impacted_set(&model, &idle, &item("local")).unwrap();
        assert_eq!(impacted, [item("local")].into());
    }

    #[test]
    fn impacting_set_collects_upstream_items() {
        let model = test_model();
        let pi = full_instance(1, "pool-1", &["a1", "a2"]);
        let impacting = impacting_set(&model, &pi, &item("out")).unwrap();
        assert_eq!(impacting, ["local", "shared", "out"].map(item).into());
    }

    #[test]
    fn inter_instance_impact_requires_a_common_key() {
        let model = test_model();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-2", &["a1", "a2"]),
            ],
        );
        assert!(!inter_instance_impact(
            &model,
            &log,
            &Scalar::Int(1),
            &Scalar::Int(2),
            &item("shared")
        )
        .unwrap());
    }

    #[test]
    fn shared_key_with_reflexive_chains_is_an_impact() {
        let model = test_model();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-1", &["a1", "a2"]),
            ],
        );
        assert!(inter_instance_impact(
            &model,
            &log,
            &Scalar::Int(1),
            &Scalar::Int(2),
            &item("shared")
        )
        .unwrap());
        // An instance never impacts itself across instances.
        assert!(!inter_instance_impact(
            &model,
            &log,
            &Scalar::Int(1),
            &Scalar::Int(1),
            &item("shared")
        )
        .unwrap());
    }

    #[test]
    fn observed_triplets_of_empty_and_singleton_logs_are_empty() {
        let model = test_model();
        assert!(observed_triplets(&model, &InstanceLog::new("test", [])).is_empty());
        let one = InstanceLog::new("test", [full_instance(1, "pool-1", &["a1", "a2"])]);
        assert!(observed_triplets(&model, &one).is_empty());
    }

    #[test]
    fn observed_triplets_enumerate_cross_instance_chains() {
        let model = test_model();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-1", &["a1", "a2"]),
            ],
        );
        let observed = observed_triplets(&model, &log);
        // local impacts shared in case 1; shared impacts out in case 2.
        assert!(observed.contains(&ObservedTriplet {
            trigger: item("local"),
            affected: item("out"),
            shared: item("shared"),
            source_case: Scalar::Int(1),
            target_case: Scalar::Int(2),
            key: PkValue::single("pool-1"),
        }));
        // Both directions are observed for symmetric logs.
        assert!(observed.contains(&ObservedTriplet {
            trigger: item("local"),
            affected: item("out"),
            shared: item("shared"),
            source_case: Scalar::Int(2),
            target_case: Scalar::Int(1),
            key: PkValue::single("pool-1"),
        }));
        // The reflexive triplet is present as well.
        assert!(observed.contains(&ObservedTriplet {
            trigger: item("shared"),
            affected: item("shared"),
            shared: item("shared"),
            source_case: Scalar::Int(1),
            target_case: Scalar::Int(2),
            key: PkValue::single("pool-1"),
        }));
    }

    #[test]
    fn observed_triplets_are_contained_in_the_design_time_set() {
        let model = test_model();
        let schema = test_schema();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-1", &["a1", "a2"]),
            ],
        );
        let observed = observed_triplets(&model, &log);
        assert!(!observed.is_empty());
        let pdi = crate::impact::compute_pdi(&model, &schema).unwrap();
        assert!(check_containment(&observed, &pdi).passed());
    }

    #[test]
    fn containment_check_passes_vacuously_on_empty_observations() {
        let pdi = PdiSet::default();
        assert!(check_containment(&BTreeSet::new(), &pdi).passed());
    }

    #[test]
    fn containment_check_reports_unpredicted_projections() {
        let observed = [ObservedTriplet {
            trigger: item("a"),
            affected: item("b"),
            shared: item("s"),
            source_case: Scalar::Int(1),
            target_case: Scalar::Int(2),
            key: PkValue::single("k"),
        }]
        .into();
        let report = check_containment(&observed, &PdiSet::default());
        assert!(!report.passed());
        assert_eq!(report.missing().len(), 1);
    }

    #[test]
    fn identity_sharing_is_flagged_exactly_once_per_key() {
        let model = test_model();
        let schema = test_schema();
        // Two cases claim the same identity-relation tuple for `local`.
        let dup = PkValue::single("case-dup");
        let log = InstanceLog::new(
            "test",
            [
                ProcessInstance::new(1, ["a1"], [DataItemInstance::stored("local", dup.clone())]),
                ProcessInstance::new(2, ["a1"], [DataItemInstance::stored("local", dup)]),
            ],
        );
        let report = check_identity_sharing(&model, &schema, &log);
        assert_eq!(report.len(), 1);
        assert_eq!(report.count_of(ViolationKind::SharedIdentityAttribute), 1);
    }

    #[test]
    fn well_formed_logs_pass_the_identity_check() {
        let model = test_model();
        let schema = test_schema();
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-1", &["a1", "a2"]),
            ],
        );
        assert!(check_identity_sharing(&model, &schema, &log).is_empty());
        assert!(check_sharing_cardinality(&model, &schema, &log)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn narrow_cardinality_sharing_is_flagged() {
        let model = test_model();
        // Schema where Pool maps m-1 to the identity relation: tuples of
        // Pool must not be shared, but the log shares one.
        let schema = RelationalSchema::new(
            [
                Relation::new(
                    "Case",
                    [AttributeDef::key("caseID"), AttributeDef::plain("local")],
                ),
                Relation::new(
                    "Pool",
                    [AttributeDef::key("poolID"), AttributeDef::plain("shared")],
                ),
            ],
            [ReferenceMapping::new("Pool", "Case", Cardinality::ManyToOne)],
            "Case",
        );
        let log = InstanceLog::new(
            "test",
            [
                full_instance(1, "pool-1", &["a1", "a2"]),
                full_instance(2, "pool-1", &["a1", "a2"]),
            ],
        );
        let report = check_sharing_cardinality(&model, &schema, &log).unwrap();
        assert_eq!(report.count_of(ViolationKind::NarrowSharedCardinality), 1);
    }

    #[test]
    fn validate_log_reports_structural_problems() {
        let model = test_model();
        let schema = test_schema();
        let log = InstanceLog::new(
            "other-model",
            [
                ProcessInstance::new(
                    1,
                    ["a1", "nope"],
                    [
                        DataItemInstance::transient("local"),
                        DataItemInstance::stored("out", PkValue::single("k")),
                        DataItemInstance::transient("ghost"),
                    ],
                ),
                ProcessInstance::new(1, Vec::<&str>::new(), []),
            ],
        );
        let report = validate_log(&model, &schema, &log);
        assert_eq!(report.count_of(ViolationKind::ModelNameMismatch), 1);
        assert_eq!(report.count_of(ViolationKind::DuplicateCaseId), 1);
        assert_eq!(report.count_of(ViolationKind::UnknownTraceActivity), 1);
        assert_eq!(report.count_of(ViolationKind::UnknownDataItem), 1);
        assert_eq!(report.count_of(ViolationKind::MissingKeyValue), 1);
        assert_eq!(report.count_of(ViolationKind::UnexpectedKeyValue), 1);
    }

    #[test]
    fn reachability_respects_constraint_lookup_errors() {
        let model = test_model();
        assert!(model
            .reachable_from_constraint(&ConstraintId::from("missing"))
            .is_err());
    }
}
