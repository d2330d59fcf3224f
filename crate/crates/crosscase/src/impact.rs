//! Design-time impact analysis.
//!
//! Three passes over a model/schema pair:
//!
//! 1. [`intra_impact_analysis`] — which data items can affect which other
//!    items within one process instance, as the transitive closure of
//!    direct input/output pairs and routing-constraint influences.
//! 2. [`compute_pdi`] — the potential inter-instance data impact set: for
//!    every item whose relation is shared across cases (`1-m` or `m-m`
//!    with the identity relation), the triplets `(trigger, affected;
//!    shared)` that could link two instances through it.
//! 3. [`affected_sets`] — per trigger item, the sharing functions it can
//!    reach, plus [`compute_metrics`] summary statistics.
//!
//! All passes are deterministic: inputs and outputs are ordered sets, so
//! identical inputs produce identical outputs regardless of call order.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::ids::{ItemId, RelationName};
use crate::model::ProcessModel;
use crate::schema::{check_bindings, Cardinality, RelationalSchema};

/// Ordered pairs `(source, target)` meaning the source item can impact
/// the target item within a single process instance.
///
/// The set is transitively closed and stores no reflexive pairs; the
/// implicit reflexivity of impact is reapplied where it matters, inside
/// [`compute_pdi`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntraImpactSet {
    pairs: BTreeSet<(ItemId, ItemId)>,
}

impl IntraImpactSet {
    pub fn iter(&self) -> impl Iterator<Item = &(ItemId, ItemId)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, source: &ItemId, target: &ItemId) -> bool {
        self.pairs.contains(&(source.clone(), target.clone()))
    }

    /// Items that can impact `target`.
    pub fn sources_of(&self, target: &ItemId) -> BTreeSet<ItemId> {
        self.pairs
            .iter()
            .filter(|(_, t)| t == target)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// Items that `source` can impact.
    pub fn targets_of(&self, source: &ItemId) -> BTreeSet<ItemId> {
        self.pairs
            .iter()
            .filter(|(s, _)| s == source)
            .map(|(_, t)| t.clone())
            .collect()
    }
}

/// Smallest transitively closed superset of `pairs`.
///
/// Reflexive pairs are neither added nor removed beyond what transitivity
/// forces: a cycle `a -> b -> a` yields `(a, a)`. Classic Warshall over a
/// boolean matrix.
pub fn transitive_closure<T: Ord + Clone>(pairs: &BTreeSet<(T, T)>) -> BTreeSet<(T, T)> {
    let nodes: Vec<&T> = pairs
        .iter()
        .flat_map(|(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&T, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let n = nodes.len();

    let mut matrix = vec![false; n * n];
    for (a, b) in pairs {
        matrix[index[a] * n + index[b]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if matrix[i * n + k] {
                for j in 0..n {
                    if matrix[k * n + j] {
                        matrix[i * n + j] = true;
                    }
                }
            }
        }
    }

    let mut closed = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if matrix[i * n + j] {
                closed.insert((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    closed
}

/// Computes the intra-instance impact set of a model.
///
/// Direct pairs come from input/output triples with both sides present.
/// Every item in a routing constraint's support additionally impacts
/// every output written by an activity reachable from that constraint,
/// whatever the activity's inputs. The union is closed transitively and
/// reflexive pairs are dropped.
pub fn intra_impact_analysis(model: &ProcessModel) -> Result<IntraImpactSet, Error> {
    let validation = model.validate();
    if !validation.is_empty() {
        return Err(Error::validation(
            format!("model `{}`", model.name()),
            validation,
        ));
    }

    let mut pairs: BTreeSet<(ItemId, ItemId)> = BTreeSet::new();

    for triple in model.iao_triples() {
        if let (Some(input), Some(output)) = (&triple.input, &triple.output) {
            pairs.insert((input.clone(), output.clone()));
        }
    }

    for rc in model.routing_constraints() {
        let reachable = model.reachable_from_constraint(&rc.id)?;
        for triple in model.iao_triples() {
            if !reachable.contains(&triple.activity) {
                continue;
            }
            if let Some(output) = &triple.output {
                for item in &rc.support {
                    pairs.insert((item.clone(), output.clone()));
                }
            }
        }
    }

    let closed = transitive_closure(&pairs);
    Ok(IntraImpactSet {
        pairs: closed.into_iter().filter(|(a, b)| a != b).collect(),
    })
}

/// One potential inter-instance impact: a change to `trigger` in one
/// process instance can propagate through the shared item `shared` into
/// `affected` of another instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PdiTriplet {
    /// The triggering item (`d1`).
    pub trigger: ItemId,
    /// The item affected in the other instance (`d2`).
    pub affected: ItemId,
    /// The shared item carrying the impact across instances (`d`).
    pub shared: ItemId,
    /// The relation the shared item is stored in.
    pub shared_relation: RelationName,
    /// That relation's cardinality with the identity relation; always
    /// `1-m` or `m-m`.
    pub cardinality_to_ir: Cardinality,
}

/// The potential inter-instance data impact set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PdiSet {
    triplets: BTreeSet<PdiTriplet>,
}

impl FromIterator<PdiTriplet> for PdiSet {
    fn from_iter<I: IntoIterator<Item = PdiTriplet>>(triplets: I) -> Self {
        Self {
            triplets: triplets.into_iter().collect(),
        }
    }
}

impl PdiSet {
    pub fn iter(&self) -> impl Iterator<Item = &PdiTriplet> {
        self.triplets.iter()
    }

    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    /// Membership by the `(trigger, affected, shared)` projection.
    pub fn contains_projection(&self, trigger: &ItemId, affected: &ItemId, shared: &ItemId) -> bool {
        self.triplets
            .iter()
            .any(|t| &t.trigger == trigger && &t.affected == affected && &t.shared == shared)
    }

    /// Distinct shared items.
    pub fn shared_items(&self) -> BTreeSet<&ItemId> {
        self.triplets.iter().map(|t| &t.shared).collect()
    }

    /// Distinct trigger items.
    pub fn trigger_items(&self) -> BTreeSet<&ItemId> {
        self.triplets.iter().map(|t| &t.trigger).collect()
    }
}

/// Computes the potential inter-instance data impact set of a
/// model/schema pair.
///
/// For every stored data item whose relation maps to the identity
/// relation `1-m` or `m-m`, a triplet is emitted for every pair of a
/// possible trigger (an item impacting it, or the item itself) and a
/// possible affected item (an item it impacts, or itself). Items stored
/// in the identity relation itself map `1-1` and can never be shared;
/// transient items have no tuples to share.
pub fn compute_pdi(model: &ProcessModel, schema: &RelationalSchema) -> Result<PdiSet, Error> {
    let schema_validation = schema.validate();
    if !schema_validation.is_empty() {
        return Err(Error::validation("schema", schema_validation));
    }
    let bindings = check_bindings(model, schema);
    if !bindings.is_empty() {
        return Err(Error::validation("model/schema bindings", bindings));
    }

    let intra = intra_impact_analysis(model)?;

    let mut triplets = BTreeSet::new();
    for item in model.data_items() {
        let Some(relation) = schema.find_rel(item)? else {
            continue;
        };
        let cardinality = schema.cardinality_with_identity(&relation.name)?;
        if !cardinality.permits_sharing() {
            continue;
        }

        let shared = &item.id;
        let mut triggers = intra.sources_of(shared);
        triggers.insert(shared.clone());
        let mut affected = intra.targets_of(shared);
        affected.insert(shared.clone());

        for trigger in &triggers {
            for target in &affected {
                triplets.insert(PdiTriplet {
                    trigger: trigger.clone(),
                    affected: target.clone(),
                    shared: shared.clone(),
                    shared_relation: relation.name.clone(),
                    cardinality_to_ir: cardinality,
                });
            }
        }
    }

    Ok(PdiSet { triplets })
}

/// Design-time stand-in for the runtime sharing-set function of one
/// shared item: the item, its relation, and the key attributes that
/// identify a shared tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SharingFunctionDescriptor {
    pub item: ItemId,
    pub relation: RelationName,
    pub pk_attributes: Vec<String>,
}

/// Everything a single trigger item can affect across instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffectedSet {
    pub trigger: ItemId,
    pub sharing_functions: BTreeSet<SharingFunctionDescriptor>,
}

impl AffectedSet {
    fn empty(trigger: ItemId) -> Self {
        Self {
            trigger,
            sharing_functions: BTreeSet::new(),
        }
    }
}

/// Projects the triplet set to per-trigger affected sets.
///
/// Every item mentioned anywhere in the triplets gets an entry; items
/// that never trigger map to empty sets.
pub fn affected_sets(
    pdi: &PdiSet,
    schema: &RelationalSchema,
) -> Result<BTreeMap<ItemId, AffectedSet>, Error> {
    let mut map: BTreeMap<ItemId, AffectedSet> = BTreeMap::new();
    for triplet in pdi.iter() {
        for id in [&triplet.trigger, &triplet.affected, &triplet.shared] {
            map.entry(id.clone())
                .or_insert_with(|| AffectedSet::empty(id.clone()));
        }
    }
    for triplet in pdi.iter() {
        let relation = schema
            .relation(&triplet.shared_relation)
            .ok_or_else(|| Error::RelationNotFound(triplet.shared_relation.to_string()))?;
        let descriptor = SharingFunctionDescriptor {
            item: triplet.shared.clone(),
            relation: relation.name.clone(),
            pk_attributes: relation.primary_key().iter().map(|s| s.to_string()).collect(),
        };
        map.get_mut(&triplet.trigger)
            .expect("trigger entry inserted above")
            .sharing_functions
            .insert(descriptor);
    }
    Ok(map)
}

/// A mean that may be undefined when its denominator is zero; an
/// undefined average reports value `0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Average {
    pub value: f64,
    pub defined: bool,
}

impl Average {
    fn over(total: usize, count: usize) -> Self {
        if count == 0 {
            Self {
                value: 0.0,
                defined: false,
            }
        } else {
            Self {
                value: total as f64 / count as f64,
                defined: true,
            }
        }
    }
}

/// Summary statistics over a triplet set.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpactMetrics {
    /// Distinct shared items.
    pub unique_shared_count: usize,
    /// Distinct trigger items.
    pub unique_trigger_count: usize,
    /// Mean number of distinct shared items per trigger.
    pub avg_impact_sets_per_trigger: Average,
    /// Mean number of distinct affected items per trigger.
    pub avg_affected_per_trigger: Average,
    /// Mean number of distinct triggers per shared item.
    pub avg_triggers_per_shared: Average,
}

/// Computes the summary metrics of a triplet set. All means are over
/// distinct triggers (respectively distinct shared items); an empty set
/// yields zeros flagged undefined.
pub fn compute_metrics(pdi: &PdiSet) -> ImpactMetrics {
    let mut shared_per_trigger: BTreeMap<&ItemId, BTreeSet<&ItemId>> = BTreeMap::new();
    let mut affected_per_trigger: BTreeMap<&ItemId, BTreeSet<&ItemId>> = BTreeMap::new();
    let mut triggers_per_shared: BTreeMap<&ItemId, BTreeSet<&ItemId>> = BTreeMap::new();

    for t in pdi.iter() {
        shared_per_trigger.entry(&t.trigger).or_default().insert(&t.shared);
        affected_per_trigger
            .entry(&t.trigger)
            .or_default()
            .insert(&t.affected);
        triggers_per_shared.entry(&t.shared).or_default().insert(&t.trigger);
    }

    let trigger_count = shared_per_trigger.len();
    let shared_count = triggers_per_shared.len();

    ImpactMetrics {
        unique_shared_count: shared_count,
        unique_trigger_count: trigger_count,
        avg_impact_sets_per_trigger: Average::over(
            shared_per_trigger.values().map(BTreeSet::len).sum(),
            trigger_count,
        ),
        avg_affected_per_trigger: Average::over(
            affected_per_trigger.values().map(BTreeSet::len).sum(),
            trigger_count,
        ),
        avg_triggers_per_shared: Average::over(
            triggers_per_shared.values().map(BTreeSet::len).sum(),
            shared_count,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GatewayType;
    use crate::schema::{AttributeDef, Relation, ReferenceMapping};
    use proptest::prelude::*;

    fn pair_set(pairs: &[(&str, &str)]) -> BTreeSet<(ItemId, ItemId)> {
        pairs
            .iter()
            .map(|(a, b)| (ItemId::from(*a), ItemId::from(*b)))
            .collect()
    }

    #[test]
    fn closure_adds_transitive_pair() {
        let closed = transitive_closure(&pair_set(&[("a", "b"), ("b", "c")]));
        assert_eq!(closed, pair_set(&[("a", "b"), ("b", "c"), ("a", "c")]));
    }

    #[test]
    fn closure_of_empty_set_is_empty() {
        let closed = transitive_closure(&BTreeSet::<(ItemId, ItemId)>::new());
        assert!(closed.is_empty());
    }

    #[test]
    fn closure_of_cycle_contains_reflexive_pairs() {
        let closed = transitive_closure(&pair_set(&[("a", "b"), ("b", "a")]));
        assert_eq!(
            closed,
            pair_set(&[("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")])
        );
    }

    /// Oracle: pair reachability by enumerating every simple path of
    /// length >= 1 (intermediates distinct, endpoints may coincide).
    fn closure_by_path_enumeration(pairs: &BTreeSet<(u8, u8)>) -> BTreeSet<(u8, u8)> {
        fn exists_path(
            pairs: &BTreeSet<(u8, u8)>,
            here: u8,
            goal: u8,
            visited: &mut Vec<u8>,
        ) -> bool {
            for (s, t) in pairs {
                if *s != here {
                    continue;
                }
                if *t == goal {
                    return true;
                }
                if !visited.contains(t) {
                    visited.push(*t);
                    if exists_path(pairs, *t, goal, visited) {
                        return true;
                    }
                    visited.pop();
                }
            }
            false
        }

        let nodes: BTreeSet<u8> = pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
        let mut closed = BTreeSet::new();
        for &a in &nodes {
            for &b in &nodes {
                if exists_path(pairs, a, b, &mut vec![a]) {
                    closed.insert((a, b));
                }
            }
        }
        closed
    }

    proptest! {
        #[test]
        fn closure_matches_path_enumeration(
            edges in proptest::collection::btree_set((0u8..8, 0u8..8), 0..24)
        ) {
            prop_assert_eq!(transitive_closure(&edges), closure_by_path_enumeration(&edges));
        }
    }

    #[test]
    fn single_direct_pair_survives_analysis() {
        let model = ProcessModel::builder("m")
            .activity("check-out", "check out")
            .transient_item("TotalPrice", "TotalPrice")
            .transient_item("paid", "paid")
            .iao(Some("TotalPrice"), "check-out", Some("paid"))
            .build();
        let intra = intra_impact_analysis(&model).unwrap();
        assert_eq!(intra.len(), 1);
        assert!(intra.contains(&ItemId::from("TotalPrice"), &ItemId::from("paid")));
    }

    #[test]
    fn no_sources_means_empty_impact_set() {
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .transient_item("d", "d")
            .build();
        let intra = intra_impact_analysis(&model).unwrap();
        assert!(intra.is_empty());
    }

    #[test]
    fn chained_triples_close_transitively() {
        let model = ProcessModel::builder("m")
            .activity("a1", "A1")
            .activity("a2", "A2")
            .transient_item("a", "a")
            .transient_item("b", "b")
            .transient_item("c", "c")
            .iao(Some("a"), "a1", Some("b"))
            .iao(Some("b"), "a2", Some("c"))
            .build();
        let intra = intra_impact_analysis(&model).unwrap();
        let expected = pair_set(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let actual: BTreeSet<(ItemId, ItemId)> = intra.iter().cloned().collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn constraint_support_impacts_downstream_outputs() {
        // `guard` reads g and guards the flow into `write`, which outputs
        // o from an unrelated input: g must impact o.
        let model = ProcessModel::builder("m")
            .activity("start", "start")
            .gateway("split", GatewayType::Xor)
            .activity("write", "write")
            .flow("f1", "start", "split")
            .flow("f2", "split", "write")
            .transient_item("g", "g")
            .transient_item("u", "u")
            .transient_item("o", "o")
            .routing_constraint("guard", Some("g > 0"), ["g"], ["f2"])
            .iao(Some("u"), "write", Some("o"))
            .build();
        let intra = intra_impact_analysis(&model).unwrap();
        assert!(intra.contains(&ItemId::from("g"), &ItemId::from("o")));
        // The unconstrained input also impacts the output directly.
        assert!(intra.contains(&ItemId::from("u"), &ItemId::from("o")));
        assert!(!intra.contains(&ItemId::from("o"), &ItemId::from("g")));
    }

    #[test]
    fn null_input_writes_count_for_constraint_impacts_only() {
        let model = ProcessModel::builder("m")
            .activity("start", "start")
            .activity("write", "write")
            .flow("f1", "start", "write")
            .transient_item("g", "g")
            .transient_item("o", "o")
            .routing_constraint("guard", None, ["g"], ["f1"])
            .iao(None, "write", Some("o"))
            .build();
        let intra = intra_impact_analysis(&model).unwrap();
        // (null, write, o) contributes no direct pair, but o still counts
        // as written downstream of the guard.
        assert_eq!(intra.len(), 1);
        assert!(intra.contains(&ItemId::from("g"), &ItemId::from("o")));
    }

    #[test]
    fn invalid_model_is_rejected() {
        let model = ProcessModel::builder("empty").activity("a", "A").build();
        assert!(matches!(
            intra_impact_analysis(&model),
            Err(Error::Validation { .. })
        ));
    }

    // --- the pdi computation -------------------------------------------

    /// One shared relation (`Shared`, 1-m with the identity relation) and
    /// the identity relation itself.
    fn two_relation_schema() -> RelationalSchema {
        RelationalSchema::new(
            [
                Relation::new(
                    "Case",
                    [AttributeDef::key("caseID"), AttributeDef::plain("local")],
                ),
                Relation::new(
                    "Shared",
                    [AttributeDef::key("sharedID"), AttributeDef::plain("payload")],
                ),
            ],
            [ReferenceMapping::new("Case", "Shared", Cardinality::ManyToOne)],
            "Case",
        )
    }

    #[test]
    fn identity_bound_items_are_never_shared() {
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .stored_item("local", "local", "Case", "local")
            .stored_item("payload", "payload", "Shared", "payload")
            .iao(Some("local"), "a", Some("payload"))
            .build();
        let pdi = compute_pdi(&model, &two_relation_schema()).unwrap();
        assert!(pdi.iter().all(|t| t.shared == ItemId::from("payload")));
        assert!(pdi
            .iter()
            .all(|t| t.cardinality_to_ir == Cardinality::OneToMany));
    }

    #[test]
    fn isolated_shared_item_yields_reflexive_triplet() {
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .stored_item("s", "s", "Shared", "payload")
            .build();
        let pdi = compute_pdi(&model, &two_relation_schema()).unwrap();
        assert_eq!(pdi.len(), 1);
        let s = ItemId::from("s");
        assert!(pdi.contains_projection(&s, &s, &s));
    }

    #[test]
    fn triplets_cross_triggers_with_affected() {
        // local -> s -> out, s shared: triggers {local, s} x affected
        // {out, s} = 4 triplets.
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .activity("b", "B")
            .stored_item("local", "local", "Case", "local")
            .stored_item("s", "s", "Shared", "payload")
            .transient_item("out", "out")
            .iao(Some("local"), "a", Some("s"))
            .iao(Some("s"), "b", Some("out"))
            .build();
        let pdi = compute_pdi(&model, &two_relation_schema()).unwrap();
        assert_eq!(pdi.len(), 4);
        let (local, s, out) = (ItemId::from("local"), ItemId::from("s"), ItemId::from("out"));
        assert!(pdi.contains_projection(&local, &out, &s));
        assert!(pdi.contains_projection(&local, &s, &s));
        assert!(pdi.contains_projection(&s, &out, &s));
        assert!(pdi.contains_projection(&s, &s, &s));
    }

    #[test]
    fn transient_items_trigger_but_are_never_shared() {
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .transient_item("scratch", "scratch")
            .stored_item("s", "s", "Shared", "payload")
            .iao(Some("scratch"), "a", Some("s"))
            .build();
        let pdi = compute_pdi(&model, &two_relation_schema()).unwrap();
        assert!(pdi.iter().all(|t| t.shared != ItemId::from("scratch")));
        assert!(pdi.contains_projection(
            &ItemId::from("scratch"),
            &ItemId::from("s"),
            &ItemId::from("s")
        ));
    }

    /// Adding an input/output triple can only grow the triplet set.
    #[test]
    fn pdi_is_monotone_in_iao() {
        let base = || {
            ProcessModel::builder("m")
                .activity("a", "A")
                .activity("b", "B")
                .stored_item("local", "local", "Case", "local")
                .stored_item("s", "s", "Shared", "payload")
                .transient_item("out", "out")
                .iao(Some("local"), "a", Some("s"))
        };
        let before = compute_pdi(&base().build(), &two_relation_schema()).unwrap();
        let after = compute_pdi(
            &base().iao(Some("s"), "b", Some("out")).build(),
            &two_relation_schema(),
        )
        .unwrap();
        let before_set: BTreeSet<_> = before.iter().cloned().collect();
        let after_set: BTreeSet<_> = after.iter().cloned().collect();
        assert!(before_set.is_subset(&after_set));
    }

    /// Widening a cardinality can only grow the triplet set.
    #[test]
    fn pdi_is_monotone_in_cardinality() {
        let model = ProcessModel::builder("m")
            .activity("a", "A")
            .stored_item("local", "local", "Case", "local")
            .stored_item("s", "s", "Shared", "payload")
            .iao(Some("local"), "a", Some("s"))
            .build();
        let narrow_schema = RelationalSchema::new(
            [
                Relation::new(
                    "Case",
                    [AttributeDef::key("caseID"), AttributeDef::plain("local")],
                ),
                Relation::new(
                    "Shared",
                    [AttributeDef::key("sharedID"), AttributeDef::plain("payload")],
                ),
            ],
            [ReferenceMapping::new("Case", "Shared", Cardinality::OneToOne)],
            "Case",
        );
        let narrow = compute_pdi(&model, &narrow_schema).unwrap();
        let wide = compute_pdi(&model, &two_relation_schema()).unwrap();
        assert!(narrow.is_empty());
        assert!(!wide.is_empty());
    }

    // --- affected sets and metrics --------------------------------------

    /// Hand-buildable pdi set for projection tests.
    fn synthetic_pdi() -> (PdiSet, RelationalSchema) {
        let schema = RelationalSchema::new(
            [
                Relation::new("Case", [AttributeDef::key("caseID")]),
                Relation::new("S", [AttributeDef::key("sID")]),
                Relation::new("T", [AttributeDef::key("tID"), AttributeDef::key("tSub")]),
            ],
            [
                ReferenceMapping::new("Case", "S", Cardinality::ManyToOne),
                ReferenceMapping::new("Case", "T", Cardinality::ManyToOne),
            ],
            "Case",
        );
        let triplet = |d1: &str, d2: &str, d: &str, rel: &str| PdiTriplet {
            trigger: ItemId::from(d1),
            affected: ItemId::from(d2),
            shared: ItemId::from(d),
            shared_relation: RelationName::from(rel),
            cardinality_to_ir: Cardinality::OneToMany,
        };
        let pdi = PdiSet {
            triplets: [
                triplet("a", "b", "s", "S"),
                triplet("a", "c", "s", "S"),
                triplet("x", "b", "t", "T"),
            ]
            .into(),
        };
        (pdi, schema)
    }

    #[test]
    fn affected_sets_project_triggers_to_descriptors() {
        let (pdi, schema) = synthetic_pdi();
        let map = affected_sets(&pdi, &schema).unwrap();
        let a = &map[&ItemId::from("a")];
        assert_eq!(a.sharing_functions.len(), 1);
        let descriptor = a.sharing_functions.iter().next().unwrap();
        assert_eq!(descriptor.item, ItemId::from("s"));
        assert_eq!(descriptor.relation, RelationName::from("S"));
        assert_eq!(descriptor.pk_attributes, vec!["sID".to_string()]);

        let x = &map[&ItemId::from("x")];
        assert_eq!(x.sharing_functions.len(), 1);
        let descriptor = x.sharing_functions.iter().next().unwrap();
        assert_eq!(descriptor.item, ItemId::from("t"));
        assert_eq!(
            descriptor.pk_attributes,
            vec!["tID".to_string(), "tSub".to_string()]
        );

        // Items that never trigger map to empty sets.
        assert!(map[&ItemId::from("b")].sharing_functions.is_empty());
    }

    #[test]
    fn affected_sets_of_empty_pdi_are_empty() {
        let (_, schema) = synthetic_pdi();
        let map = affected_sets(&PdiSet::default(), &schema).unwrap();
        assert!(map.is_empty());
    }

    #[test]
    fn metrics_match_hand_enumeration() {
        // Triplets {(a,b,s), (a,c,s), (x,b,t)}:
        //   unique shared {s, t} = 2; unique triggers {a, x} = 2;
        //   shared per trigger: a -> {s}, x -> {t}, mean 1.0;
        //   affected per trigger: a -> {b, c}, x -> {b}, mean 1.5;
        //   triggers per shared: s -> {a}, t -> {x}, mean 1.0.
        let (pdi, _) = synthetic_pdi();
        let metrics = compute_metrics(&pdi);
        assert_eq!(metrics.unique_shared_count, 2);
        assert_eq!(metrics.unique_trigger_count, 2);
        assert_eq!(metrics.avg_impact_sets_per_trigger.value, 1.0);
        assert!(metrics.avg_impact_sets_per_trigger.defined);
        assert_eq!(metrics.avg_affected_per_trigger.value, 1.5);
        assert_eq!(metrics.avg_triggers_per_shared.value, 1.0);
    }

    #[test]
    fn metrics_of_empty_pdi_are_zero_and_undefined() {
        let metrics = compute_metrics(&PdiSet::default());
        assert_eq!(metrics.unique_shared_count, 0);
        assert_eq!(metrics.unique_trigger_count, 0);
        for avg in [
            metrics.avg_impact_sets_per_trigger,
            metrics.avg_affected_per_trigger,
            metrics.avg_triggers_per_shared,
        ] {
            assert_eq!(avg.value, 0.0);
            assert!(!avg.defined);
        }
    }
}
