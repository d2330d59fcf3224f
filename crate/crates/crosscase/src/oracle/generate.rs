//! Deterministic random instance-log generation.
//!
//! Traces come from a structural walk of the control-flow graph: tokens
//! start at the entry nodes, exclusive gateways (and activities) pick one
//! outgoing flow, parallel gateways fork a token per flow, and a random
//! scheduler interleaves the live tokens. Every node admits at most
//! `max_loop_unroll` visits per instance, so cyclic models terminate.
//!
//! Key values respect the declared cardinalities: items of relations that
//! map to the identity relation `1-1` or `m-1` get a key unique to their
//! case, while items of `1-m`/`m-m` relations draw their tuple from a
//! shared pool of `pk_domain_size` keys — only the latter can produce
//! non-trivial sharing sets.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::ids::{FlowId, NodeId, RelationName};
use crate::model::{Binding, GatewayType, ProcessModel};
use crate::oracle::{DataItemInstance, InstanceLog, PkValue, ProcessInstance, Scalar};
use crate::schema::RelationalSchema;

/// Size limits for generated logs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorBounds {
    /// Upper bound on the number of instances per log (at least 1 is
    /// generated).
    pub max_instances: usize,
    /// How many times one node may be entered within a single trace.
    pub max_loop_unroll: usize,
    /// Size of the key pool shared items draw from; smaller pools make
    /// sharing more likely.
    pub pk_domain_size: usize,
}

impl Default for GeneratorBounds {
    fn default() -> Self {
        Self {
            max_instances: 4,
            max_loop_unroll: 2,
            pk_domain_size: 2,
        }
    }
}

/// Generates a log of random process instances, deterministically in
/// `seed`: equal inputs produce byte-identical logs.
pub fn generate_random_log(
    model: &ProcessModel,
    schema: &RelationalSchema,
    seed: u64,
    bounds: &GeneratorBounds,
) -> Result<InstanceLog, Error> {
    if bounds.max_instances == 0 {
        return Err(Error::InvalidBounds("max_instances must be at least 1".into()));
    }
    if bounds.max_loop_unroll == 0 {
        return Err(Error::InvalidBounds(
            "max_loop_unroll must be at least 1".into(),
        ));
    }
    if bounds.pk_domain_size == 0 {
        return Err(Error::InvalidBounds(
            "pk_domain_size must be at least 1".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Relations whose tuples may be shared across cases. Relations the
    // identity relation cannot reach are kept unshared, which is the
    // conservative choice for a generator.
    let mut shared_relation: BTreeMap<RelationName, bool> = BTreeMap::new();
    for relation in schema.relations() {
        let wide = schema
            .cardinality_with_identity(&relation.name)
            .map(|c| c.permits_sharing())
            .unwrap_or(false);
        shared_relation.insert(relation.name.clone(), wide);
    }

    let count = rng.random_range(1..=bounds.max_instances);
    let mut instances = Vec::with_capacity(count);
    for case_index in 0..count {
        let (trace, traversed) = walk_trace(model, &mut rng, bounds.max_loop_unroll);
        let items = touched_items(model, &trace, &traversed);

        let mut case_tuples: BTreeMap<RelationName, PkValue> = BTreeMap::new();
        let mut data_items = BTreeSet::new();
        for item_id in items {
            // Items an invalid model references without declaring are
            // skipped; validation reports them separately.
            let Some(item) = model.data_item(&item_id) else {
                continue;
            };
            match &item.binding {
                Binding::Transient => {
                    data_items.insert(DataItemInstance::transient(item_id));
                }
                Binding::Stored { relation, .. } => {
                    let key = match case_tuples.get(relation) {
                        Some(key) => key.clone(),
                        None => {
                            let wide = shared_relation.get(relation).copied().unwrap_or(false);
                            let key = make_key(
                                schema,
                                relation,
                                wide,
                                case_index,
                                bounds.pk_domain_size,
                                &mut rng,
                            );
                            case_tuples.insert(relation.clone(), key.clone());
                            key
                        }
                    };
                    data_items.insert(DataItemInstance::stored(item_id, key));
                }
            }
        }

        instances.push(ProcessInstance {
            case_id: Scalar::Int(case_index as i64),
            trace,
            data_items,
        });
    }

    Ok(InstanceLog::new(model.name(), instances))
}

/// The key of the tuple a case touches in `relation`: unique per case for
/// unshared relations, drawn from the shared pool otherwise. One
/// component per primary-key attribute.
fn make_key(
    schema: &RelationalSchema,
    relation: &RelationName,
    wide: bool,
    case_index: usize,
    pool_size: usize,
    rng: &mut ChaCha8Rng,
) -> PkValue {
    let arity = schema
        .relation(relation)
        .map(|r| r.primary_key().len().max(1))
        .unwrap_or(1);
    let stem = if wide {
        let pool = rng.random_range(0..pool_size);
        format!("{relation}~{pool}")
    } else {
        format!("{relation}~case-{case_index}")
    };
    PkValue(
        (0..arity)
            .map(|component| Scalar::Str(format!("{stem}:{component}")))
            .collect(),
    )
}

/// Items read, written, or tested along the walked path: inputs and
/// outputs of every performed activity's triples, plus the support of
/// every routing constraint whose guarded flow was traversed.
fn touched_items(
    model: &ProcessModel,
    trace: &[NodeId],
    traversed: &BTreeSet<FlowId>,
) -> BTreeSet<crate::ids::ItemId> {
    let mut items = BTreeSet::new();
    let performed: BTreeSet<&NodeId> = trace.iter().collect();
    for triple in model.iao_triples() {
        if !performed.contains(&triple.activity) {
            continue;
        }
        if let Some(input) = &triple.input {
            items.insert(input.clone());
        }
        if let Some(output) = &triple.output {
            items.insert(output.clone());
        }
    }
    for rc in model.routing_constraints() {
        if rc.guarded_flows.iter().any(|f| traversed.contains(f)) {
            items.extend(rc.support.iter().cloned());
        }
    }
    items
}

/// Random structural walk producing a trace and the set of flows taken.
fn walk_trace(
    model: &ProcessModel,
    rng: &mut ChaCha8Rng,
    max_loop_unroll: usize,
) -> (Vec<NodeId>, BTreeSet<FlowId>) {
    let mut tokens: Vec<NodeId> = model.entry_nodes().into_iter().cloned().collect();
    if tokens.is_empty() {
        // Fully cyclic graph: start at the smallest node id.
        if let Some(first) = model
            .activities()
            .map(|a| &a.id)
            .chain(model.gateways().map(|g| &g.id))
            .min()
        {
            tokens.push(first.clone());
        }
    }

    let mut trace = Vec::new();
    let mut traversed = BTreeSet::new();
    let mut visits: BTreeMap<NodeId, usize> = BTreeMap::new();

    while !tokens.is_empty() {
        let picked = rng.random_range(0..tokens.len());
        let node = tokens.swap_remove(picked);

        let entered = visits.entry(node.clone()).or_insert(0);
        if *entered >= max_loop_unroll {
            continue;
        }
        *entered += 1;

        if model.is_activity(&node) {
            trace.push(node.clone());
        }

        let outgoing = model.outgoing_flows(&node);
        if outgoing.is_empty() {
            continue;
        }

        let forks = model
            .gateway(&node)
            .is_some_and(|g| g.gateway_type == GatewayType::And);
        if forks {
            for flow in outgoing {
                traversed.insert(flow.id.clone());
                tokens.push(flow.target.clone());
            }
        } else {
            let flow = outgoing[rng.random_range(0..outgoing.len())];
            traversed.insert(flow.id.clone());
            tokens.push(flow.target.clone());
        }
    }

    (trace, traversed)
}
