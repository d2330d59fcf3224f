//! Shared helpers for the integration suites: fixture loading, seeded
//! random model/schema pairs, and the independent brute-force oracles the
//! acceptance criteria compare against.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crosscase::formats::{parse_log, parse_model, parse_schema};
use crosscase::ids::{ItemId, NodeId};
use crosscase::model::{GatewayType, ProcessModel};
use crosscase::oracle::{model_level_impact, InstanceLog};
use crosscase::schema::{AttributeDef, Cardinality, Relation, ReferenceMapping, RelationalSchema};

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture file readable")
}

pub fn fixture_model() -> ProcessModel {
    parse_model(&fixture_text("hotel-booking.model.json")).expect("fixture model parses")
}

pub fn fixture_schema() -> RelationalSchema {
    parse_schema(&fixture_text("hotel-booking.schema.json")).expect("fixture schema parses")
}

pub fn fixture_log() -> InstanceLog {
    parse_log(&fixture_text("hotel-booking.sample-log.json")).expect("fixture log parses")
}

/// A random but well-formed model/schema pair, deterministic in `seed`.
/// Sizes stay small (<= 12 activities, <= 10 data items, <= 6 relations)
/// and every relation is connected to the identity relation.
pub fn random_model_and_schema(seed: u64) -> (ProcessModel, RelationalSchema) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // --- schema ---------------------------------------------------------
    let relation_count: usize = rng.random_range(1..=6);
    let mut relations = Vec::new();
    for r in 0..relation_count {
        let mut attributes = vec![AttributeDef::key(format!("R{r}_k0"))];
        if rng.random_bool(0.25) {
            attributes.push(AttributeDef::key(format!("R{r}_k1")));
        }
        for a in 0..rng.random_range(1..=2) {
            attributes.push(AttributeDef::plain(format!("R{r}_a{a}")));
        }
        relations.push(Relation::new(format!("R{r}"), attributes));
    }

    let cardinalities = [
        Cardinality::OneToOne,
        Cardinality::OneToMany,
        Cardinality::ManyToOne,
        Cardinality::ManyToMany,
    ];
    let mut references = Vec::new();
    // Spanning tree towards R0 keeps every relation reachable from the
    // identity relation.
    for r in 1..relation_count {
        let other = rng.random_range(0..r);
        let cardinality = cardinalities[rng.random_range(0..4)];
        if rng.random_bool(0.5) {
            references.push(ReferenceMapping::new(
                format!("R{r}"),
                format!("R{other}"),
                cardinality,
            ));
        } else {
            references.push(ReferenceMapping::new(
                format!("R{other}"),
                format!("R{r}"),
                cardinality,
            ));
        }
    }
    for _ in 0..rng.random_range(0..=2) {
        let a = rng.random_range(0..relation_count);
        let b = rng.random_range(0..relation_count);
        if a != b {
            references.push(ReferenceMapping::new(
                format!("R{a}"),
                format!("R{b}"),
                cardinalities[rng.random_range(0..4)],
            ));
        }
    }
    let schema = RelationalSchema::new(relations.clone(), references, "R0");

    // --- model ----------------------------------------------------------
    let activity_count: usize = rng.random_range(1..=12);
    let gateway_count: usize = rng.random_range(0..=4);
    let item_count: usize = rng.random_range(1..=10);

    let mut builder = ProcessModel::builder(format!("random-{seed}"));
    let mut nodes: Vec<String> = Vec::new();
    for a in 0..activity_count {
        let id = format!("act{a}");
        builder = builder.activity(id.as_str(), format!("activity {a}"));
        nodes.push(id);
    }
    for g in 0..gateway_count {
        let id = format!("gw{g}");
        let gateway_type = if rng.random_bool(0.5) {
            GatewayType::Xor
        } else {
            GatewayType::And
        };
        builder = builder.gateway(id.as_str(), gateway_type);
        nodes.push(id);
    }

    // Chain backbone over a shuffled node order plus a few extra edges.
    let mut order = nodes.clone();
    order.shuffle(&mut rng);
    let mut flow_ids = Vec::new();
    for (i, pair) in order.windows(2).enumerate() {
        let id = format!("f{i}");
        builder = builder.flow(id.as_str(), pair[0].as_str(), pair[1].as_str());
        flow_ids.push(id);
    }
    for e in 0..rng.random_range(0..=4usize) {
        let a = &nodes[rng.random_range(0..nodes.len())];
        let b = &nodes[rng.random_range(0..nodes.len())];
        let id = format!("x{e}");
        builder = builder.flow(id.as_str(), a.as_str(), b.as_str());
        flow_ids.push(id);
    }

    let mut item_ids = Vec::new();
    for d in 0..item_count {
        let id = format!("d{d}");
        if rng.random_bool(0.8) {
            let relation = &relations[rng.random_range(0..relations.len())];
            let attribute = &relation.attributes[rng.random_range(0..relation.attributes.len())];
            builder = builder.stored_item(
                id.as_str(),
                id.as_str(),
                relation.name.as_str(),
                attribute.name.as_str(),
            );
        } else {
            builder = builder.transient_item(id.as_str(), id.as_str());
        }
        item_ids.push(id);
    }

    for _ in 0..rng.random_range(0..=15usize) {
        let input = if rng.random_bool(0.8) {
            Some(item_ids[rng.random_range(0..item_ids.len())].clone())
        } else {
            None
        };
        let output = if input.is_none() || rng.random_bool(0.8) {
            Some(item_ids[rng.random_range(0..item_ids.len())].clone())
        } else {
            None
        };
        let activity = format!("act{}", rng.random_range(0..activity_count));
        builder = builder.iao(input.as_deref(), activity.as_str(), output.as_deref());
    }

    if !flow_ids.is_empty() {
        for rc in 0..rng.random_range(0..=3usize) {
            let mut support = BTreeSet::new();
            for _ in 0..rng.random_range(1..=3usize) {
                support.insert(item_ids[rng.random_range(0..item_ids.len())].clone());
            }
            let mut guarded = BTreeSet::new();
            for _ in 0..rng.random_range(1..=2usize) {
                guarded.insert(flow_ids[rng.random_range(0..flow_ids.len())].clone());
            }
            builder = builder.routing_constraint(
                format!("rc{rc}").as_str(),
                None,
                support,
                guarded,
            );
        }
    }

    let model = builder.build();
    assert!(
        model.validate().is_empty(),
        "random pair must be well-formed"
    );
    (model, schema)
}

/// A random trace of `length` activity instances in arbitrary order (the
/// runtime semantics accepts any sequence of model activities).
pub fn random_trace(model: &ProcessModel, rng: &mut ChaCha8Rng, length: usize) -> Vec<NodeId> {
    let activities: Vec<&NodeId> = model.activities().map(|a| &a.id).collect();
    (0..length)
        .map(|_| activities[rng.random_range(0..activities.len())].clone())
        .collect()
}

// ----------------------------------------------------------------------
// independent oracles
// ----------------------------------------------------------------------

/// Pair reachability decided by enumerating every simple path of length
/// one or more (intermediate nodes distinct; endpoints may coincide).
pub fn closure_by_path_enumeration(pairs: &BTreeSet<(u8, u8)>) -> BTreeSet<(u8, u8)> {
    fn exists_path(pairs: &BTreeSet<(u8, u8)>, here: u8, goal: u8, visited: &mut Vec<u8>) -> bool {
        for (source, target) in pairs {
            if *source != here {
                continue;
            }
            if *target == goal {
                return true;
            }
            if !visited.contains(target) {
                visited.push(*target);
                if exists_path(pairs, *target, goal, visited) {
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

/// Per trace position, every single-activity impact step possible there.
pub fn step_table(model: &ProcessModel, trace: &[NodeId]) -> Vec<BTreeSet<(ItemId, ItemId)>> {
    let items: Vec<ItemId> = model.data_items().map(|d| d.id.clone()).collect();
    trace
        .iter()
        .map(|activity| {
            let mut steps = BTreeSet::new();
            for source in &items {
                for target in &items {
                    if model_level_impact(model, source, activity, target).unwrap() {
                        steps.insert((source.clone(), target.clone()));
                    }
                }
            }
            steps
        })
        .collect()
}

/// Trace-ordered impact decided by exhaustively enumerating item-simple
/// chains, assigning each step the earliest feasible trace position at or
/// after the previous step's position.
///
/// A chain revisiting an item can always be shortened without breaking
/// the position ordering, so item-simple chains are complete; and for a
/// fixed chain, choosing the earliest feasible position at each step is
/// feasibility-preserving.
pub fn trace_impact_by_chain_enumeration(
    model: &ProcessModel,
    trace: &[NodeId],
    source: &ItemId,
    target: &ItemId,
) -> bool {
    if source == target {
        return true;
    }
    let steps = step_table(model, trace);
    let items: Vec<ItemId> = model.data_items().map(|d| d.id.clone()).collect();

    fn search(
        steps: &[BTreeSet<(ItemId, ItemId)>],
        items: &[ItemId],
        here: &ItemId,
        min_position: usize,
        goal: &ItemId,
        used: &mut BTreeSet<ItemId>,
    ) -> bool {
        for next in items {
            if used.contains(next) {
                continue;
            }
            let feasible = (min_position..steps.len())
                .find(|&p| steps[p].contains(&(here.clone(), next.clone())));
            let Some(position) = feasible else {
                continue;
            };
            if next == goal {
                return true;
            }
            used.insert(next.clone());
            if search(steps, items, next, position, goal, used) {
                return true;
            }
            used.remove(next);
        }
        false
    }

    let mut used = BTreeSet::from([source.clone()]);
    search(&steps, &items, source, 0, target, &mut used)
}
