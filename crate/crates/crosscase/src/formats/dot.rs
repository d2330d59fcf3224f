//! Graphviz export of the triplet set.
//!
//! Every triplet contributes two edges, trigger → shared and shared →
//! affected, deduplicated across triplets. Shared items are drawn as
//! filled double octagons so the cross-instance carriers stand out.

use std::collections::BTreeSet;

use crate::impact::PdiSet;

use super::Provenance;

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the triplet set as a deterministic DOT digraph.
pub fn emit_dot(pdi: &PdiSet, provenance: Option<&Provenance>) -> String {
    let shared: BTreeSet<&str> = pdi.iter().map(|t| t.shared.as_str()).collect();
    let mut plain: BTreeSet<&str> = BTreeSet::new();
    let mut edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    for triplet in pdi.iter() {
        for id in [triplet.trigger.as_str(), triplet.affected.as_str()] {
            if !shared.contains(id) {
                plain.insert(id);
            }
        }
        edges.insert((triplet.trigger.as_str(), triplet.shared.as_str()));
        edges.insert((triplet.shared.as_str(), triplet.affected.as_str()));
    }

    let mut out = String::new();
    if let Some(p) = provenance {
        out.push_str(&format!(
            "// {} {} | model: {} | schema: {}\n",
            p.tool, p.version, p.model, p.schema
        ));
    }
    out.push_str("digraph inter_instance_impacts {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=ellipse];\n");
    for id in &shared {
        out.push_str(&format!(
            "  \"{}\" [shape=doubleoctagon, style=filled, fillcolor=lightgoldenrod];\n",
            escape(id)
        ));
    }
    for id in &plain {
        out.push_str(&format!("  \"{}\";\n", escape(id)));
    }
    for (from, to) in &edges {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", escape(from), escape(to)));
    }
    out.push_str("}\n");
    out
}
