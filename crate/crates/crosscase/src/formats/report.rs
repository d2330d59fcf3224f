//! Report emission: analysis results as JSON or Markdown text.
//!
//! Output is canonical — triplets sorted by `(d1, d2, d)`, affected sets
//! by trigger — so identical inputs always serialize to identical bytes.
//! Provenance (tool and input names) is opt-in and carries no timestamps,
//! keeping even annotated reports reproducible.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ids::ItemId;
use crate::impact::{AffectedSet, Average, ImpactMetrics, IntraImpactSet, PdiSet};

/// Text format of an emitted report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

/// Optional metadata header identifying the producing invocation.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub model: String,
    pub schema: String,
}

impl Provenance {
    pub(crate) fn markdown_header(&self) -> String {
        format!(
            "<!-- {} {} | model: {} | schema: {} -->\n\n",
            self.tool, self.version, self.model, self.schema
        )
    }
}

/// The five summary-table column names, in emission order.
pub const METRIC_COLUMNS: [&str; 5] = [
    "Number of unique d",
    "Number of unique d_1",
    "Average number of impact sets for d_1",
    "Average number of d_2 per d_1",
    "Average number of d_1 per d",
];

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TripletWire<'a> {
    d1: &'a str,
    d2: &'a str,
    d: &'a str,
    shared_relation: &'a str,
    cardinality_to_ir: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DescriptorWire<'a> {
    item: &'a str,
    relation: &'a str,
    pk_attributes: &'a [String],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AffectedWire<'a> {
    trigger: &'a str,
    sharing_functions: Vec<DescriptorWire<'a>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AverageWire {
    value: f64,
    defined: bool,
}

impl From<&Average> for AverageWire {
    fn from(avg: &Average) -> Self {
        Self {
            value: avg.value,
            defined: avg.defined,
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MetricsWire {
    unique_shared_count: usize,
    unique_trigger_count: usize,
    avg_impact_sets_per_trigger: AverageWire,
    avg_affected_per_trigger: AverageWire,
    avg_triggers_per_shared: AverageWire,
}

impl From<&ImpactMetrics> for MetricsWire {
    fn from(metrics: &ImpactMetrics) -> Self {
        Self {
            unique_shared_count: metrics.unique_shared_count,
            unique_trigger_count: metrics.unique_trigger_count,
            avg_impact_sets_per_trigger: (&metrics.avg_impact_sets_per_trigger).into(),
            avg_affected_per_trigger: (&metrics.avg_affected_per_trigger).into(),
            avg_triggers_per_shared: (&metrics.avg_triggers_per_shared).into(),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FullReportWire<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    triplets: Vec<TripletWire<'a>>,
    affected_sets: Vec<AffectedWire<'a>>,
    metrics: MetricsWire,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

/// Escapes Markdown table-cell content.
fn cell(text: &str) -> String {
    text.replace('|', "\\|")
}

fn format_average(avg: &Average) -> String {
    if !avg.defined {
        return "0 (undefined)".to_owned();
    }
    let rendered = format!("{:.2}", avg.value);
    let trimmed = rendered.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() {
        "0".to_owned()
    } else {
        trimmed.to_owned()
    }
}

fn metrics_table(metrics: &ImpactMetrics) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", METRIC_COLUMNS.join(" | ")));
    out.push_str("| --- | --- | --- | --- | --- |\n");
    out.push_str(&format!(
        "| {} | {} | {} | {} | {} |\n",
        metrics.unique_shared_count,
        metrics.unique_trigger_count,
        format_average(&metrics.avg_impact_sets_per_trigger),
        format_average(&metrics.avg_affected_per_trigger),
        format_average(&metrics.avg_triggers_per_shared),
    ));
    out
}

fn describe(descriptor: &crate::impact::SharingFunctionDescriptor) -> String {
    format!(
        "{} ({}: {})",
        descriptor.item,
        descriptor.relation,
        descriptor.pk_attributes.join(", ")
    )
}

/// Emits the full analysis report: triplets, affected sets, and metrics.
pub fn emit_report(
    pdi: &PdiSet,
    affected: &BTreeMap<ItemId, AffectedSet>,
    metrics: &ImpactMetrics,
    format: ReportFormat,
    provenance: Option<&Provenance>,
) -> String {
    match format {
        ReportFormat::Json => {
            let wire = FullReportWire {
                provenance,
                triplets: pdi
                    .iter()
                    .map(|t| TripletWire {
                        d1: t.trigger.as_str(),
                        d2: t.affected.as_str(),
                        d: t.shared.as_str(),
                        shared_relation: t.shared_relation.as_str(),
                        cardinality_to_ir: t.cardinality_to_ir.to_string(),
                    })
                    .collect(),
                affected_sets: affected
                    .values()
                    .map(|set| AffectedWire {
                        trigger: set.trigger.as_str(),
                        sharing_functions: set
                            .sharing_functions
                            .iter()
                            .map(|d| DescriptorWire {
                                item: d.item.as_str(),
                                relation: d.relation.as_str(),
                                pk_attributes: &d.pk_attributes,
                            })
                            .collect(),
                    })
                    .collect(),
                metrics: metrics.into(),
            };
            to_json(&wire)
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            if let Some(p) = provenance {
                out.push_str(&p.markdown_header());
            }
            out.push_str("# Inter-instance data impact report\n\n");

            out.push_str(&format!(
                "## Potential inter-instance data impact triplets ({})\n\n",
                pdi.len()
            ));
            if pdi.is_empty() {
                out.push_str("No triplets.\n\n");
            } else {
                out.push_str("| d_1 | d_2 | d | relation of d | cardinality with IR |\n");
                out.push_str("| --- | --- | --- | --- | --- |\n");
                for t in pdi.iter() {
                    out.push_str(&format!(
                        "| {} | {} | {} | {} | {} |\n",
                        cell(t.trigger.as_str()),
                        cell(t.affected.as_str()),
                        cell(t.shared.as_str()),
                        cell(t.shared_relation.as_str()),
                        t.cardinality_to_ir,
                    ));
                }
                out.push('\n');
            }

            out.push_str("## Affected sets\n\n");
            if affected.is_empty() {
                out.push_str("No affected sets.\n\n");
            } else {
                out.push_str("| trigger | sharing functions |\n");
                out.push_str("| --- | --- |\n");
                for set in affected.values() {
                    let functions = if set.sharing_functions.is_empty() {
                        "(none)".to_owned()
                    } else {
                        set.sharing_functions
                            .iter()
                            .map(describe)
                            .collect::<Vec<_>>()
                            .join("; ")
                    };
                    out.push_str(&format!(
                        "| {} | {} |\n",
                        cell(set.trigger.as_str()),
                        cell(&functions)
                    ));
                }
                out.push('\n');
            }

            out.push_str("## Metrics\n\n");
            out.push_str(&metrics_table(metrics));
            out
        }
    }
}

#[derive(Serialize)]
struct PairWire<'a> {
    source: &'a str,
    target: &'a str,
}

#[derive(Serialize)]
struct IntraWire<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    pairs: Vec<PairWire<'a>>,
}

/// Emits the intra-instance impact pairs.
pub fn emit_intra(
    intra: &IntraImpactSet,
    format: ReportFormat,
    provenance: Option<&Provenance>,
) -> String {
    match format {
        ReportFormat::Json => to_json(&IntraWire {
            provenance,
            pairs: intra
                .iter()
                .map(|(s, t)| PairWire {
                    source: s.as_str(),
                    target: t.as_str(),
                })
                .collect(),
        }),
        ReportFormat::Markdown => {
            let mut out = String::new();
            if let Some(p) = provenance {
                out.push_str(&p.markdown_header());
            }
            out.push_str(&format!(
                "# Intra-instance data impact pairs ({})\n\n",
                intra.len()
            ));
            if intra.is_empty() {
                out.push_str("No pairs.\n");
            } else {
                out.push_str("| d | d' |\n| --- | --- |\n");
                for (source, target) in intra.iter() {
                    out.push_str(&format!(
                        "| {} | {} |\n",
                        cell(source.as_str()),
                        cell(target.as_str())
                    ));
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SingleAffectedWire<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    trigger: &'a str,
    sharing_functions: Vec<DescriptorWire<'a>>,
}

/// Emits the affected set of a single trigger item.
pub fn emit_affected(
    set: &AffectedSet,
    format: ReportFormat,
    provenance: Option<&Provenance>,
) -> String {
    match format {
        ReportFormat::Json => to_json(&SingleAffectedWire {
            provenance,
            trigger: set.trigger.as_str(),
            sharing_functions: set
                .sharing_functions
                .iter()
                .map(|d| DescriptorWire {
                    item: d.item.as_str(),
                    relation: d.relation.as_str(),
                    pk_attributes: &d.pk_attributes,
                })
                .collect(),
        }),
        ReportFormat::Markdown => {
            let mut out = String::new();
            if let Some(p) = provenance {
                out.push_str(&p.markdown_header());
            }
            out.push_str(&format!("# Affected set of {}\n\n", cell(set.trigger.as_str())));
            if set.sharing_functions.is_empty() {
                out.push_str("No sharing functions reachable.\n");
            } else {
                out.push_str("| item | relation | key attributes |\n| --- | --- | --- |\n");
                for d in &set.sharing_functions {
                    out.push_str(&format!(
                        "| {} | {} | {} |\n",
                        cell(d.item.as_str()),
                        cell(d.relation.as_str()),
                        cell(&d.pk_attributes.join(", "))
                    ));
                }
            }
            out
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MetricsOnlyWire<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    #[serde(flatten)]
    metrics: MetricsWire,
}

/// Emits the metrics table on its own.
pub fn emit_metrics(
    metrics: &ImpactMetrics,
    format: ReportFormat,
    provenance: Option<&Provenance>,
) -> String {
    match format {
        ReportFormat::Json => to_json(&MetricsOnlyWire {
            provenance,
            metrics: metrics.into(),
        }),
        ReportFormat::Markdown => {
            let mut out = String::new();
            if let Some(p) = provenance {
                out.push_str(&p.markdown_header());
            }
            out.push_str(&metrics_table(metrics));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::impact::compute_metrics;

    #[test]
    fn metric_table_carries_the_five_column_names() {
        let table = metrics_table(&compute_metrics(&PdiSet::default()));
        for column in METRIC_COLUMNS {
            assert!(table.contains(column), "missing column {column}");
        }
    }

    #[test]
    fn averages_render_compactly() {
        let avg = |value, defined| Average { value, defined };
        assert_eq!(format_average(&avg(1.0, true)), "1");
        assert_eq!(format_average(&avg(1.5, true)), "1.5");
        assert_eq!(format_average(&avg(5.909, true)), "5.91");
        assert_eq!(format_average(&avg(0.0, false)), "0 (undefined)");
    }

    #[test]
    fn empty_report_is_valid_in_both_formats() {
        let metrics = compute_metrics(&PdiSet::default());
        let markdown = emit_report(
            &PdiSet::default(),
            &BTreeMap::new(),
            &metrics,
            ReportFormat::Markdown,
            None,
        );
        assert!(markdown.contains("No triplets."));
        let json = emit_report(
            &PdiSet::default(),
            &BTreeMap::new(),
            &metrics,
            ReportFormat::Json,
            None,
        );
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["triplets"], serde_json::json!([]));
    }

    #[test]
    fn emission_is_deterministic() {
        let metrics = compute_metrics(&PdiSet::default());
        for format in [ReportFormat::Json, ReportFormat::Markdown] {
            let first = emit_report(&PdiSet::default(), &BTreeMap::new(), &metrics, format, None);
            let second = emit_report(&PdiSet::default(), &BTreeMap::new(), &metrics, format, None);
            assert_eq!(first, second);
        }
    }
}
