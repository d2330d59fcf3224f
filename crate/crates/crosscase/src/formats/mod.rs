//! Document formats: parsing and canonical serialization.
//!
//! Models, schemas, and instance logs travel as JSON documents with a
//! fixed envelope: `kind` (one of `model`, `schema`, `log`), `version`
//! (currently `"1.0"`), and a kind-specific `body`. Unknown fields are
//! rejected, diagnostics carry the document path and line/column, and
//! nothing in this module panics on malformed input.
//!
//! Canonical emission sorts every collection, so emitting the same value
//! twice yields byte-identical text and `parse(emit(parse(text)))` equals
//! `parse(text)` for every valid document.

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{ItemId, NodeId};
use crate::model::{Binding, GatewayType, ProcessModel};
use crate::oracle::{DataItemInstance, InstanceLog, PkValue, ProcessInstance, Scalar};
use crate::report::ValidationReport;
use crate::schema::{AttributeDef, Cardinality, Relation, ReferenceMapping, RelationalSchema};

mod dot;
mod report;

pub use dot::emit_dot;
pub use report::{
    emit_affected, emit_intra, emit_metrics, emit_report, Provenance, ReportFormat,
    METRIC_COLUMNS,
};

/// The document version this build reads and writes.
pub const DOCUMENT_VERSION: &str = "1.0";

/// Errors produced while reading a document.
#[derive(Debug, Error)]
pub enum ParseError {
    /// Malformed JSON or a body that does not match the expected shape.
    /// `message` carries the underlying line/column diagnostic.
    #[error("invalid document at `{path}`: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("expected a {expected} document, found kind `{found}`")]
    WrongKind { expected: &'static str, found: String },

    #[error("unsupported document version `{found}` (this build reads {DOCUMENT_VERSION})")]
    UnsupportedVersion { found: String },

    #[error("{section}: duplicate id `{id}`")]
    DuplicateId { section: &'static str, id: String },

    #[error("{section}: {message}")]
    Invalid { section: String, message: String },

    #[error("{subject} failed validation:\n{report}")]
    Validation {
        subject: String,
        report: ValidationReport,
    },
}

impl ParseError {
    /// Line/column of the underlying JSON diagnostic, when there is one.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            Self::Syntax { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

fn deserialize_document<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|error| {
        let inner = error.inner();
        ParseError::Syntax {
            path: error.path().to_string(),
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeProbe {
    kind: String,
    version: String,
    #[allow(dead_code)]
    body: serde_json::Value,
}

fn check_envelope(text: &str, expected: &'static str) -> Result<(), ParseError> {
    let probe: EnvelopeProbe = deserialize_document(text)?;
    if probe.version != DOCUMENT_VERSION {
        return Err(ParseError::UnsupportedVersion {
            found: probe.version,
        });
    }
    if probe.kind != expected {
        return Err(ParseError::WrongKind {
            expected,
            found: probe.kind,
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<B> {
    kind: String,
    version: String,
    body: B,
}

// ---------------------------------------------------------------------
// model documents
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ModelBody {
    name: String,
    activities: Vec<ActivityWire>,
    gateways: Vec<GatewayWire>,
    flows: Vec<FlowWire>,
    routing_constraints: Vec<ConstraintWire>,
    data_items: Vec<DataItemWire>,
    iao: Vec<IaoWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActivityWire {
    id: String,
    name: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GatewayWire {
    id: String,
    #[serde(rename = "type")]
    gateway_type: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowWire {
    id: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ConstraintWire {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expression: Option<String>,
    support: Vec<String>,
    guarded_flows: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataItemWire {
    id: String,
    name: String,
    /// `null` (or omitted) means the item is transient.
    #[serde(default)]
    binding: Option<BindingWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BindingWire {
    relation: String,
    attribute: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IaoWire {
    input: Option<String>,
    activity: String,
    output: Option<String>,
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<ProcessModel, ParseError> {
    check_envelope(text, "model")?;
    let envelope: Envelope<ModelBody> = deserialize_document(text)?;
    let body = envelope.body;

    let mut node_ids: BTreeSet<&str> = BTreeSet::new();
    for activity in &body.activities {
        if !node_ids.insert(&activity.id) {
            return Err(ParseError::DuplicateId {
                section: "body.activities",
                id: activity.id.clone(),
            });
        }
    }
    for gateway in &body.gateways {
        if !node_ids.insert(&gateway.id) {
            return Err(ParseError::DuplicateId {
                section: "body.gateways",
                id: gateway.id.clone(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for flow in &body.flows {
        if !seen.insert(&flow.id) {
            return Err(ParseError::DuplicateId {
                section: "body.flows",
                id: flow.id.clone(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for rc in &body.routing_constraints {
        if !seen.insert(&rc.id) {
            return Err(ParseError::DuplicateId {
                section: "body.routingConstraints",
                id: rc.id.clone(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for item in &body.data_items {
        if !seen.insert(&item.id) {
            return Err(ParseError::DuplicateId {
                section: "body.dataItems",
                id: item.id.clone(),
            });
        }
    }

    let mut builder = ProcessModel::builder(body.name);
    for activity in body.activities {
        builder = builder.activity(activity.id.as_str(), activity.name);
    }
    for (index, gateway) in body.gateways.into_iter().enumerate() {
        let gateway_type = match gateway.gateway_type.as_str() {
            "xor" => GatewayType::Xor,
            "and" => GatewayType::And,
            other => {
                return Err(ParseError::Invalid {
                    section: format!("body.gateways[{index}]"),
                    message: format!(
                        "gateway `{}`: type must be `xor` or `and` (got `{other}`)",
                        gateway.id
                    ),
                })
            }
        };
        builder = builder.gateway(gateway.id.as_str(), gateway_type);
    }
    for flow in body.flows {
        builder = builder.flow(flow.id.as_str(), flow.source.as_str(), flow.target.as_str());
    }
    for rc in body.routing_constraints {
        builder = builder.routing_constraint(
            rc.id.as_str(),
            rc.expression.as_deref(),
            rc.support,
            rc.guarded_flows,
        );
    }
    for item in body.data_items {
        builder = match item.binding {
            Some(binding) => builder.stored_item(
                item.id.as_str(),
                item.name,
                binding.relation.as_str(),
                binding.attribute,
            ),
            None => builder.transient_item(item.id.as_str(), item.name),
        };
    }
    for triple in body.iao {
        builder = builder.iao(
            triple.input.as_deref(),
            triple.activity.as_str(),
            triple.output.as_deref(),
        );
    }

    let model = builder.build();
    let validation = model.validate();
    if !validation.is_empty() {
        return Err(ParseError::Validation {
            subject: format!("model `{}`", model.name()),
            report: validation,
        });
    }
    Ok(model)
}

/// Serializes a model canonically: every section sorted by id.
pub fn emit_model(model: &ProcessModel) -> String {
    let body = ModelBody {
        name: model.name().to_owned(),
        activities: model
            .activities()
            .map(|a| ActivityWire {
                id: a.id.to_string(),
                name: a.name.clone(),
            })
            .collect(),
        gateways: model
            .gateways()
            .map(|g| GatewayWire {
                id: g.id.to_string(),
                gateway_type: g.gateway_type.to_string(),
            })
            .collect(),
        flows: model
            .flows()
            .map(|f| FlowWire {
                id: f.id.to_string(),
                source: f.source.to_string(),
                target: f.target.to_string(),
            })
            .collect(),
        routing_constraints: model
            .routing_constraints()
            .map(|rc| ConstraintWire {
                id: rc.id.to_string(),
                expression: rc.expression.clone(),
                support: rc.support.iter().map(ToString::to_string).collect(),
                guarded_flows: rc.guarded_flows.iter().map(ToString::to_string).collect(),
            })
            .collect(),
        data_items: model
            .data_items()
            .map(|d| DataItemWire {
                id: d.id.to_string(),
                name: d.name.clone(),
                binding: match &d.binding {
                    Binding::Transient => None,
                    Binding::Stored {
                        relation,
                        attribute,
                    } => Some(BindingWire {
                        relation: relation.to_string(),
                        attribute: attribute.clone(),
                    }),
                },
            })
            .collect(),
        iao: model
            .iao_triples()
            .map(|t| IaoWire {
                input: t.input.as_ref().map(ToString::to_string),
                activity: t.activity.to_string(),
                output: t.output.as_ref().map(ToString::to_string),
            })
            .collect(),
    };
    finish_document("model", body)
}

// ---------------------------------------------------------------------
// schema documents
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct SchemaBody {
    identity_relation: String,
    relations: Vec<RelationWire>,
    references: Vec<ReferenceWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationWire {
    name: String,
    attributes: Vec<AttributeWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct AttributeWire {
    name: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    primary_key: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceWire {
    from: String,
    to: String,
    cardinality: String,
}

/// Parses and validates a schema document.
pub fn parse_schema(text: &str) -> Result<RelationalSchema, ParseError> {
    check_envelope(text, "schema")?;
    let envelope: Envelope<SchemaBody> = deserialize_document(text)?;
    let body = envelope.body;

    let mut seen = BTreeSet::new();
    for relation in &body.relations {
        if !seen.insert(&relation.name) {
            return Err(ParseError::DuplicateId {
                section: "body.relations",
                id: relation.name.clone(),
            });
        }
    }

    let relations: Vec<Relation> = body
        .relations
        .into_iter()
        .map(|r| {
            Relation::new(
                r.name.as_str(),
                r.attributes.into_iter().map(|a| AttributeDef {
                    name: a.name,
                    is_primary_key: a.primary_key,
                }),
            )
        })
        .collect();

    let mut references = Vec::new();
    for (index, reference) in body.references.into_iter().enumerate() {
        let cardinality: Cardinality =
            reference
                .cardinality
                .parse()
                .map_err(|message| ParseError::Invalid {
                    section: format!("body.references[{index}]"),
                    message,
                })?;
        references.push(ReferenceMapping::new(
            reference.from.as_str(),
            reference.to.as_str(),
            cardinality,
        ));
    }

    let schema = RelationalSchema::new(relations, references, body.identity_relation.as_str());
    let validation = schema.validate();
    if !validation.is_empty() {
        return Err(ParseError::Validation {
            subject: "schema".to_owned(),
            report: validation,
        });
    }
    Ok(schema)
}

/// Serializes a schema canonically.
pub fn emit_schema(schema: &RelationalSchema) -> String {
    let body = SchemaBody {
        identity_relation: schema.identity_relation().to_string(),
        relations: schema
            .relations()
            .map(|r| RelationWire {
                name: r.name.to_string(),
                attributes: r
                    .attributes
                    .iter()
                    .map(|a| AttributeWire {
                        name: a.name.clone(),
                        primary_key: a.is_primary_key,
                    })
                    .collect(),
            })
            .collect(),
        references: schema
            .references()
            .iter()
            .map(|r| ReferenceWire {
                from: r.from.to_string(),
                to: r.to.to_string(),
                cardinality: r.cardinality.to_string(),
            })
            .collect(),
    };
    finish_document("schema", body)
}

// ---------------------------------------------------------------------
// log documents
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct LogBody {
    model_name: String,
    instances: Vec<InstanceWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct InstanceWire {
    case_id: Scalar,
    trace: Vec<String>,
    #[serde(default)]
    data_items: Vec<ItemInstanceWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ItemInstanceWire {
    item: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pk_value: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Scalar>,
}

/// Parses a log document. Case ids must be unique; everything that needs
/// the companion model (trace activities, item bindings) is checked later
/// by [`crate::oracle::validate_log`].
pub fn parse_log(text: &str) -> Result<InstanceLog, ParseError> {
    check_envelope(text, "log")?;
    let envelope: Envelope<LogBody> = deserialize_document(text)?;
    let body = envelope.body;

    let mut seen = BTreeSet::new();
    for instance in &body.instances {
        if !seen.insert(&instance.case_id) {
            return Err(ParseError::DuplicateId {
                section: "body.instances",
                id: instance.case_id.to_string(),
            });
        }
    }

    let instances: Vec<ProcessInstance> = body
        .instances
        .into_iter()
        .map(|wire| ProcessInstance {
            case_id: wire.case_id,
            trace: wire.trace.into_iter().map(NodeId::from).collect(),
            data_items: wire
                .data_items
                .into_iter()
                .map(|item| DataItemInstance {
                    item: ItemId::from(item.item),
                    pk_value: item.pk_value.map(PkValue),
                    value: item.value,
                })
                .collect(),
        })
        .collect();

    Ok(InstanceLog::new(body.model_name, instances))
}

/// Serializes a log canonically: instances sorted by case id, item
/// instances sorted within each instance.
pub fn emit_log(log: &InstanceLog) -> String {
    let body = LogBody {
        model_name: log.model_name().to_owned(),
        instances: log
            .instances()
            .iter()
            .map(|pi| InstanceWire {
                case_id: pi.case_id.clone(),
                trace: pi.trace.iter().map(ToString::to_string).collect(),
                data_items: pi
                    .data_items
                    .iter()
                    .map(|item| ItemInstanceWire {
                        item: item.item.to_string(),
                        pk_value: item.pk_value.as_ref().map(|pk| pk.0.clone()),
                        value: item.value.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    finish_document("log", body)
}

fn finish_document<B: Serialize>(kind: &str, body: B) -> String {
    let envelope = Envelope {
        kind: kind.to_owned(),
        version: DOCUMENT_VERSION.to_owned(),
        body,
    };
    let mut text =
        serde_json::to_string_pretty(&envelope).expect("document serialization cannot fail");
    text.push('\n');
    text
}
