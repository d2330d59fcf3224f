//! Design-time analysis of data impacts within and across instances of a
//! business process.
//!
//! A data-aware process model (activities, gateways, control flows, data
//! items, input/output triples, data-predicated routing constraints) is
//! paired with a relational data model that designates one *identity
//! relation* — the relation whose tuples correspond one-to-one with
//! process instances. From those two inputs the crate computes:
//!
//! - **intra-instance impact pairs** — which items can affect which
//!   other items inside one instance ([`impact::intra_impact_analysis`]),
//! - **potential inter-instance impact triplets** `(d1, d2; d)` — a
//!   change to `d1` in one instance can reach another instance through a
//!   shared item `d` and affect `d2` there ([`impact::compute_pdi`]),
//! - **affected sets and metrics** over those triplets
//!   ([`impact::affected_sets`], [`impact::compute_metrics`]).
//!
//! Because the design-time result is an over-approximation, the
//! [`oracle`] module provides the runtime side: simulated process
//! instances with cardinality-consistent key assignments, exhaustive
//! enumeration of the impacts actually observable in a log, and checks
//! that everything observed was predicted.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── build_a_model.rs      # construct a model/schema pair in code
//! ├── intra_impacts.rs      # intra-instance impact pairs of the fixture
//! ├── pdi_triplets.rs       # inter-instance triplets + affected sets
//! ├── impact_metrics.rs     # the five summary metrics
//! ├── export_dot.rs         # Graphviz rendering of the triplet set
//! ├── simulate_log.rs       # deterministic random instance logs
//! └── soundness_check.rs    # seeded campaign: observed ⊆ predicted
//! ```
//!
//! ```bash
//! cargo run -p crosscase --example pdi_triplets
//! cargo run -p crosscase --example soundness_check
//! ```
//!
//! The same functionality is scriptable through the thin `crosscase`
//! binary (`intra`, `pdi`, `affected`, `metrics`, `graph`, `oracle`
//! subcommands); see the crate README.
//!
//! ## Quick start
//!
//! ```
//! use crosscase::model::{GatewayType, ProcessModel};
//! use crosscase::schema::{AttributeDef, Cardinality, Relation, ReferenceMapping, RelationalSchema};
//!
//! // Orders are the process identity; products are shared across orders.
//! let model = ProcessModel::builder("ordering")
//!     .activity("place", "place order")
//!     .activity("pack", "pack order")
//!     .flow("f1", "place", "pack")
//!     .stored_item("orderTotal", "orderTotal", "Order", "total")
//!     .stored_item("stockLevel", "stockLevel", "Product", "stock")
//!     .iao(Some("orderTotal"), "place", Some("stockLevel"))
//!     .iao(Some("stockLevel"), "pack", Some("orderTotal"))
//!     .build();
//! let schema = RelationalSchema::new(
//!     [
//!         Relation::new("Order", [AttributeDef::key("orderID"), AttributeDef::plain("total")]),
//!         Relation::new("Product", [AttributeDef::key("productID"), AttributeDef::plain("stock")]),
//!     ],
//!     [ReferenceMapping::new("Order", "Product", Cardinality::ManyToOne)],
//!     "Order",
//! );
//!
//! let pdi = crosscase::impact::compute_pdi(&model, &schema).unwrap();
//! // stockLevel lives in a shared relation, orderTotal impacts it, and it
//! // impacts orderTotal of other orders:
//! assert!(pdi.contains_projection(
//!     &"orderTotal".into(),
//!     &"orderTotal".into(),
//!     &"stockLevel".into(),
//! ));
//! let _ = GatewayType::Xor; // gateways work the same way
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod error;
pub mod formats;
pub mod ids;
pub mod impact;
pub mod model;
pub mod oracle;
pub mod report;
pub mod schema;

pub use error::Error;
pub use ids::{ConstraintId, FlowId, ItemId, NodeId, RelationName};
pub use report::{ValidationReport, Violation, ViolationKind};
