//! Construct a data-aware process model and its relational schema in
//! code, validate both, and query control-flow reachability.
//!
//! ```bash
//! cargo run -p crosscase --example build_a_model
//! ```

use crosscase::ids::ConstraintId;
use crosscase::model::{GatewayType, ProcessModel};
use crosscase::schema::{
    check_bindings, AttributeDef, Cardinality, Relation, ReferenceMapping, RelationalSchema,
};

fn main() {
    // A small ordering process: orders are the case identity, products
    // are shared across orders.
    let model = ProcessModel::builder("ordering")
        .activity("place", "place order")
        .gateway("in-stock", GatewayType::Xor)
        .activity("pack", "pack order")
        .activity("back-order", "back-order")
        .activity("ship", "ship order")
        .flow("f1", "place", "in-stock")
        .flow("f2", "in-stock", "pack")
        .flow("f3", "in-stock", "back-order")
        .flow("f4", "pack", "ship")
        .stored_item("orderTotal", "orderTotal", "Order", "total")
        .stored_item("stockLevel", "stockLevel", "Product", "stock")
        .transient_item("pickList", "pickList")
        .routing_constraint("rc-stock", Some("stockLevel > 0"), ["stockLevel"], ["f2"])
        .iao(Some("orderTotal"), "place", Some("stockLevel"))
        .iao(Some("stockLevel"), "pack", Some("pickList"))
        .iao(Some("pickList"), "ship", Some("orderTotal"))
        .build();

    let schema = RelationalSchema::new(
        [
            Relation::new(
                "Order",
                [AttributeDef::key("orderID"), AttributeDef::plain("total")],
            ),
            Relation::new(
                "Product",
                [AttributeDef::key("productID"), AttributeDef::plain("stock")],
            ),
        ],
        [ReferenceMapping::new("Order", "Product", Cardinality::ManyToOne)],
        "Order",
    );

    let model_report = model.validate();
    let schema_report = schema.validate();
    let binding_report = check_bindings(&model, &schema);
    println!("model validation:    {model_report}");
    println!("schema validation:   {schema_report}");
    println!("binding validation:  {binding_report}");

    let reach = model
        .reachable_from_constraint(&ConstraintId::from("rc-stock"))
        .expect("constraint exists");
    println!("\nactivities reachable from the stock constraint:");
    for activity in &reach {
        println!("  {activity}");
    }

    for relation in ["Order", "Product"] {
        let cardinality = schema
            .cardinality_with_identity(&relation.into())
            .expect("relation connected");
        println!("cardinality of {relation} with the identity relation: {cardinality}");
    }
}
