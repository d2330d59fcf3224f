//! Compute the potential inter-instance data impact triplets of the
//! hotel-booking fixture and the affected set of one trigger item.
//!
//! A triplet (d1, d2; d) means: a change to d1 in one booking can reach
//! the shared item d, and through d affect d2 in a different booking.
//!
//! ```bash
//! cargo run -p crosscase --example pdi_triplets
//! ```

use crosscase::formats::{parse_model, parse_schema};
use crosscase::impact::{affected_sets, compute_pdi};

const MODEL: &str = include_str!("../fixtures/hotel-booking.model.json");
const SCHEMA: &str = include_str!("../fixtures/hotel-booking.schema.json");

fn main() {
    let model = parse_model(MODEL).expect("fixture model parses");
    let schema = parse_schema(SCHEMA).expect("fixture schema parses");

    let pdi = compute_pdi(&model, &schema).expect("analysis succeeds");
    println!(
        "{} triplets over {} shared items and {} triggers",
        pdi.len(),
        pdi.shared_items().len(),
        pdi.trigger_items().len()
    );

    println!("\nshared items (stored outside the identity relation):");
    for item in pdi.shared_items() {
        println!("  {item}");
    }

    // The worked example: a booking id triggers impacts on other
    // bookings of the same customer through the shared membership type.
    println!("\ntriplets triggered by hotelBookingID through MembershipType:");
    for triplet in pdi.iter().filter(|t| {
        t.trigger.as_str() == "hotelBookingID" && t.shared.as_str() == "MembershipType"
    }) {
        println!(
            "  ({}, {}; {})  [{} is {} with the identity relation]",
            triplet.trigger,
            triplet.affected,
            triplet.shared,
            triplet.shared_relation,
            triplet.cardinality_to_ir
        );
    }

    let sets = affected_sets(&pdi, &schema).expect("projection succeeds");
    let booking = &sets[&"hotelBookingID".into()];
    println!("\naffected set of hotelBookingID:");
    for descriptor in &booking.sharing_functions {
        println!(
            "  {} in {} (key: {})",
            descriptor.item,
            descriptor.relation,
            descriptor.pk_attributes.join(", ")
        );
    }
}
