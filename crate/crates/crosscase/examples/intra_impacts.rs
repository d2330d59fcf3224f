//! Compute the intra-instance impact pairs of the hotel-booking fixture:
//! which data items can affect which other items within one booking.
//!
//! ```bash
//! cargo run -p crosscase --example intra_impacts
//! ```

use crosscase::formats::parse_model;
use crosscase::impact::intra_impact_analysis;

const MODEL: &str = include_str!("../fixtures/hotel-booking.model.json");

fn main() {
    let model = parse_model(MODEL).expect("fixture parses");
    let intra = intra_impact_analysis(&model).expect("fixture is well-formed");

    println!("{} intra-instance impact pairs in `{}`:", intra.len(), model.name());
    for (source, target) in intra.iter() {
        println!("  {source} -> {target}");
    }

    // The credit constraint guards the path into check availability, so
    // the credit balance influences everything written downstream.
    let credits = "TotalCredits".into();
    let downstream = intra.targets_of(&credits);
    println!("\nitems impacted by TotalCredits: {}", downstream.len());
    for item in &downstream {
        println!("  {item}");
    }
}
