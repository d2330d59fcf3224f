//! Seeded soundness campaign: simulate many instance logs and check that
//! every runtime-observed inter-instance impact was predicted by the
//! design-time analysis, that identity-relation attributes are never
//! shared, and that every non-trivial sharing set sits in a relation
//! whose cardinality with the identity relation permits sharing.
//!
//! ```bash
//! cargo run -p crosscase --example soundness_check
//! ```

use crosscase::formats::{parse_model, parse_schema};
use crosscase::oracle::{soundness_campaign, GeneratorBounds};

const MODEL: &str = include_str!("../fixtures/hotel-booking.model.json");
const SCHEMA: &str = include_str!("../fixtures/hotel-booking.schema.json");

fn main() {
    let model = parse_model(MODEL).expect("fixture model parses");
    let schema = parse_schema(SCHEMA).expect("fixture schema parses");

    let bounds = GeneratorBounds {
        max_instances: 4,
        max_loop_unroll: 2,
        pk_domain_size: 2,
    };
    let report =
        soundness_campaign(&model, &schema, 0..200, &bounds).expect("campaign runs");

    println!("logs checked:              {}", report.logs_run);
    println!("observed runtime triplets: {}", report.observed_count);
    println!(
        "containment violations:    {}",
        report.containment_violations.len()
    );
    println!("identity-sharing findings: {}", report.identity_violations);
    println!("narrow-sharing findings:   {}", report.cardinality_violations);
    println!(
        "result: {}",
        if report.passed() { "PASS" } else { "FAIL" }
    );
    std::process::exit(if report.passed() { 0 } else { 1 });
}
