//! Summarize a triplet set with the five standard metrics and render the
//! Markdown table.
//!
//! ```bash
//! cargo run -p crosscase --example impact_metrics
//! ```

use crosscase::formats::{emit_metrics, parse_model, parse_schema, ReportFormat};
use crosscase::impact::{compute_metrics, compute_pdi};

const MODEL: &str = include_str!("../fixtures/hotel-booking.model.json");
const SCHEMA: &str = include_str!("../fixtures/hotel-booking.schema.json");

fn main() {
    let model = parse_model(MODEL).expect("fixture model parses");
    let schema = parse_schema(SCHEMA).expect("fixture schema parses");
    let pdi = compute_pdi(&model, &schema).expect("analysis succeeds");
    let metrics = compute_metrics(&pdi);

    println!("unique shared items:      {}", metrics.unique_shared_count);
    println!("unique trigger items:     {}", metrics.unique_trigger_count);
    println!(
        "impact sets per trigger:  {:.2}",
        metrics.avg_impact_sets_per_trigger.value
    );
    println!(
        "affected items per trigger: {:.2}",
        metrics.avg_affected_per_trigger.value
    );
    println!(
        "triggers per shared item: {:.2}",
        metrics.avg_triggers_per_shared.value
    );

    println!("\n{}", emit_metrics(&metrics, ReportFormat::Markdown, None));
}
