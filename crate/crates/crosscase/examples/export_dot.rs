//! Render the triplet set as a Graphviz digraph on stdout. Pipe it into
//! `dot -Tsvg` to get a picture; shared items are drawn as filled double
//! octagons.
//!
//! ```bash
//! cargo run -p crosscase --example export_dot | dot -Tsvg > impacts.svg
//! ```

use crosscase::formats::{emit_dot, parse_model, parse_schema};
use crosscase::impact::compute_pdi;

const MODEL: &str = include_str!("../fixtures/hotel-booking.model.json");
const SCHEMA: &str = include_str!("../fixtures/hotel-booking.schema.json");

fn main() {
    let model = parse_model(MODEL).expect("fixture model parses");
    let schema = parse_schema(SCHEMA).expect("fixture schema parses");
    let pdi = compute_pdi(&model, &schema).expect("analysis succeeds");
    print!("{}", emit_dot(&pdi, None));
}
