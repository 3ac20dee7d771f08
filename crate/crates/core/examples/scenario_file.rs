//! Load a JSON scenario, solve it and print the report the CLI would write.
//!
//! cargo run --example scenario_file -- crates/core/fixtures/mixed_actions.json

use std::path::PathBuf;

use drpa::certify::decompose_gap;
use drpa::io::{load_scenario, Report};

fn main() -> drpa::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/mixed_actions.json"));
    let s = load_scenario(&path)?;
    let mut report = Report::new("gaps", decompose_gap(&s)?)?;
    report.input = Some(path.display().to_string());
    report.grid = Some(s.grid.clone());
    print!("{}", report.to_json()?);
    Ok(())
}
