use std::time::Instant;

use drpa::random::{random_scenario, validate_random, RandomSpec};

fn main() -> drpa::Result<()> {
    let spec = RandomSpec::default();
    let s = random_scenario(7, &spec);
    println!("seed 7: {} types, ambiguity {}", s.technologies.len(), s.ambiguity.name());

    let start = Instant::now();
    let summary = validate_random(200, 7, &spec)?;
    println!("{}/{} passed in {:.2?}", summary.passed, summary.count, start.elapsed());
    for c in summary.instances.iter().filter(|c| !c.passed()) {
        println!("  seed {}: {:?}", c.seed, c.failures);
    }
    Ok(())
}
