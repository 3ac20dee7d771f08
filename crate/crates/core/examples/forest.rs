//! Conservation subsidies paid as a share of the land kept forested.

use drpa::cases::{forest_linear_payoff, forest_ratio_sweep, forest_scenario, ForestParams};
use drpa::games::solve_game_ii;
use drpa::model::GridConfig;

fn main() -> drpa::Result<()> {
    let params = ForestParams { k: 1.0, h: 1.0, t: 0.4, a0: 2.0 };
    for p in [0.25, 0.5, 0.75] {
        println!("p = {p:.2}: principal payoff {:.4}", forest_linear_payoff(&params, p)?);
    }

    let ts: Vec<f64> = (0..=5).map(|i| f64::from(i) / 5.0).collect();
    for r in forest_ratio_sweep(&params, &ts)? {
        println!("t = {:.1}: p = 1/2 secures {:.3} of the surplus bound", r.t, r.ratio);
    }

    let base = ForestParams { t: 0.0, ..params };
    let solved = solve_game_ii(&forest_scenario(&base, GridConfig { cost_steps: 2001, ..GridConfig::default() })?)?;
    println!("grid solver without baseline: {:.5}", solved.value);
    Ok(())
}
