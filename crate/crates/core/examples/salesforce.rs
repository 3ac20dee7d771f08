use drpa::cases::{salesforce_optimal_slope, salesforce_scenario, SalesforceParams};
use drpa::certify::certify_affine_optimal;
use drpa::games::solve_game_i;
use drpa::model::GridConfig;

fn main() -> drpa::Result<()> {
    let params = SalesforceParams {
        cost_low: 0.0,
        cost_high: 0.5,
        effort_low: 0.0,
        effort_high: 1.0,
        outputs: vec![0.0, 1.0, 2.0, 4.0],
        abar: vec![0.3, 0.4, 0.3],
        deltas: vec![0.1, 0.1, 0.05],
        q: 2.0,
    };
    println!("nominal gain {:.4}, robust gain {:.4}", params.nominal_gain(), params.robust_gain());

    let slope = salesforce_optimal_slope(&params)?;
    println!("commission rate {:.6} (capped: {})", slope.theta1, slope.at_cap);

    let s = salesforce_scenario(&params, GridConfig::default())?;
    let cert = certify_affine_optimal(&s)?;
    println!("affine optimal: {} ({})", cert.certified, cert.reason);
    println!("solver: {:?}", solve_game_i(&s)?.argmax_contract.unwrap());
    Ok(())
}
