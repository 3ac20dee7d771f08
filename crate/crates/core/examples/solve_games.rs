//! Two agent types, robust over which one shows up.

use drpa::games::{solve_game_i, solve_game_ii, solve_game_iii};
use drpa::model::{AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology};

fn main() -> drpa::Result<()> {
    let a = ProductionCurve::from_fn(1.0, 201, |c| c + c * c)?;
    let b = ProductionCurve::from_fn(2.0, 201, |c| 1.5 * c)?;
    let s = Scenario::new(
        vec![Technology::from_curve("A", &a), Technology::from_curve("B", &b)],
        AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]),
        ContractFamilySpec::affine(),
        GridConfig::default(),
    );
    s.ensure_valid()?;

    let one = solve_game_i(&s)?;
    println!("Game I   {:.6}  contract {:?}", one.value, one.argmax_contract.unwrap());
    println!("Game II  {:.6}", solve_game_ii(&s)?.value);
    println!("Game III {:.6}", solve_game_iii(&s)?.value);
    for (t, v) in &one.per_type_values {
        println!("  type {t}: {v:.6}");
    }
    Ok(())
}
