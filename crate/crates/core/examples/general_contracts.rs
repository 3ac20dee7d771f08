//! Output-contingent schedules against the affine family when output is noisy.

use drpa::games::{game_ii_general, general_schedule_search, solve_game_i};
use drpa::model::{Action, AmbiguitySet, ContractFamilySpec, GridConfig, Scenario, Technology};

fn main() -> drpa::Result<()> {
    let t = Technology::new(
        "A",
        vec![Action::outside_option(), Action::deterministic(1.0, 2.0), Action::random(0.4, &[(0.0, 0.5), (2.0, 0.5)])],
    );
    let s = Scenario::new(
        vec![t.clone()],
        AmbiguitySet::AllDeltas(vec!["A".into()]),
        ContractFamilySpec::affine(),
        GridConfig::default(),
    );
    let affine = solve_game_i(&s)?;
    println!("affine:  {:.4}", affine.value);

    let general = s.with_family(ContractFamilySpec::General { output_grid: vec![0.0, 2.0], payment_cap: 2.0 });
    let searched = general_schedule_search(&general, &[affine.argmax_contract.unwrap()])?;
    println!("general: {:.4} with {:?}", searched.value, searched.argmax_contract.unwrap());

    let ii = game_ii_general(&t, &[0.0, 2.0], 2.0, 1e-9)?;
    println!("type known in advance: {:.4} with {:?}", ii.value, ii.schedule);
    Ok(())
}
