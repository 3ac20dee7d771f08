use drpa::games::minimax_counterpart;
use drpa::model::{AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology};

fn main() -> drpa::Result<()> {
    let s = Scenario::new(
        vec![
            Technology::from_curve("A", &ProductionCurve::from_fn(1.0, 201, |c| c + c * c)?),
            Technology::from_curve("B", &ProductionCurve::from_fn(2.0, 201, |c| 1.5 * c)?),
        ],
        AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]),
        ContractFamilySpec::affine(),
        GridConfig::default(),
    );
    let m = minimax_counterpart(&s)?;
    println!("max over θ of min over types: {:.6}", m.maximin);
    println!("min over types of max over θ: {:.6}", m.minimax);
    println!("order of play is worth {:.6}", m.gap);
    println!("{:?}", m.per_type_max);
    Ok(())
}
