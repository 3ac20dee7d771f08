use drpa::certify::decompose_gap;
use drpa::model::{
    AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology, TypeDistribution,
};

fn main() -> drpa::Result<()> {
    let techs = vec![
        Technology::from_curve("A", &ProductionCurve::from_fn(1.0, 201, |c| c + c * c)?),
        Technology::from_curve("B", &ProductionCurve::from_fn(2.0, 201, |c| 1.5 * c)?),
    ];
    let robust = AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]);
    let bayes = AmbiguitySet::Singleton(TypeDistribution::from_pairs([("A", 0.5), ("B", 0.5)]));

    for (label, amb) in [("robust", robust), ("equal prior", bayes)] {
        let s = Scenario::new(techs.clone(), amb, ContractFamilySpec::affine(), GridConfig::default());
        let r = decompose_gap(&s)?;
        println!("{label}");
        println!("  z_I = {:.6}  z_II = {:.6}  z_III = {:.6}", r.z_i, r.z_ii, r.z_iii);
        println!("  adjustability gap {:.6}", r.adjustability_gap);
        println!("  information rent  {:.6}", r.information_rent);
        for (t, g) in &r.per_type {
            println!(
                "  {t}: {} surplus, first best {:.4}, Game II {:.4}",
                g.surplus.name(),
                g.first_best,
                g.game_ii_value
            );
        }
    }
    Ok(())
}
