//! A bottleneck type makes the affine contract optimal; crossing curves do not.

use drpa::certify::certify_affine_optimal;
use drpa::model::{AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology};

type Curve = (&'static str, f64, fn(f64) -> f64);

fn scenario(curves: [Curve; 2]) -> drpa::Result<Scenario> {
    let mut techs = Vec::new();
    for (id, cap, g) in curves {
        techs.push(Technology::from_curve(id, &ProductionCurve::from_fn(cap, 201, g)?));
    }
    Ok(Scenario::new(
        techs,
        AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]),
        ContractFamilySpec::affine(),
        GridConfig::default(),
    ))
}

fn main() -> drpa::Result<()> {
    let nested = scenario([("A", 2.0, |c| c + c * c / 4.0), ("B", 2.0, |c| c + c * c / 8.0)])?;
    let crossing = scenario([("A", 1.0, |c| c + c * c), ("B", 2.0, |c| 1.5 * c)])?;
    for (name, s) in [("nested", nested), ("crossing", crossing)] {
        let cert = certify_affine_optimal(&s)?;
        println!("{name}: certified = {}, bottleneck = {:?}", cert.certified, cert.bottleneck_type);
        println!("  {}", cert.reason);
        println!("  measured gap {:?}", cert.measured_gap);
    }
    Ok(())
}
