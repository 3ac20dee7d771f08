//! Surplus shapes: convex closed forms, the concave ratio, and the envelope of a wavy curve.

use drpa::certify::{adjustability_ratio_concave, classify_surplus, convex_closed_forms, quasiconcavity_scan};
use drpa::geometry::{concave_envelope, SurplusCurve};
use drpa::model::{AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology};

fn main() -> drpa::Result<()> {
    let convex = ProductionCurve::from_fn(2.0, 201, |c| c + c * c / 4.0)?;
    let f = convex_closed_forms(&convex)?;
    println!("convex:  θ1* = {:.6}, payoff {:.6}", f.theta1, f.value);

    let concave = ProductionCurve::from_fn(1.0, 4001, |c| 2.0 * c.sqrt())?;
    let r = adjustability_ratio_concave(&concave)?;
    println!("concave: ratio {:.5} = {:.5} / {:.5}", r.ratio, r.numerator, r.denominator);

    let wavy = ProductionCurve::from_fn(3.0 * std::f64::consts::PI, 301, |c| c + c.sin() + 0.2 * c)?;
    println!("wavy:    {}", classify_surplus(&wavy).classification.name());
    let env = concave_envelope(&SurplusCurve::from_production(&wavy));
    let lifted = SurplusCurve::from_production(&wavy)
        .points
        .iter()
        .zip(&env.points)
        .filter(|(p, q)| q.surplus > p.surplus + 1e-12)
        .count();
    println!("         envelope lifts {lifted} of {} samples", env.points.len());

    let sine = ProductionCurve::from_fn(std::f64::consts::PI, 2001, |c| c + c.sin())?;
    let s = Scenario::new(
        vec![Technology::from_curve("sine", &sine)],
        AmbiguitySet::AllDeltas(vec!["sine".into()]),
        ContractFamilySpec::Linear,
        GridConfig::default(),
    );
    for (t, q) in quasiconcavity_scan(&s)? {
        println!("{t}: payoff in θ1 quasi-concave = {}", q.quasi_concave);
    }
    Ok(())
}
