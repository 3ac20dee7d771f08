//! Principal payoffs under the three game orderings.
//!
//! * Game I: the principal commits to a contract, then nature picks the
//!   worst type distribution, then the agent responds.
//! * Game II: the type is revealed before the principal contracts.
//! * Game III: the agent commits to an effort level first, so the principal
//!   collects the first-best surplus of every type.
//!
//! Parametric families are searched over a θ grid. When
//! [`GridConfig::breakpoints`](crate::model::GridConfig) is on, the grid is
//! augmented with the exact θ1 values at which some type's best response
//! switches. Between consecutive switches the principal's payoff is linear
//! and decreasing in θ1, so with these points included the grid optimum is
//! the exact optimum over the continuous family.

mod general;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agent::ActionTable;
use crate::error::{Error, Result};
use crate::model::{
    uniform_grid, AmbiguitySet, Contract, ContractFamilySpec, Scenario, Technology, TypeDistribution, TypeId,
};

pub use general::{game_ii_general, general_schedule_search, GeneralSolution};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: f64,
    /// Optimal contract of Game I; absent for Games II and III, whose
    /// optimal contracts (if any) differ per type.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_contract: Option<Contract>,
    pub per_type_values: BTreeMap<TypeId, f64>,
    /// Per-type optimal contracts in Game II.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_type_contracts: BTreeMap<TypeId, Contract>,
    pub worst_distribution: TypeDistribution,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Ambiguity set resolved against the scenario's type order.
#[derive(Clone, Debug)]
pub(crate) enum CompiledAmbiguity {
    Weights(Vec<(usize, f64)>),
    Vertices(Vec<usize>),
    Finite(Vec<Vec<(usize, f64)>>),
}

impl CompiledAmbiguity {
    pub fn new(ambiguity: &AmbiguitySet, order: &[TypeId]) -> Result<Self> {
        let index = |t: &TypeId| {
            order
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::Invalid(format!("ambiguity references unknown type `{t}`")))
        };
        let weights = |d: &TypeDistribution| d.iter().map(|(t, w)| Ok((index(t)?, w))).collect::<Result<Vec<_>>>();
        Ok(match ambiguity {
            AmbiguitySet::Singleton(d) => CompiledAmbiguity::Weights(weights(d)?),
            AmbiguitySet::AllDeltas(ts) | AmbiguitySet::FullSimplex(ts) => {
                if ts.is_empty() {
                    return Err(Error::Invalid("empty ambiguity set".into()));
                }
                CompiledAmbiguity::Vertices(ts.iter().map(index).collect::<Result<_>>()?)
            }
            AmbiguitySet::FiniteSet(ds) => {
                if ds.is_empty() {
                    return Err(Error::Invalid("empty ambiguity set".into()));
                }
                CompiledAmbiguity::Finite(ds.iter().map(weights).collect::<Result<_>>()?)
            }
        })
    }

    /// Worst expected value and the index of the minimizing member
    /// (position in the vertex or distribution list; 0 for a singleton).
    pub fn eval(&self, values: &[f64]) -> (f64, usize) {
        let expect = |ws: &[(usize, f64)]| ws.iter().map(|&(i, w)| w * values[i]).sum::<f64>();
        match self {
            CompiledAmbiguity::Weights(ws) => (expect(ws), 0),
            CompiledAmbiguity::Vertices(vs) => argmin(vs.iter().map(|&i| values[i])),
            CompiledAmbiguity::Finite(ds) => argmin(ds.iter().map(|ws| expect(ws))),
        }
    }
}

/// Minimum with ties resolved to the first occurrence.
fn argmin(it: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (i, v) in it.enumerate() {
        if v < best.0 {
            best = (v, i);
        }
    }
    best
}

fn member_distribution(ambiguity: &AmbiguitySet, member: usize) -> TypeDistribution {
    match ambiguity {
        AmbiguitySet::Singleton(d) => d.clone(),
        AmbiguitySet::AllDeltas(ts) | AmbiguitySet::FullSimplex(ts) => TypeDistribution::delta(&ts[member]),
        AmbiguitySet::FiniteSet(ds) => ds[member].clone(),
    }
}

/// `min_{G ∈ 𝒢} E_{t~G}[v_t]` and a minimizing distribution.
///
/// Over the full simplex the minimum of a linear objective sits at a vertex,
/// so it coincides with the all-deltas case. Ties go to the first listed member.
pub fn worst_expectation(
    ambiguity: &AmbiguitySet,
    per_type_values: &BTreeMap<TypeId, f64>,
) -> Result<(f64, TypeDistribution)> {
    let order: Vec<TypeId> = per_type_values.keys().cloned().collect();
    let values: Vec<f64> = per_type_values.values().copied().collect();
    let compiled = CompiledAmbiguity::new(ambiguity, &order)?;
    let (v, member) = compiled.eval(&values);
    Ok((v, member_distribution(ambiguity, member)))
}

/// Per-scenario evaluation state shared by the solvers.
pub(crate) struct Prepared<'a> {
    pub scenario: &'a Scenario,
    pub order: Vec<TypeId>,
    pub techs: Vec<&'a Technology>,
    pub tables: Vec<ActionTable>,
    pub ambiguity: CompiledAmbiguity,
}

impl<'a> Prepared<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        scenario.ensure_valid()?;
        let order: Vec<TypeId> = scenario.type_ids().cloned().collect();
        let techs: Vec<&Technology> = scenario.technologies.values().collect();
        let tables = techs.iter().map(|t| ActionTable::new(t)).collect();
        let ambiguity = CompiledAmbiguity::new(&scenario.ambiguity, &order)?;
        Ok(Prepared { scenario, order, techs, tables, ambiguity })
    }

    fn per_type_map(&self, values: &[f64]) -> BTreeMap<TypeId, f64> {
        self.order.iter().cloned().zip(values.iter().copied()).collect()
    }

    fn distribution(&self, member: usize) -> TypeDistribution {
        member_distribution(&self.scenario.ambiguity, member)
    }

    /// θ1 candidates for the scenario's family.
    pub fn theta1_candidates(&self) -> Vec<f64> {
        let grid = &self.scenario.grid;
        match self.scenario.family {
            ContractFamilySpec::Constant { .. } => vec![0.0],
            _ => {
                let mut c = uniform_grid(0.0, 1.0, grid.theta1_steps);
                if grid.breakpoints {
                    c.extend(self.tables.iter().flat_map(ActionTable::switching_slopes));
                }
                c.sort_by(f64::total_cmp);
                c.dedup();
                c
            }
        }
    }

    pub fn theta0_candidates(&self) -> Vec<f64> {
        match self.scenario.family {
            ContractFamilySpec::Linear => vec![0.0],
            _ => uniform_grid(0.0, self.scenario.theta0_max(), self.scenario.grid.theta0_steps),
        }
    }

    /// Principal payoff of every type at `θ1`, before subtracting `θ0`.
    pub fn base_payoffs(&self, theta1: f64) -> Vec<f64> {
        let eps = self.scenario.grid.eps_tie;
        self.tables.iter().map(|t| t.respond(theta1, eps).1).collect()
    }
}

/// Game I value: `max_w min_G E_t[principal payoff]`.
pub fn solve_game_i(scenario: &Scenario) -> Result<SolveResult> {
    if !scenario.family.is_parametric() {
        return general_schedule_search(scenario, &[]);
    }
    let prep = Prepared::new(scenario)?;
    let theta0s = prep.theta0_candidates();
    let mut best: Option<(f64, f64, f64, Vec<f64>, usize)> = None;
    let mut shifted = vec![0.0; prep.order.len()];
    for theta1 in prep.theta1_candidates() {
        let base = prep.base_payoffs(theta1);
        for &theta0 in &theta0s {
            for (s, b) in shifted.iter_mut().zip(&base) {
                *s = b - theta0;
            }
            let (v, member) = prep.ambiguity.eval(&shifted);
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, theta0, theta1, shifted.clone(), member));
            }
        }
    }
    let (value, theta0, theta1, values, member) = best.expect("nonempty θ grid");
    Ok(SolveResult {
        value,
        argmax_contract: Some(Contract::parametric(&scenario.family, theta0, theta1)?),
        per_type_values: prep.per_type_map(&values),
        per_type_contracts: BTreeMap::new(),
        worst_distribution: prep.distribution(member),
        warnings: Vec::new(),
    })
}

/// Per-type optimum of a parametric family: `(value, θ0, θ1)`.
pub(crate) fn per_type_optimum(prep: &Prepared<'_>, theta1s: &[f64], k: usize) -> (f64, f64, f64) {
    let eps = prep.scenario.grid.eps_tie;
    // θ0 only lowers the payoff, so the smallest grid value is optimal
    let theta0 = prep.theta0_candidates()[0];
    let mut best = (f64::NEG_INFINITY, theta0, 0.0);
    for &theta1 in theta1s {
        let v = prep.tables[k].respond(theta1, eps).1 - theta0;
        if v > best.0 {
            best = (v, theta0, theta1);
        }
    }
    best
}

/// Game II value: `min_G E_t[max_w principal payoff]`.
pub fn solve_game_ii(scenario: &Scenario) -> Result<SolveResult> {
    let prep = Prepared::new(scenario)?;
    let mut values = Vec::with_capacity(prep.order.len());
    let mut contracts = BTreeMap::new();
    if scenario.family.is_parametric() {
        let theta1s = prep.theta1_candidates();
        for (k, t) in prep.order.iter().enumerate() {
            let (v, theta0, theta1) = per_type_optimum(&prep, &theta1s, k);
            values.push(v);
            contracts.insert(t.clone(), Contract::parametric(&scenario.family, theta0, theta1)?);
        }
    } else if let ContractFamilySpec::General { output_grid, payment_cap } = &scenario.family {
        for (k, t) in prep.order.iter().enumerate() {
            let sol = game_ii_general(prep.techs[k], output_grid, *payment_cap, scenario.grid.eps_tie)?;
            values.push(sol.value);
            contracts.insert(t.clone(), sol.schedule);
        }
    }
    let (value, member) = prep.ambiguity.eval(&values);
    Ok(SolveResult {
        value,
        argmax_contract: None,
        per_type_values: prep.per_type_map(&values),
        per_type_contracts: contracts,
        worst_distribution: prep.distribution(member),
        warnings: Vec::new(),
    })
}

/// Game III value: the worst expectation of every type's first-best surplus.
///
/// This is the same for every surjective family.
pub fn solve_game_iii(scenario: &Scenario) -> Result<SolveResult> {
    let prep = Prepared::new(scenario)?;
    let values: Vec<f64> = prep.techs.iter().map(|t| t.first_best().map(|(_, v)| v)).collect::<Result<_>>()?;
    let (value, member) = prep.ambiguity.eval(&values);
    let mut warnings = Vec::new();
    if !scenario.family.is_surjective() {
        warnings.push(format!(
            "{} family is not surjective in general; Game III value assumes a surjective family",
            scenario.family.name()
        ));
    }
    Ok(SolveResult {
        value,
        argmax_contract: None,
        per_type_values: prep.per_type_map(&values),
        per_type_contracts: BTreeMap::new(),
        worst_distribution: prep.distribution(member),
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaxReport {
    /// `max_θ min_t f(θ, t)`, the Game I value.
    pub maximin: f64,
    /// `min_t max_θ f(θ, t)`.
    pub minimax: f64,
    pub gap: f64,
    pub maximin_contract: Contract,
    pub per_type_max: BTreeMap<TypeId, f64>,
}

/// Both orders of play between the principal's θ and nature's type choice.
pub fn minimax_counterpart(scenario: &Scenario) -> Result<MinimaxReport> {
    match scenario.family {
        ContractFamilySpec::Affine { .. } | ContractFamilySpec::Linear => {}
        _ => return Err(Error::Unsupported("minimax counterpart needs an affine or linear family".into())),
    }
    if !scenario.ambiguity.is_vertex_set() {
        return Err(Error::Unsupported(format!(
            "minimax counterpart needs all_deltas or full_simplex ambiguity, got {}",
            scenario.ambiguity.name()
        )));
    }
    let game_i = solve_game_i(scenario)?;
    let prep = Prepared::new(scenario)?;
    let theta1s = prep.theta1_candidates();
    let per_type: Vec<f64> = (0..prep.order.len()).map(|k| per_type_optimum(&prep, &theta1s, k).0).collect();
    let (minimax, _) = prep.ambiguity.eval(&per_type);
    Ok(MinimaxReport {
        maximin: game_i.value,
        minimax,
        gap: minimax - game_i.value,
        maximin_contract: game_i.argmax_contract.expect("parametric Game I has a contract"),
        per_type_max: prep.per_type_map(&per_type),
    })
}

/// Principal payoff of one type under a parametric contract, as a function
/// of θ1 with `θ0 = 0`.
pub fn payoff_profile(technology: &Technology, theta1s: &[f64], eps_tie: f64) -> Vec<f64> {
    let table = ActionTable::new(technology);
    theta1s.iter().map(|&t| table.respond(t, eps_tie).1).collect()
}

/// θ1 values in `[0, 1]` where the technology's best response switches.
pub fn switching_slopes(technology: &Technology) -> Vec<f64> {
    ActionTable::new(technology).switching_slopes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Action, GridConfig, ProductionCurve};

    fn td(pairs: &[(&str, f64)]) -> TypeDistribution {
        TypeDistribution::from_pairs(pairs.iter().map(|&(t, w)| (t, w)))
    }

    fn values() -> BTreeMap<TypeId, f64> {
        [("A".into(), 1.0), ("B".into(), 3.0)].into_iter().collect()
    }

    #[test]
    fn worst_expectation_variants() {
        let (v, _) = worst_expectation(&AmbiguitySet::Singleton(td(&[("A", 0.5), ("B", 0.5)])), &values()).unwrap();
        assert_eq!(v, 2.0);
        let (v, g) = worst_expectation(&AmbiguitySet::FullSimplex(vec!["A".into(), "B".into()]), &values()).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(g, TypeDistribution::delta(&"A".into()));
        let fs = AmbiguitySet::FiniteSet(vec![td(&[("A", 0.9), ("B", 0.1)]), td(&[("A", 0.1), ("B", 0.9)])]);
        let (v, g) = worst_expectation(&fs, &values()).unwrap();
        assert!((v - 1.2).abs() < 1e-12);
        assert_eq!(g.weight(&"A".into()), 0.9);
    }

    #[test]
    fn worst_expectation_ties_go_first() {
        let vals: BTreeMap<TypeId, f64> = [("A".into(), 2.0), ("B".into(), 2.0)].into_iter().collect();
        let (_, g) = worst_expectation(&AmbiguitySet::AllDeltas(vec!["B".into(), "A".into()]), &vals).unwrap();
        assert_eq!(g, TypeDistribution::delta(&"B".into()));
    }

    #[test]
    fn worst_expectation_missing_type() {
        let r = worst_expectation(&AmbiguitySet::AllDeltas(vec!["Z".into()]), &values());
        assert!(r.is_err());
    }

    fn single(curve: &ProductionCurve, family: ContractFamilySpec) -> Scenario {
        Scenario::new(
            vec![Technology::from_curve("A", curve)],
            AmbiguitySet::AllDeltas(vec!["A".into()]),
            family,
            GridConfig::default(),
        )
    }

    #[test]
    fn constant_family_extracts_nothing() {
        let c = ProductionCurve::from_fn(2.0, 21, |c| c + c * c / 4.0).unwrap();
        let s = single(&c, ContractFamilySpec::constant());
        assert_eq!(solve_game_ii(&s).unwrap().value, 0.0);
        assert_eq!(solve_game_i(&s).unwrap().value, 0.0);
    }

    #[test]
    fn linear_family_warns_in_game_iii() {
        let c = ProductionCurve::from_fn(2.0, 21, |c| c + c * c / 4.0).unwrap();
        let r = solve_game_iii(&single(&c, ContractFamilySpec::Linear)).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn invalid_scenario_is_rejected() {
        let s = Scenario::new(
            vec![Technology::new("A", vec![Action::deterministic(1.0, 3.0)])],
            AmbiguitySet::AllDeltas(vec!["A".into()]),
            ContractFamilySpec::affine(),
            GridConfig::default(),
        );
        assert!(matches!(solve_game_i(&s), Err(Error::Violations(_))));
    }

    #[test]
    fn minimax_rejects_bayesian_ambiguity() {
        let c = ProductionCurve::from_fn(2.0, 21, |c| c + c * c / 4.0).unwrap();
        let s = single(&c, ContractFamilySpec::affine())
            .with_ambiguity(AmbiguitySet::Singleton(TypeDistribution::delta(&"A".into())));
        assert!(matches!(minimax_counterpart(&s), Err(Error::Unsupported(_))));
    }
}
