//! Seeded random scenarios and the invariant checks run against them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::decompose_gap;
use crate::error::Result;
use crate::games::{general_schedule_search, solve_game_i, solve_game_ii, solve_game_iii};
use crate::model::{
    Action, AmbiguitySet, ContractFamilySpec, GridConfig, Scenario, Technology, TypeDistribution, TypeId,
};

/// Size limits for generated scenarios.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub max_types: usize,
    /// Actions per type, counting the outside option.
    pub max_actions: usize,
    /// Distinct output levels across the scenario, counting zero.
    pub output_levels: usize,
    /// Chance that a non-null action has a random output.
    pub random_share: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_types: 4, max_actions: 8, output_levels: 5, random_share: 0.5 }
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn random_action(rng: &mut ChaCha8Rng, levels: &[f64], random_share: f64) -> Action {
    let cost = round2(rng.gen_range(0.0..5.0));
    if rng.gen_bool(random_share) {
        let k = rng.gen_range(2..=3.min(levels.len()));
        let ys: Vec<f64> = levels.choose_multiple(rng, k).copied().collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let outcomes: Vec<(f64, f64)> = ys.into_iter().zip(raw.iter().map(|w| w / total)).collect();
        Action::random(cost, &outcomes)
    } else {
        Action::deterministic(cost, *levels.choose(rng).expect("nonempty levels"))
    }
}

fn random_distribution(rng: &mut ChaCha8Rng, ids: &[TypeId]) -> TypeDistribution {
    let raw: Vec<f64> = ids.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    TypeDistribution::from_pairs(ids.iter().cloned().zip(raw.into_iter().map(|w| w / total)))
}

/// Reproducible random scenario over the affine family.
///
/// Every type has the outside option and at least one action with positive
/// expected surplus (types failing that are redrawn).
pub fn random_scenario(seed: u64, spec: &RandomSpec) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = vec![0.0];
    while levels.len() < spec.output_levels.max(2) {
        let y = f64::from(rng.gen_range(1..=20u32)) / 2.0;
        if !levels.contains(&y) {
            levels.push(y);
        }
    }
    let n_types = rng.gen_range(1..=spec.max_types.max(1));
    let ids: Vec<TypeId> = (0..n_types).map(|i| TypeId(format!("t{i}"))).collect();
    let mut techs = Vec::with_capacity(n_types);
    for id in &ids {
        let n_actions = rng.gen_range(2..=spec.max_actions.max(2));
        let tech = loop {
            let mut actions = vec![Action::outside_option()];
            actions.extend((1..n_actions).map(|_| random_action(&mut rng, &levels, spec.random_share)));
            let t = Technology::new(id.clone(), actions);
            if t.actions.iter().any(|a| a.surplus() > 0.0) {
                break t;
            }
        };
        techs.push(tech);
    }
    let ambiguity = match rng.gen_range(0..4) {
        0 => AmbiguitySet::Singleton(random_distribution(&mut rng, &ids)),
        1 => AmbiguitySet::AllDeltas(ids.clone()),
        2 => {
            let k = rng.gen_range(2..=3);
            AmbiguitySet::FiniteSet((0..k).map(|_| random_distribution(&mut rng, &ids)).collect())
        }
        _ => AmbiguitySet::FullSimplex(ids.clone()),
    };
    let grid = GridConfig { theta1_steps: 201, theta0_steps: 11, ..GridConfig::default() };
    Scenario::new(techs, ambiguity, ContractFamilySpec::affine(), grid)
}

/// Distinct outputs of the scenario's supports, ascending.
pub fn output_grid(scenario: &Scenario) -> Vec<f64> {
    let mut ys: Vec<f64> = scenario
        .technologies
        .values()
        .flat_map(|t| t.actions.iter().flat_map(|a| a.output.support().into_iter().map(|(y, _)| y)))
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub seed: u64,
    pub z_i: f64,
    pub z_ii: f64,
    pub z_iii: f64,
    /// Game I value of the general family (searched schedules include the affine optimum).
    pub z_i_general: f64,
    pub z_ii_general: f64,
    pub failures: Vec<String>,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the payoff ordering, the gap identity, the family ordering and
/// invariance under replacing random outputs by their means.
pub fn check_instance(scenario: &Scenario, seed: u64) -> Result<InstanceCheck> {
    let eps = scenario.grid.eps_val;
    let mut failures = Vec::new();
    let (z_i, z_ii, z_iii) = match decompose_gap(scenario) {
        Ok(r) => {
            let lhs = r.optimality_gap_bound;
            let rhs = r.adjustability_gap + r.information_rent;
            if (lhs - rhs).abs() > eps {
                failures.push(format!("gap identity: {lhs} vs {rhs}"));
            }
            (r.z_i, r.z_ii, r.z_iii)
        }
        Err(e) => {
            failures.push(e.to_string());
            let z = |r: Result<crate::games::SolveResult>| r.map(|r| r.value);
            (z(solve_game_i(scenario))?, z(solve_game_ii(scenario))?, z(solve_game_iii(scenario))?)
        }
    };

    let affine = solve_game_i(scenario)?.argmax_contract.expect("parametric contract");
    let ys = output_grid(scenario);
    let cap = ys.last().copied().unwrap_or(0.0);
    let general = scenario.with_family(ContractFamilySpec::General { output_grid: ys, payment_cap: cap });
    let z_i_general = general_schedule_search(&general, &[affine])?.value;
    if z_i > z_i_general + eps {
        failures.push(format!("family ordering: affine {z_i} exceeds general {z_i_general}"));
    }
    let z_ii_general = solve_game_ii(&general)?.value;
    if z_i_general > z_ii_general + eps || z_ii_general > z_iii + eps {
        failures.push(format!("general chain: {z_i_general} / {z_ii_general} / {z_iii}"));
    }

    let reduced = scenario.mean_reduced();
    for (name, a, b) in [
        ("I", z_i, solve_game_i(&reduced)?.value),
        ("II", z_ii, solve_game_ii(&reduced)?.value),
        ("III", z_iii, solve_game_iii(&reduced)?.value),
    ] {
        if (a - b).abs() > eps {
            failures.push(format!("mean reduction changed Game {name}: {a} vs {b}"));
        }
    }
    Ok(InstanceCheck { seed, z_i, z_ii, z_iii, z_i_general, z_ii_general, failures })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub count: usize,
    pub base_seed: u64,
    pub passed: usize,
    pub instances: Vec<InstanceCheck>,
}

/// Runs [`check_instance`] on `count` scenarios seeded `base_seed + i`.
pub fn validate_random(count: usize, base_seed: u64, spec: &RandomSpec) -> Result<ValidationSummary> {
    let mut instances = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let seed = base_seed.wrapping_add(i);
        instances.push(check_instance(&random_scenario(seed, spec), seed)?);
    }
    let passed = instances.iter().filter(|c| c.passed()).count();
    Ok(ValidationSummary { count, base_seed, passed, instances })
}
