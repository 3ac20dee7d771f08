//! Brute-force oracles and instance builders shared by the integration tests.
//!
//! The oracles work on plain `(cost, expected output)` lists and never call
//! the library's solvers.

#![allow(dead_code)]

use std::path::PathBuf;

use drpa::model::{AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology};
use rand::Rng;

pub const TIE: f64 = 1e-9;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// `(cost, mean output)` of every action.
pub fn pairs(t: &Technology) -> Vec<(f64, f64)> {
    t.actions.iter().map(|a| (a.cost, a.expected_output())).collect()
}

/// Principal payoff under `θ0 + θ1·y` with favourable tie-breaking.
pub fn oracle_payoff(actions: &[(f64, f64)], theta0: f64, theta1: f64) -> f64 {
    let agent = |&(c, m): &(f64, f64)| theta0 + theta1 * m - c;
    let top = actions.iter().map(agent).fold(f64::NEG_INFINITY, f64::max);
    actions
        .iter()
        .filter(|a| agent(a) >= top - TIE)
        .map(|&(_, m)| m - theta0 - theta1 * m)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Every θ1 in `[0, 1]` at which some pair of actions of some type ties.
/// The agent's choice is constant between consecutive candidates, so the
/// payoff's supremum on each piece is attained at its left end.
pub fn oracle_thetas(types: &[Vec<(f64, f64)>]) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    for acts in types {
        for &(ci, mi) in acts {
            for &(cj, mj) in acts {
                if mj > mi && cj >= ci {
                    let t = (cj - ci) / (mj - mi);
                    if t <= 1.0 {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn worst(dists: &[Vec<f64>], v: &[f64]) -> f64 {
    dists.iter().map(|w| w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()).fold(f64::INFINITY, f64::min)
}

/// Affine Game I value by enumeration. `θ0` only lowers every payoff, so it is fixed at 0.
pub fn oracle_game_i(types: &[Vec<(f64, f64)>], dists: &[Vec<f64>]) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for t in oracle_thetas(types) {
        let v: Vec<f64> = types.iter().map(|a| oracle_payoff(a, 0.0, t)).collect();
        let z = worst(dists, &v);
        if z > best.0 {
            best = (z, t);
        }
    }
    best
}

pub fn oracle_game_ii(types: &[Vec<(f64, f64)>], dists: &[Vec<f64>]) -> f64 {
    let thetas = oracle_thetas(types);
    let v: Vec<f64> = types
        .iter()
        .map(|a| thetas.iter().map(|&t| oracle_payoff(a, 0.0, t)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    worst(dists, &v)
}

pub fn oracle_game_iii(types: &[Vec<(f64, f64)>], dists: &[Vec<f64>]) -> f64 {
    let v: Vec<f64> = types.iter().map(|a| a.iter().map(|(c, m)| m - c).fold(f64::NEG_INFINITY, f64::max)).collect();
    worst(dists, &v)
}

/// Point masses on each of `n` types.
pub fn deltas(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect()
}

pub fn single(curve: &ProductionCurve, family: ContractFamilySpec, grid: GridConfig) -> Scenario {
    Scenario::new(vec![Technology::from_curve("A", curve)], AmbiguitySet::AllDeltas(vec!["A".into()]), family, grid)
}

pub fn curve(cap: f64, steps: usize, g: impl Fn(f64) -> f64) -> ProductionCurve {
    ProductionCurve::from_fn(cap, steps, g).unwrap()
}

/// Crossing convex pair: `g_A = c + c²` on `[0, 1]`, `g_B = 1.5c` on `[0, 2]`.
pub fn convex_pair(ambiguity: AmbiguitySet) -> Scenario {
    Scenario::new(
        vec![
            Technology::from_curve("A", &curve(1.0, 201, |c| c + c * c)),
            Technology::from_curve("B", &curve(2.0, 201, |c| 1.5 * c)),
        ],
        ambiguity,
        ContractFamilySpec::affine(),
        GridConfig::default(),
    )
}

/// Nested pair, B the bottleneck: `g_A = c + c²/4`, `g_B = c + c²/8`, both on `[0, 2]`.
pub fn bottleneck_pair() -> Scenario {
    Scenario::new(
        vec![
            Technology::from_curve("A", &curve(2.0, 201, |c| c + c * c / 4.0)),
            Technology::from_curve("B", &curve(2.0, 201, |c| c + c * c / 8.0)),
        ],
        AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]),
        ContractFamilySpec::affine(),
        GridConfig::default(),
    )
}

/// Convex surplus `a·c + b·c² + d·c³` (so `g' ≥ 1`) on a random `[0, c̄]`.
pub fn random_convex(rng: &mut impl Rng, steps: usize) -> (ProductionCurve, f64) {
    let (a, b, d) = (rng.gen_range(0.0..1.0), rng.gen_range(0.05..1.0), rng.gen_range(0.0..0.5));
    let cap: f64 = rng.gen_range(0.5..3.0);
    (curve(cap, steps, move |c| c + a * c + b * c * c + d * c * c * c), cap)
}

/// Concave surplus `α·c^β − γ·c`, truncated where `g' = 1`.
pub fn random_concave(rng: &mut impl Rng, steps: usize) -> ProductionCurve {
    let beta: f64 = rng.gen_range(0.3..0.8);
    let gamma: f64 = rng.gen_range(0.2..1.5);
    let cap: f64 = rng.gen_range(0.5..3.0);
    let alpha = gamma * cap.powf(1.0 - beta) / beta;
    curve(cap, steps, move |c| c + alpha * c.powf(beta) - gamma * c)
}
