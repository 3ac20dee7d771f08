//! The agent's problem: pick the action maximizing expected wage minus cost.
//!
//! Indifference (agent payoffs within `eps_tie`) is broken in favour of the
//! principal, then toward the cheaper action, then toward the earlier one.

use serde::{Deserialize, Serialize};

use crate::geometry::{self, SurplusPoint};
use crate::model::{Action, Contract, OutputSpec, ProductionCurve, Technology};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    /// Position of the chosen action in the technology.
    pub index: usize,
    pub action: Action,
    pub agent_payoff: f64,
    pub principal_payoff: f64,
}

/// `E_{y~F}[w(y)]` for the action's output distribution.
pub fn expected_wage(contract: &Contract, action: &Action) -> f64 {
    match (&action.output, contract) {
        (OutputSpec::Deterministic(y), _) => contract.payment(*y),
        (OutputSpec::Distribution(_), Contract::Schedule { .. }) => {
            action.output.support().iter().map(|&(y, p)| p * contract.payment(y)).sum()
        }
        // parametric rules are affine in y, so the expectation passes through
        (OutputSpec::Distribution(_), _) => contract.payment(action.expected_output()),
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Score {
    pub agent: f64,
    pub principal: f64,
    pub cost: f64,
}

/// Index of the agent's favourable-tie-broken best action.
pub(crate) fn select(scores: &[Score], eps_tie: f64) -> usize {
    let top = scores.iter().map(|s| s.agent).fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if s.agent < top - eps_tie {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = scores[b];
                let better = s.principal > cur.principal + eps_tie
                    || (s.principal >= cur.principal - eps_tie && s.cost < cur.cost);
                Some(if better { i } else { b })
            }
        };
    }
    best.expect("technology has at least one action")
}

/// The agent's response to `contract`, with favourable tie-breaking.
///
/// Panics if the technology has no actions.
pub fn best_response(contract: &Contract, technology: &Technology, eps_tie: f64) -> BestResponse {
    assert!(!technology.actions.is_empty(), "technology `{}` has no actions", technology.type_id);
    let scores: Vec<Score> = technology
        .actions
        .iter()
        .map(|a| {
            let wage = expected_wage(contract, a);
            Score { agent: wage - a.cost, principal: a.expected_output() - wage, cost: a.cost }
        })
        .collect();
    let i = select(&scores, eps_tie);
    BestResponse {
        index: i,
        action: technology.actions[i].clone(),
        agent_payoff: scores[i].agent,
        principal_payoff: scores[i].principal,
    }
}

/// Point of the surplus curve chosen under an affine contract: the extremal
/// point of the epigraph of `g(c) - c` in direction `(-1 + θ1, θ1)`.
///
/// `θ0` shifts every agent payoff by the same amount and never changes the choice.
pub fn extremal_response_affine(curve: &ProductionCurve, _theta0: f64, theta1: f64, eps_tie: f64) -> SurplusPoint {
    let surplus = geometry::SurplusCurve::from_production(curve);
    geometry::extremal_point(&surplus, (-1.0 + theta1, theta1), eps_tie)
}

/// Costs and expected outputs of a technology, cached for repeated
/// evaluation of parametric contracts.
#[derive(Clone, Debug)]
pub(crate) struct ActionTable {
    costs: Vec<f64>,
    means: Vec<f64>,
}

impl ActionTable {
    pub fn new(technology: &Technology) -> Self {
        ActionTable {
            costs: technology.actions.iter().map(|a| a.cost).collect(),
            means: technology.actions.iter().map(Action::expected_output).collect(),
        }
    }

    /// Chosen action index and the principal's payoff before the flat part
    /// `θ0` is subtracted, under wage `θ0 + θ1·y`.
    pub fn respond(&self, theta1: f64, eps_tie: f64) -> (usize, f64) {
        let scores: Vec<Score> = self
            .costs
            .iter()
            .zip(&self.means)
            .map(|(&c, &m)| Score { agent: theta1 * m - c, principal: m - theta1 * m, cost: c })
            .collect();
        let i = select(&scores, eps_tie);
        (i, scores[i].principal)
    }

    /// θ1 values in `[0, 1]` at which the agent switches between two
    /// vertices of the upper hull of `(cost, expected output)`.
    pub fn switching_slopes(&self) -> Vec<f64> {
        let mut pts: Vec<(f64, f64)> = self.costs.iter().copied().zip(self.means.iter().copied()).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        pts.dedup_by(|b, a| a.0 == b.0);
        let hull = geometry::upper_hull(&pts);
        hull.windows(2)
            .filter_map(|w| {
                let (dc, dm) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                (dm > 0.0).then(|| dc / dm)
            })
            .filter(|t| (0.0..=1.0).contains(t))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ProductionCurve, DEFAULT_EPS_TIE};

    const EPS: f64 = DEFAULT_EPS_TIE;

    fn convex1() -> ProductionCurve {
        ProductionCurve::from_fn(2.0, 201, |c| c + c * c / 4.0).unwrap()
    }

    #[test]
    fn expected_wage_cases() {
        let det = Action::deterministic(1.0, 4.0);
        let rnd = Action::random(1.0, &[(0.0, 0.5), (4.0, 0.5)]);
        assert_eq!(expected_wage(&Contract::ZERO, &det), 0.0);
        assert_eq!(expected_wage(&Contract::ZERO, &rnd), 0.0);
        assert_eq!(expected_wage(&Contract::Affine { theta0: 1.0, theta1: 0.5 }, &det), 3.0);
        assert_eq!(expected_wage(&Contract::Affine { theta0: 0.0, theta1: 0.5 }, &rnd), 1.0);
        let sched = Contract::Schedule { outputs: vec![0.0, 4.0], payments: vec![0.0, 3.0] };
        assert_eq!(expected_wage(&sched, &rnd), 1.5);
        assert_eq!(expected_wage(&sched, &Action::deterministic(0.0, 2.0)), 0.0);
    }

    #[test]
    fn zero_contract_picks_outside_option() {
        let t = Technology::from_curve("A", &convex1());
        let r = best_response(&Contract::ZERO, &t, EPS);
        assert!(r.action.is_outside_option());
        assert_eq!(r.agent_payoff, 0.0);
        assert_eq!(r.principal_payoff, 0.0);
    }

    #[test]
    fn convex_curve_below_threshold_shirks() {
        let t = Technology::from_curve("A", &convex1());
        let r = best_response(&Contract::Linear { theta1: 0.6 }, &t, EPS);
        assert_eq!(r.action.cost, 0.0);
    }

    #[test]
    fn convex_curve_at_threshold_breaks_tie_upward() {
        let curve = convex1();
        let t = Technology::from_curve("A", &curve);
        let theta1 = curve.cost_cap() / curve.output_at_cap();
        let r = best_response(&Contract::Affine { theta0: 0.0, theta1 }, &t, EPS);
        assert_eq!(r.action.cost, 2.0);
        assert!(r.agent_payoff.abs() < 1e-12);
        assert!((r.principal_payoff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extremal_response_examples() {
        let curve = convex1();
        let p = extremal_response_affine(&curve, 0.0, 1.0, EPS);
        assert_eq!((p.cost, p.surplus), (2.0, 1.0));
        let p = extremal_response_affine(&curve, 0.0, 0.5, EPS);
        assert_eq!((p.cost, p.surplus), (0.0, 0.0));
        let p = extremal_response_affine(&curve, 0.0, 0.8, EPS);
        assert_eq!((p.cost, p.surplus), (2.0, 1.0));
        let q = extremal_response_affine(&curve, 3.0, 0.8, EPS);
        assert_eq!(p, q);
    }

    #[test]
    fn lower_cost_breaks_remaining_ties() {
        // two actions identical for both parties except cost order in input
        let t = Technology::new(
            "A",
            vec![Action::outside_option(), Action::deterministic(1.0, 3.0), Action::deterministic(1.0, 3.0)],
        );
        let r = best_response(&Contract::Linear { theta1: 0.5 }, &t, EPS);
        assert_eq!(r.index, 1);
    }

    #[test]
    fn switching_slopes_of_convex_curve() {
        let t = Technology::from_curve("A", &convex1());
        let s = ActionTable::new(&t).switching_slopes();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-15);
    }
}
