//! The general (unrestricted nonnegative) contract family.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Prepared, SolveResult};
use crate::agent::{best_response, select, BestResponse, Score};
use crate::error::{Error, Result};
use crate::model::{uniform_grid, Contract, ContractFamilySpec, Scenario, Technology};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolution {
    /// Principal payoff under `schedule`; the first-best surplus whenever some schedule implements it.
    pub value: f64,
    pub schedule: Contract,
    pub response: BestResponse,
}

/// Game II optimum of the general family for one type.
///
/// With deterministic outputs the principal pays, at each output level, the
/// smallest cost of any action reaching it and nothing elsewhere: every
/// agent payoff is then at most zero, the cheapest producers tie, and
/// favourable tie-breaking hands the principal the first-best surplus.
///
/// Random outputs (or a payment cap below those costs) call for the general
/// construction: for every target action, a linear program finds the
/// cheapest schedule on `output_grid` within `[0, payment_cap]` under which
/// the target is a best response. Each schedule is checked against the
/// agent's actual response and the best verified one is returned.
pub fn game_ii_general(
    technology: &Technology,
    output_grid: &[f64],
    payment_cap: f64,
    eps_tie: f64,
) -> Result<GeneralSolution> {
    if technology.actions.is_empty() {
        return Err(Error::NoActions);
    }
    let supports = grid_supports(technology, output_grid)?;
    if technology.actions.iter().all(|a| a.output.is_deterministic()) {
        if let Some(sol) = cost_covering(technology, output_grid, payment_cap, eps_tie)? {
            return Ok(sol);
        }
    }
    let mut best: Option<GeneralSolution> = None;
    for target in 0..technology.actions.len() {
        let Some(payments) = implement(technology, &supports, output_grid.len(), target, payment_cap) else {
            continue;
        };
        let schedule = Contract::Schedule { outputs: output_grid.to_vec(), payments };
        let response = best_response(&schedule, technology, eps_tie);
        if best.as_ref().is_none_or(|b| response.principal_payoff > b.value) {
            best = Some(GeneralSolution { value: response.principal_payoff, schedule, response });
        }
    }
    // the zero schedule is always feasible, so some target is implementable
    best.ok_or_else(|| Error::Invalid(format!("no implementable action for type `{}`", technology.type_id)))
}

/// `(grid index, probability)` support of every action.
fn grid_supports(technology: &Technology, output_grid: &[f64]) -> Result<Vec<Vec<(usize, f64)>>> {
    technology
        .actions
        .iter()
        .map(|a| a.output.support().into_iter().map(|(y, p)| locate(output_grid, y).map(|j| (j, p))).collect())
        .collect()
}

fn locate(output_grid: &[f64], y: f64) -> Result<usize> {
    output_grid
        .iter()
        .position(|&o| (o - y).abs() <= GRID_MATCH_TOL * (1.0 + y.abs()))
        .ok_or_else(|| Error::Invalid(format!("output {y} is not on the general family's output grid")))
}

fn cost_covering(
    technology: &Technology,
    output_grid: &[f64],
    payment_cap: f64,
    eps_tie: f64,
) -> Result<Option<GeneralSolution>> {
    let (_, first_best) = technology.first_best()?;
    let mut payments = vec![0.0_f64; output_grid.len()];
    let mut paid = vec![false; output_grid.len()];
    for a in &technology.actions {
        let j = locate(output_grid, a.expected_output())?;
        payments[j] = if paid[j] { payments[j].min(a.cost) } else { a.cost };
        paid[j] = true;
    }
    if payments.iter().any(|&p| p > payment_cap) {
        return Ok(None);
    }
    let schedule = Contract::Schedule { outputs: output_grid.to_vec(), payments };
    let response = best_response(&schedule, technology, eps_tie);
    if (response.principal_payoff - first_best).abs() > 1e-9 * (1.0 + first_best.abs()) {
        return Ok(None);
    }
    Ok(Some(GeneralSolution { value: first_best, schedule, response }))
}

/// Cheapest payments on the grid making `target` a best response, if any.
fn implement(
    technology: &Technology,
    supports: &[Vec<(usize, f64)>],
    n_outputs: usize,
    target: usize,
    payment_cap: f64,
) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};

    let dense = |k: usize| {
        let mut v = vec![0.0; n_outputs];
        for &(j, p) in &supports[k] {
            v[j] += p;
        }
        v
    };
    let pa = dense(target);
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = pa.iter().map(|&p| lp.add_var(p, (0.0, payment_cap))).collect();
    let ca = technology.actions[target].cost;
    for (k, other) in technology.actions.iter().enumerate() {
        if k == target {
            continue;
        }
        let pb = dense(k);
        let row: Vec<_> = w.iter().zip(pa.iter().zip(&pb)).map(|(&v, (a, b))| (v, a - b)).collect();
        lp.add_constraint(row.as_slice(), ComparisonOp::Ge, ca - other.cost);
    }
    let solution = lp.solve().ok()?.into_solution().ok()?;
    Some(w.iter().map(|&v| solution.var_value(v).clamp(0.0, payment_cap)).collect())
}

const GRID_MATCH_TOL: f64 = 1e-9;

/// Grid positions with probabilities, cost and mean output of one action.
type SupportRow = (Vec<(usize, f64)>, f64, f64);

/// Game I over the general family by exhaustive search of payment schedules.
///
/// Every output on the family's grid gets `general_payment_levels` evenly
/// spaced payments in `[0, payment_cap]`; payments that any `seeds` contract
/// makes at that output are added as extra levels, so each seed is itself one
/// of the searched schedules. Outputs no action can produce are pinned to 0.
pub fn general_schedule_search(scenario: &Scenario, seeds: &[Contract]) -> Result<SolveResult> {
    let ContractFamilySpec::General { output_grid, payment_cap } = &scenario.family else {
        return Err(Error::Unsupported("schedule search needs the general family".into()));
    };
    let prep = Prepared::new(scenario)?;
    let grid = &scenario.grid;
    if output_grid.len() > grid.general_output_cap {
        return Err(Error::GeneralIntractable {
            outputs: output_grid.len(),
            levels: grid.general_payment_levels,
            max_outputs: grid.general_output_cap,
            max_levels: grid.general_payment_levels,
        });
    }

    let locate = |y: f64| locate(output_grid, y);
    let mut used = vec![false; output_grid.len()];
    let mut supports: Vec<Vec<SupportRow>> = Vec::with_capacity(prep.techs.len());
    for tech in &prep.techs {
        let mut rows = Vec::with_capacity(tech.actions.len());
        for a in &tech.actions {
            let mut sup = Vec::new();
            for (y, p) in a.output.support() {
                let j = locate(y)?;
                used[j] = true;
                sup.push((j, p));
            }
            rows.push((sup, a.cost, a.expected_output()));
        }
        supports.push(rows);
    }

    let base_levels = uniform_grid(0.0, *payment_cap, grid.general_payment_levels.max(1));
    let levels: Vec<Vec<f64>> = output_grid
        .iter()
        .enumerate()
        .map(|(j, &y)| {
            if !used[j] {
                return vec![0.0];
            }
            let mut l = base_levels.clone();
            l.extend(seeds.iter().map(|s| s.payment(y)).filter(|p| p.is_finite() && *p >= 0.0));
            l.sort_by(f64::total_cmp);
            l.dedup();
            l
        })
        .collect();

    let eps = grid.eps_tie;
    let n_types = prep.techs.len();
    let mut digits = vec![0usize; levels.len()];
    let mut payments = vec![0.0; levels.len()];
    let mut per_type = vec![0.0; n_types];
    let mut scores: Vec<Score> = Vec::new();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>, usize)> = None;
    loop {
        for (j, &d) in digits.iter().enumerate() {
            payments[j] = levels[j][d];
        }
        for (k, rows) in supports.iter().enumerate() {
            scores.clear();
            scores.extend(rows.iter().map(|(sup, cost, mean)| {
                let wage: f64 = sup.iter().map(|&(j, p)| p * payments[j]).sum();
                Score { agent: wage - cost, principal: mean - wage, cost: *cost }
            }));
            per_type[k] = scores[select(&scores, eps)].principal;
        }
        let (v, member) = prep.ambiguity.eval(&per_type);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, payments.clone(), per_type.clone(), member));
        }
        // odometer increment
        let mut pos = 0;
        while pos < digits.len() {
            digits[pos] += 1;
            if digits[pos] < levels[pos].len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == digits.len() {
            break;
        }
    }

    let (value, pay, values, member) = best.expect("at least one schedule");
    Ok(SolveResult {
        value,
        argmax_contract: Some(Contract::Schedule { outputs: output_grid.clone(), payments: pay }),
        per_type_values: prep.per_type_map(&values),
        per_type_contracts: BTreeMap::new(),
        worst_distribution: prep.distribution(member),
        warnings: Vec::new(),
    })
}
