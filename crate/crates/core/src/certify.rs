//! Closed-form checks and optimality certificates for affine contracts.
//!
//! The optimality gap of a surjective family `𝒲` is bounded by
//! `z_III − z_I`, which splits into an adjustability gap `z_III − z_II` and
//! an information rent `z_II − z_I`. Under a convex surplus function the
//! adjustability gap of affine contracts vanishes, and with a bottleneck
//! type (simultaneously least efficient and least productive at full effort)
//! so does the robust information rent.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agent::best_response;
use crate::error::{Error, Result};
use crate::games::{self, solve_game_i, solve_game_ii, solve_game_iii};
use crate::geometry::{self, inverse_derivative, node_derivatives};
use crate::model::{Action, Contract, ContractFamilySpec, ProductionCurve, Scenario, TypeId};

/// Relative slack on first-difference comparisons.
const SLOPE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurplusKind {
    Convex,
    Concave,
    /// Constant slope: satisfies both the convex and the concave conditions.
    Linear,
    Neither,
}

impl SurplusKind {
    pub fn name(self) -> &'static str {
        match self {
            SurplusKind::Convex => "convex",
            SurplusKind::Concave => "concave",
            SurplusKind::Linear => "linear",
            SurplusKind::Neither => "neither",
        }
    }
}

/// Classification of `g(c) - c` with the grid intervals breaking each condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurplusClass {
    pub classification: SurplusKind,
    /// Intervals `[c_i, c_{i+1}]` whose slope of `g` is below 1.
    pub slope_below_one: Vec<usize>,
    /// Nodes `i` where the slope of `g` drops from interval `i-1` to `i`.
    pub slope_decreases: Vec<usize>,
    /// Nodes `i` where the slope of `g` rises from interval `i-1` to `i`.
    pub slope_increases: Vec<usize>,
    pub starts_at_origin: bool,
}

impl SurplusClass {
    pub fn is_convex(&self) -> bool {
        matches!(self.classification, SurplusKind::Convex | SurplusKind::Linear)
    }

    pub fn is_concave(&self) -> bool {
        matches!(self.classification, SurplusKind::Concave | SurplusKind::Linear)
    }
}

fn slopes(curve: &ProductionCurve) -> Vec<f64> {
    let (c, g) = (curve.costs(), curve.outputs());
    c.windows(2).zip(g.windows(2)).map(|(cw, gw)| (gw[1] - gw[0]) / (cw[1] - cw[0])).collect()
}

pub fn classify_surplus(curve: &ProductionCurve) -> SurplusClass {
    let s = slopes(curve);
    let tol = |x: f64| SLOPE_TOL * x.abs().max(1.0);
    let slope_below_one = s.iter().enumerate().filter(|(_, &x)| x < 1.0 - tol(x)).map(|(i, _)| i).collect();
    let mut slope_decreases = Vec::new();
    let mut slope_increases = Vec::new();
    for (i, w) in s.windows(2).enumerate() {
        let t = tol(w[0].abs().max(w[1].abs()));
        if w[1] < w[0] - t {
            slope_decreases.push(i + 1);
        }
        if w[1] > w[0] + t {
            slope_increases.push(i + 1);
        }
    }
    let starts_at_origin = curve.costs()[0] == 0.0 && curve.outputs()[0].abs() <= 1e-12;
    let base_ok = starts_at_origin && Vec::is_empty(&slope_below_one) && !s.is_empty();
    let classification = match (base_ok, slope_decreases.is_empty(), slope_increases.is_empty()) {
        (false, _, _) => SurplusKind::Neither,
        (true, true, true) => SurplusKind::Linear,
        (true, true, false) => SurplusKind::Convex,
        (true, false, true) => SurplusKind::Concave,
        (true, false, false) => SurplusKind::Neither,
    };
    SurplusClass { classification, slope_below_one, slope_decreases, slope_increases, starts_at_origin }
}

/// Type minimizing both `g_t(c̄_t)/c̄_t` and `g_t(c̄_t)` within `eps`, if any.
/// Ties go to the first type in key order.
pub fn bottleneck_type(curves: &BTreeMap<TypeId, ProductionCurve>, eps: f64) -> Option<TypeId> {
    let ev: Vec<(&TypeId, f64, f64)> = curves.iter().map(|(t, c)| (t, efficiency(c), c.output_at_cap())).collect();
    let min_eff = ev.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let min_level = ev.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    ev.into_iter().find(|(_, e, l)| *e <= min_eff + eps && *l <= min_level + eps).map(|(t, _, _)| t.clone())
}

/// Output per unit cost at full effort; infinite when full effort is free.
fn efficiency(curve: &ProductionCurve) -> f64 {
    let cap = curve.cost_cap();
    if cap > 0.0 {
        curve.output_at_cap() / cap
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeEvidence {
    pub cost_cap: f64,
    pub output_at_cap: f64,
    pub efficiency: f64,
    pub surplus: SurplusKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub certified: bool,
    pub bottleneck_type: Option<TypeId>,
    pub reason: String,
    pub evidence: BTreeMap<TypeId, TypeEvidence>,
    /// Solver-measured `z_III − z_I`, when the scenario is in scope.
    pub measured_gap: Option<f64>,
    /// Whether the measured gap is within `eps_val`; set only when certified.
    pub cross_check_passed: Option<bool>,
}

fn type_curves(scenario: &Scenario) -> Result<BTreeMap<TypeId, ProductionCurve>> {
    scenario
        .technologies
        .iter()
        .map(|(t, tech)| Ok((t.clone(), tech.pointwise_curve(scenario.grid.eps_tie)?)))
        .collect()
}

/// Sufficient condition for optimality of the affine (or linear) family in
/// the robust setting: convex surplus for every type plus a bottleneck type.
pub fn certify_affine_optimal(scenario: &Scenario) -> Result<Certificate> {
    scenario.ensure_valid()?;
    let curves = type_curves(scenario)?;
    let mut evidence = BTreeMap::new();
    for (t, c) in &curves {
        evidence.insert(
            t.clone(),
            TypeEvidence {
                cost_cap: c.cost_cap(),
                output_at_cap: c.output_at_cap(),
                efficiency: efficiency(c),
                surplus: classify_surplus(c).classification,
            },
        );
    }
    let out_of_scope = |why: String| Certificate {
        certified: false,
        bottleneck_type: None,
        reason: format!("condition out of scope: {why}"),
        evidence: evidence.clone(),
        measured_gap: None,
        cross_check_passed: None,
    };
    if !matches!(scenario.family, ContractFamilySpec::Affine { .. } | ContractFamilySpec::Linear) {
        return Ok(out_of_scope(format!("{} family", scenario.family.name())));
    }
    if !scenario.ambiguity.is_vertex_set() {
        return Ok(out_of_scope(format!("{} ambiguity", scenario.ambiguity.name())));
    }

    let z_i = solve_game_i(scenario)?.value;
    let z_iii = solve_game_iii(scenario)?.value;
    let measured_gap = Some(z_iii - z_i);

    let not_convex: Vec<String> = evidence
        .iter()
        .filter(|(_, e)| !matches!(e.surplus, SurplusKind::Convex | SurplusKind::Linear))
        .map(|(t, e)| format!("{t} ({})", e.surplus.name()))
        .collect();
    let in_scope: BTreeMap<TypeId, ProductionCurve> = scenario
        .ambiguity
        .referenced_types()
        .into_iter()
        .filter_map(|t| curves.get(&t).map(|c| (t, c.clone())))
        .collect();
    let bottleneck = bottleneck_type(&in_scope, scenario.grid.eps_val);
    if !not_convex.is_empty() {
        return Ok(Certificate {
            certified: false,
            bottleneck_type: bottleneck,
            reason: format!("surplus not convex for: {}", not_convex.join(", ")),
            evidence,
            measured_gap,
            cross_check_passed: None,
        });
    }
    let Some(t_star) = bottleneck else {
        return Ok(Certificate {
            certified: false,
            bottleneck_type: None,
            reason: "no type is simultaneously least efficient and least productive".into(),
            evidence,
            measured_gap,
            cross_check_passed: None,
        });
    };
    let gap = z_iii - z_i;
    Ok(Certificate {
        certified: true,
        reason: format!("convex surplus for every type; bottleneck type {t_star}"),
        bottleneck_type: Some(t_star),
        evidence,
        measured_gap,
        cross_check_passed: Some(gap <= scenario.grid.eps_val),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexClosedForm {
    /// `c̄ / g(c̄)`.
    pub theta1: f64,
    /// `g(c̄) − c̄`.
    pub value: f64,
}

/// Optimal linear slope and Game II value for a convex surplus curve.
pub fn convex_closed_forms(curve: &ProductionCurve) -> Result<ConvexClosedForm> {
    let class = classify_surplus(curve);
    if !class.is_convex() {
        return Err(Error::WrongSurplusClass { required: "convex", found: class.classification.name() });
    }
    let (cap, g) = (curve.cost_cap(), curve.output_at_cap());
    Ok(ConvexClosedForm { theta1: cap / g, value: g - cap })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjustabilityRatio {
    pub ratio: f64,
    /// `max_c g(c) − g(c)/g'(c)`.
    pub numerator: f64,
    /// `max_c g(c) − c`.
    pub denominator: f64,
    /// Surplus still rises at `c̄`, so the ratio only bounds the true one from below.
    pub lower_bound: bool,
}

/// Game II payoff of the affine family as a fraction of the first best, for
/// a concave surplus curve.
pub fn adjustability_ratio_concave(curve: &ProductionCurve) -> Result<AdjustabilityRatio> {
    let class = classify_surplus(curve);
    if !class.is_concave() {
        return Err(Error::WrongSurplusClass { required: "concave", found: class.classification.name() });
    }
    let d = node_derivatives(curve)?;
    let numerator = curve.outputs().iter().zip(&d).map(|(&g, &dg)| g - g / dg).fold(f64::NEG_INFINITY, f64::max);
    let denominator = curve.samples().map(|(c, g)| g - c).fold(f64::NEG_INFINITY, f64::max);
    if !(denominator > 0.0) {
        return Err(Error::NoSurplus);
    }
    let s = slopes(curve);
    let last = s[s.len() - 1];
    let curvature = if s.len() >= 2 { (s[s.len() - 2] - last).abs() } else { 0.0 };
    let lower_bound = last - 1.0 > (2.0 * curvature).max(1e-9);
    Ok(AdjustabilityRatio { ratio: numerator / denominator, numerator, denominator, lower_bound })
}

/// Principal payoff under affine `(θ0, θ1)` for a concave surplus curve,
/// `(1 − θ1)·g((g')⁻¹(1/θ1)) − θ0`.
pub fn affine_payoff_concave(curve: &ProductionCurve, theta0: f64, theta1: f64) -> Result<f64> {
    let class = classify_surplus(curve);
    if !class.is_concave() {
        return Err(Error::WrongSurplusClass { required: "concave", found: class.classification.name() });
    }
    if !(theta1 > 0.0 && theta1 <= 1.0) {
        return Err(Error::Invalid(format!("θ1 = {theta1} outside (0, 1]")));
    }
    let c = inverse_derivative(curve, 1.0 / theta1)?.cost;
    Ok((1.0 - theta1) * curve.value_at(c)? - theta0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub ratio: f64,
    /// The value bounds the true adjustability ratio from below.
    pub lower_bound: bool,
    /// Computed on the concave envelope of a non-concave curve.
    pub from_envelope: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeGap {
    pub first_best: f64,
    pub game_ii_value: f64,
    /// The type's response to the Game I contract.
    pub agent_action: Action,
    pub surplus: SurplusKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjustability_ratio: Option<RatioEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub z_i: f64,
    pub z_ii: f64,
    pub z_iii: f64,
    /// `z_III − z_II`.
    pub adjustability_gap: f64,
    /// `z_II − z_I`.
    pub information_rent: f64,
    /// `z_III − z_I`, an upper bound on the family's optimality gap.
    pub optimality_gap_bound: f64,
    pub best_contract: Contract,
    pub per_type: BTreeMap<TypeId, TypeGap>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn ratio_estimate(curve: &ProductionCurve, class: &SurplusClass) -> Option<RatioEstimate> {
    if class.is_concave() {
        return adjustability_ratio_concave(curve).ok().map(|r| RatioEstimate {
            ratio: r.ratio,
            lower_bound: r.lower_bound,
            from_envelope: false,
        });
    }
    if class.classification != SurplusKind::Neither {
        return None;
    }
    let env = geometry::production_envelope(curve).ok()?;
    adjustability_ratio_concave(&env).ok().map(|r| RatioEstimate {
        ratio: r.ratio,
        lower_bound: true,
        from_envelope: true,
    })
}

/// Runs all three games and splits the optimality-gap bound.
pub fn decompose_gap(scenario: &Scenario) -> Result<GapReport> {
    let g1 = solve_game_i(scenario)?;
    let g2 = solve_game_ii(scenario)?;
    let g3 = solve_game_iii(scenario)?;
    let eps = scenario.grid.eps_val;
    if g1.value > g2.value + eps {
        return Err(Error::ChainViolation(format!("z_I = {} exceeds z_II = {}", g1.value, g2.value)));
    }
    if g2.value > g3.value + eps {
        return Err(Error::ChainViolation(format!("z_II = {} exceeds z_III = {}", g2.value, g3.value)));
    }
    let best_contract = g1.argmax_contract.clone().expect("Game I reports its contract");
    let mut per_type = BTreeMap::new();
    for (t, tech) in &scenario.technologies {
        let curve = tech.pointwise_curve(scenario.grid.eps_tie)?;
        let class = classify_surplus(&curve);
        per_type.insert(
            t.clone(),
            TypeGap {
                first_best: g3.per_type_values[t],
                game_ii_value: g2.per_type_values[t],
                agent_action: best_response(&best_contract, tech, scenario.grid.eps_tie).action,
                surplus: class.classification,
                adjustability_ratio: ratio_estimate(&curve, &class),
            },
        );
    }
    let mut warnings = g3.warnings;
    warnings.extend(g1.warnings);
    Ok(GapReport {
        z_i: g1.value,
        z_ii: g2.value,
        z_iii: g3.value,
        adjustability_gap: g3.value - g2.value,
        information_rent: g2.value - g1.value,
        optimality_gap_bound: g3.value - g1.value,
        best_contract,
        per_type,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiConcavity {
    pub quasi_concave: bool,
    /// `(θ1, payoff)` at the scanned points.
    pub samples: Vec<(f64, f64)>,
    /// Indices `(i, j, k)` with `i < j < k` and sample `j` below both neighbours.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize, usize)>,
}

/// Whether every upper level set of `θ1 ↦ payoff` is an interval, per type.
///
/// Between two consecutive switching slopes the chosen action is fixed and
/// the payoff `(1 − θ1)·g` falls linearly, so the payoff's local suprema sit
/// at the switching slopes. The scan evaluates the payoff there (plus `θ1 =
/// 0` and `1`) and tests that sequence for unimodality within `eps_val`.
/// The linear drops between suprema come from sampling a smooth curve at
/// finitely many costs and shrink with the grid; they are not counted.
pub fn quasiconcavity_scan(scenario: &Scenario) -> Result<BTreeMap<TypeId, QuasiConcavity>> {
    if !matches!(scenario.family, ContractFamilySpec::Affine { .. } | ContractFamilySpec::Linear) {
        return Err(Error::Unsupported("quasi-concavity scan needs an affine or linear family".into()));
    }
    scenario.ensure_valid()?;
    let eps = scenario.grid.eps_val;
    let mut out = BTreeMap::new();
    for (t, tech) in &scenario.technologies {
        let mut thetas = games::switching_slopes(tech);
        thetas.extend([0.0, 1.0]);
        thetas.sort_by(f64::total_cmp);
        thetas.dedup();
        let payoffs = games::payoff_profile(tech, &thetas, scenario.grid.eps_tie);
        let witness = unimodality_witness(&payoffs, eps);
        out.insert(
            t.clone(),
            QuasiConcavity {
                quasi_concave: witness.is_none(),
                samples: thetas.into_iter().zip(payoffs).collect(),
                witness,
            },
        );
    }
    Ok(out)
}

/// A valley `v[j] < min(max(v[..j]), max(v[j+1..])) - eps`, if one exists.
pub fn unimodality_witness(v: &[f64], eps: f64) -> Option<(usize, usize, usize)> {
    let n = v.len();
    if n < 3 {
        return None;
    }
    let mut suffix_best = vec![n - 1; n];
    for j in (0..n - 1).rev() {
        let k = suffix_best[j + 1];
        suffix_best[j] = if v[j] > v[k] { j } else { k };
    }
    let mut prefix_best = 0;
    for j in 1..n - 1 {
        if v[j - 1] > v[prefix_best] {
            prefix_best = j - 1;
        }
        let k = suffix_best[j + 1];
        if v[j] < v[prefix_best].min(v[k]) - eps {
            return Some((prefix_best, j, k));
        }
    }
    None
}
