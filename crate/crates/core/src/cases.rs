//! Worked applications: forest conservation under a linear subsidy and a
//! salesforce with an ambiguous sales distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Action, AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology, TypeId,
};

/// Forest owner's conservation technology: effort `a` costs `h·a²/2` and
/// conserves `k·a + t·a0` hectares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    /// Conservation per unit of effort.
    pub k: f64,
    /// Effort cost curvature.
    pub h: f64,
    /// Weight of the baseline stock.
    pub t: f64,
    /// Baseline stock.
    pub a0: f64,
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.k > 0.0
            && self.h > 0.0
            && self.t >= 0.0
            && self.a0 >= 0.0
            && self.t.is_finite()
            && self.a0.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("forest parameters need k, h > 0 and t, a0 ≥ 0: {self:?}")))
        }
    }

    /// Cost of the effort at which `g'(c) = 1`: `k²/(2h)`.
    pub fn cost_cap(&self) -> f64 {
        self.k * self.k / (2.0 * self.h)
    }

    /// `g(c) = k·√(2c/h) + t·a0`.
    pub fn output(&self, c: f64) -> f64 {
        self.k * (2.0 * c / self.h).sqrt() + self.t * self.a0
    }

    /// Upper bound on the first-best surplus: `k²/(2h) + k·t·a0`.
    pub fn surplus_bound(&self) -> f64 {
        self.cost_cap() + self.k * self.t * self.a0
    }
}

/// The conservation curve sampled on `[0, k²/(2h)]`.
pub fn forest_curve(params: &ForestParams, steps: usize) -> Result<ProductionCurve> {
    params.validate()?;
    ProductionCurve::from_fn(params.cost_cap(), steps, |c| params.output(c))
}

/// Principal payoff under the linear subsidy `p·y`:
/// `(1 − p)·k·(p·k/h + t·a0)`.
pub fn forest_linear_payoff(params: &ForestParams, p: f64) -> Result<f64> {
    params.validate()?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Invalid(format!("subsidy rate {p} outside (0, 1]")));
    }
    Ok((1.0 - p) * params.k * (p * params.k / params.h + params.t * params.a0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestRatio {
    pub t: f64,
    pub payoff_at_half: f64,
    pub surplus_bound: f64,
    /// `payoff_at_half / surplus_bound`, never below one half.
    pub ratio: f64,
}

pub fn forest_ratio_bound(params: &ForestParams) -> Result<ForestRatio> {
    let payoff_at_half = forest_linear_payoff(params, 0.5)?;
    let surplus_bound = params.surplus_bound();
    Ok(ForestRatio { t: params.t, payoff_at_half, surplus_bound, ratio: payoff_at_half / surplus_bound })
}

/// [`forest_ratio_bound`] at each baseline weight in `ts`.
pub fn forest_ratio_sweep(params: &ForestParams, ts: &[f64]) -> Result<Vec<ForestRatio>> {
    ts.iter().map(|&t| forest_ratio_bound(&ForestParams { t, ..*params })).collect()
}

/// Single-type scenario over the sampled conservation curve, offered
/// linear subsidies.
pub fn forest_scenario(params: &ForestParams, grid: GridConfig) -> Result<Scenario> {
    let curve = forest_curve(params, grid.cost_steps)?;
    let s = Scenario::new(
        vec![Technology::from_curve("forest", &curve)],
        AmbiguitySet::AllDeltas(vec!["forest".into()]),
        ContractFamilySpec::Linear,
        grid,
    );
    s.ensure_valid()?;
    Ok(s)
}

/// Sales agent choosing between a low and a high effort level. Sales `y_i`
/// (with `y_0` the baseline) occur with probabilities shifted by effort in
/// the direction `ā + δ·u`, where `u` ranges over the unit `q`-norm ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalesforceParams {
    pub cost_low: f64,
    pub cost_high: f64,
    pub effort_low: f64,
    pub effort_high: f64,
    /// `y_0, y_1, …, y_n`.
    pub outputs: Vec<f64>,
    /// Nominal probability shift per unit of effort, one per `y_1..y_n`.
    pub abar: Vec<f64>,
    /// Ambiguity radius per outcome, one per `y_1..y_n`.
    pub deltas: Vec<f64>,
    /// Norm exponent of the ambiguity ball.
    pub q: f64,
}

impl SalesforceParams {
    pub fn validate(&self) -> Result<()> {
        let n = self.outputs.len();
        let msg = if n < 2 {
            Some("need the baseline y_0 and at least one sales level".to_string())
        } else if self.abar.len() != n - 1 || self.deltas.len() != n - 1 {
            Some(format!("abar and deltas need {} entries each", n - 1))
        } else if !(self.cost_high > self.cost_low) {
            Some("cost_high must exceed cost_low".into())
        } else if !(self.effort_high > self.effort_low) {
            Some("effort_high must exceed effort_low".into())
        } else if !(self.q > 1.0) {
            Some(format!("norm exponent q = {} must exceed 1", self.q))
        } else if self.deltas.iter().any(|d| !(*d >= 0.0)) {
            Some("ambiguity radii must be nonnegative".into())
        } else {
            None
        };
        msg.map_or(Ok(()), |m| Err(Error::Invalid(format!("salesforce parameters: {m}"))))
    }

    fn gains(&self) -> impl Iterator<Item = f64> + '_ {
        self.outputs[1..].iter().map(move |y| y - self.outputs[0])
    }

    /// `Σ ā_i (y_i − y_0)`: expected sales gain per unit of effort.
    pub fn nominal_gain(&self) -> f64 {
        self.abar.iter().zip(self.gains()).map(|(a, g)| a * g).sum()
    }

    /// `‖δ ∘ (y − y_0)‖_q`: the largest loss the ambiguity ball can inflict.
    pub fn ambiguity_penalty(&self) -> f64 {
        self.deltas.iter().zip(self.gains()).map(|(d, g)| (d * g).abs().powf(self.q)).sum::<f64>().powf(1.0 / self.q)
    }

    /// Worst-case sales gain per unit of effort.
    pub fn robust_gain(&self) -> f64 {
        self.nominal_gain() - self.ambiguity_penalty()
    }

    pub fn cost_gap(&self) -> f64 {
        self.cost_high - self.cost_low
    }

    pub fn effort_gap(&self) -> f64 {
        self.effort_high - self.effort_low
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalesforceSlope {
    pub theta1: f64,
    /// The slope reached 1: the agent keeps all sales and the principal nothing.
    pub at_cap: bool,
}

/// Smallest commission rate that makes high effort worthwhile under the
/// worst admissible sales distribution.
pub fn salesforce_optimal_slope(params: &SalesforceParams) -> Result<SalesforceSlope> {
    params.validate()?;
    let robust_output = params.effort_gap() * params.robust_gain();
    if !(robust_output > 0.0) {
        return Err(Error::NonpositiveOutput);
    }
    let theta1 = params.cost_gap() / robust_output;
    Ok(SalesforceSlope { theta1, at_cap: theta1 >= 1.0 - 1e-12 })
}

/// A type with a two-point production curve `{(0, 0), (cost, output)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPointType {
    pub id: TypeId,
    pub cost: f64,
    pub output: f64,
}

/// Scenario over two-point types, provided one type is both the least
/// efficient (`output / cost`) and the least productive, so that its curve
/// lies below every other.
pub fn two_point_scenario(types: &[TwoPointType], family: ContractFamilySpec, grid: GridConfig) -> Result<Scenario> {
    if types.is_empty() {
        return Err(Error::NoActions);
    }
    let eff = |t: &TwoPointType| t.output / t.cost;
    let min_eff = types.iter().map(eff).fold(f64::INFINITY, f64::min);
    let min_out = types.iter().map(|t| t.output).fold(f64::INFINITY, f64::min);
    if !types.iter().any(|t| eff(t) <= min_eff && t.output <= min_out) {
        return Err(Error::Invalid("curves cross: no type is dominated by every other".into()));
    }
    let techs = types
        .iter()
        .map(|t| Technology::new(t.id.clone(), vec![Action::outside_option(), Action::deterministic(t.cost, t.output)]))
        .collect();
    let ambiguity = AmbiguitySet::AllDeltas(types.iter().map(|t| t.id.clone()).collect());
    let s = Scenario::new(techs, ambiguity, family, grid);
    s.ensure_valid()?;
    Ok(s)
}

/// Nominal and adverse salesforce types: the adverse type's high-effort
/// sales are cut by the ambiguity penalty, so it is the bottleneck.
pub fn salesforce_scenario(params: &SalesforceParams, grid: GridConfig) -> Result<Scenario> {
    params.validate()?;
    let cost = params.cost_gap();
    let types = [
        TwoPointType { id: "nominal".into(), cost, output: params.effort_gap() * params.nominal_gain() },
        TwoPointType { id: "adverse".into(), cost, output: params.effort_gap() * params.robust_gain() },
    ];
    two_point_scenario(&types, ContractFamilySpec::affine(), grid)
}
