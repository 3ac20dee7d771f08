//! Domain types for principal-agent scenarios.
//!
//! A [`Scenario`] bundles the technologies of every agent type, the ambiguity
//! set over type distributions, the contract family the principal restricts
//! herself to, and the numerical grid used by the solvers. Construction never
//! fails on modelling assumptions; [`Scenario::validate`] reports breaches as
//! data so that fixtures can be inspected before they are solved.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EPS_TIE: f64 = 1e-9;
pub const DEFAULT_EPS_VAL: f64 = 1e-6;

/// Tolerance on probability vectors summing to one.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeId(pub String);

impl TypeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for TypeId {
    fn from(s: &str) -> Self {
        TypeId(s.to_owned())
    }
}

impl From<String> for TypeId {
    fn from(s: String) -> Self {
        TypeId(s)
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub y: f64,
    pub p: f64,
}

/// Output of an action: either a fixed level or a finite distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum OutputSpec {
    #[serde(rename = "output")]
    Deterministic(f64),
    #[serde(rename = "dist")]
    Distribution(Vec<Outcome>),
}

impl OutputSpec {
    pub fn mean(&self) -> f64 {
        match self {
            OutputSpec::Deterministic(y) => *y,
            OutputSpec::Distribution(d) => d.iter().map(|o| o.p * o.y).sum(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, OutputSpec::Deterministic(_))
    }

    /// `(output, probability)` pairs; a deterministic output yields one pair.
    pub fn support(&self) -> Vec<(f64, f64)> {
        match self {
            OutputSpec::Deterministic(y) => vec![(*y, 1.0)],
            OutputSpec::Distribution(d) => d.iter().map(|o| (o.y, o.p)).collect(),
        }
    }

    /// Zero output with certainty.
    pub fn is_null(&self) -> bool {
        match self {
            OutputSpec::Deterministic(y) => *y == 0.0,
            OutputSpec::Distribution(d) => d.iter().all(|o| o.y == 0.0 || o.p == 0.0),
        }
    }

    fn check(&self) -> std::result::Result<(), (Assumption, String)> {
        match self {
            OutputSpec::Deterministic(y) => {
                if !y.is_finite() || *y < 0.0 {
                    return Err((Assumption::LimitedLiability, format!("output {y} is negative or non-finite")));
                }
            }
            OutputSpec::Distribution(d) => {
                if d.is_empty() {
                    return Err((Assumption::WellFormed, "empty output distribution".into()));
                }
                for o in d {
                    if !o.y.is_finite() || o.y < 0.0 {
                        return Err((
                            Assumption::LimitedLiability,
                            format!("output {} is negative or non-finite", o.y),
                        ));
                    }
                    if !(0.0..=1.0).contains(&o.p) {
                        return Err((Assumption::WellFormed, format!("probability {} outside [0, 1]", o.p)));
                    }
                }
                let total: f64 = d.iter().map(|o| o.p).sum();
                if (total - 1.0).abs() > PROB_TOL {
                    return Err((Assumption::WellFormed, format!("probabilities sum to {total}, not 1")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub cost: f64,
    #[serde(flatten)]
    pub output: OutputSpec,
}

impl Action {
    pub fn deterministic(cost: f64, output: f64) -> Self {
        Action { cost, output: OutputSpec::Deterministic(output) }
    }

    pub fn random(cost: f64, outcomes: &[(f64, f64)]) -> Self {
        Action { cost, output: OutputSpec::Distribution(outcomes.iter().map(|&(y, p)| Outcome { y, p }).collect()) }
    }

    /// Zero cost, zero output.
    pub fn outside_option() -> Self {
        Action::deterministic(0.0, 0.0)
    }

    pub fn expected_output(&self) -> f64 {
        self.output.mean()
    }

    pub fn surplus(&self) -> f64 {
        self.expected_output() - self.cost
    }

    pub fn is_outside_option(&self) -> bool {
        self.cost == 0.0 && self.output.is_null()
    }
}

/// Finite action set of one agent type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Technology {
    pub type_id: TypeId,
    pub actions: Vec<Action>,
}

impl Technology {
    pub fn new(type_id: impl Into<TypeId>, actions: Vec<Action>) -> Self {
        Technology { type_id: type_id.into(), actions }
    }

    /// Deterministic actions at every curve sample, plus the outside option
    /// when the curve does not already start at the origin.
    pub fn from_curve(type_id: impl Into<TypeId>, curve: &ProductionCurve) -> Self {
        let mut actions: Vec<Action> = curve.samples().map(|(c, g)| Action::deterministic(c, g)).collect();
        if !actions.iter().any(Action::is_outside_option) {
            actions.insert(0, Action::outside_option());
        }
        Technology::new(type_id, actions)
    }

    /// Largest action cost.
    pub fn cost_cap(&self) -> f64 {
        self.actions.iter().map(|a| a.cost).fold(0.0, f64::max)
    }

    pub fn max_expected_output(&self) -> f64 {
        self.actions.iter().map(Action::expected_output).fold(0.0, f64::max)
    }

    /// Every random output replaced by its mean.
    pub fn mean_reduced(&self) -> Self {
        Technology {
            type_id: self.type_id.clone(),
            actions: self.actions.iter().map(|a| Action::deterministic(a.cost, a.expected_output())).collect(),
        }
    }

    /// Index and value of the action with the largest expected surplus.
    pub fn first_best(&self) -> Result<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, a) in self.actions.iter().enumerate() {
            let s = a.surplus();
            match best {
                Some((_, b)) if s <= b => {}
                _ => best = Some((i, s)),
            }
        }
        best.ok_or(Error::NoActions)
    }

    /// Maximum expected output at each distinct action cost.
    ///
    /// Costs within `eps_tie` of each other are merged.
    pub fn pointwise_curve(&self, eps_tie: f64) -> Result<ProductionCurve> {
        if self.actions.is_empty() {
            return Err(Error::NoActions);
        }
        let mut pts: Vec<(f64, f64)> = self.actions.iter().map(|a| (a.cost, a.expected_output())).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut costs: Vec<f64> = Vec::with_capacity(pts.len());
        let mut outputs: Vec<f64> = Vec::with_capacity(pts.len());
        for (c, m) in pts {
            match costs.last() {
                Some(&last) if c - last <= eps_tie => {
                    let g = outputs.last_mut().expect("parallel vectors");
                    *g = g.max(m);
                }
                _ => {
                    costs.push(c);
                    outputs.push(m);
                }
            }
        }
        ProductionCurve::new(costs, outputs)
    }
}

/// Sampled production function: maximum expected output per cost level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductionCurve {
    costs: Vec<f64>,
    outputs: Vec<f64>,
}

impl ProductionCurve {
    pub fn new(costs: Vec<f64>, outputs: Vec<f64>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::Invalid("empty production curve".into()));
        }
        if costs.len() != outputs.len() {
            return Err(Error::Invalid(format!("{} costs but {} outputs", costs.len(), outputs.len())));
        }
        if costs.iter().chain(outputs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite curve sample".into()));
        }
        if costs[0] < 0.0 {
            return Err(Error::Invalid(format!("negative cost {}", costs[0])));
        }
        if costs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("curve costs must be strictly increasing".into()));
        }
        Ok(ProductionCurve { costs, outputs })
    }

    /// Samples `g` on `steps` evenly spaced costs over `[0, cost_cap]`.
    pub fn from_fn(cost_cap: f64, steps: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        if steps < 2 {
            return Err(Error::Invalid(format!("need at least 2 cost steps, got {steps}")));
        }
        if !(cost_cap > 0.0) {
            return Err(Error::Invalid(format!("cost cap {cost_cap} must be positive")));
        }
        let costs = uniform_grid(0.0, cost_cap, steps);
        let outputs = costs.iter().map(|&c| g(c)).collect();
        ProductionCurve::new(costs, outputs)
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn cost_cap(&self) -> f64 {
        *self.costs.last().expect("nonempty curve")
    }

    /// `g(c̄)`.
    pub fn output_at_cap(&self) -> f64 {
        *self.outputs.last().expect("nonempty curve")
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.costs.iter().copied().zip(self.outputs.iter().copied())
    }

    /// Piecewise-linear interpolation of `g` at `c`.
    pub fn value_at(&self, c: f64) -> Result<f64> {
        let lo = self.costs[0];
        let hi = self.cost_cap();
        if !(c >= lo - 1e-12 && c <= hi + 1e-12) {
            return Err(Error::OutOfDomain { cost: c, cap: hi });
        }
        let c = c.clamp(lo, hi);
        let j = self.costs.partition_point(|&x| x < c);
        if j == 0 {
            return Ok(self.outputs[0]);
        }
        if j >= self.len() {
            return Ok(self.output_at_cap());
        }
        let (c0, c1) = (self.costs[j - 1], self.costs[j]);
        let (g0, g1) = (self.outputs[j - 1], self.outputs[j]);
        Ok(g0 + (g1 - g0) * (c - c0) / (c1 - c0))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ProductionCurve { costs: self.costs.clone(), outputs: self.outputs.iter().map(|g| g * factor).collect() }
    }
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let n = (steps - 1) as f64;
            (0..steps).map(|i| if i + 1 == steps { hi } else { lo + (hi - lo) * (i as f64) / n }).collect()
        }
    }
}

/// Production curve of `technology` on `cost_grid`: at each grid cost the
/// largest expected output among actions costing at most that much.
pub fn production_curve(technology: &Technology, cost_grid: &[f64], eps_tie: f64) -> Result<ProductionCurve> {
    if technology.actions.is_empty() {
        return Err(Error::NoActions);
    }
    let cap = technology.cost_cap();
    let first = *cost_grid.first().ok_or_else(|| Error::Invalid("empty cost grid".into()))?;
    let last = *cost_grid.last().expect("nonempty");
    if first.abs() > eps_tie || (last - cap).abs() > eps_tie {
        return Err(Error::Invalid(format!("cost grid must span [0, {cap}], got [{first}, {last}]")));
    }
    let outputs = cost_grid
        .iter()
        .map(|&c| {
            technology.actions.iter().filter(|a| a.cost <= c + eps_tie).map(Action::expected_output).fold(0.0, f64::max)
        })
        .collect();
    ProductionCurve::new(cost_grid.to_vec(), outputs)
}

/// Parameterized payment-rule family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ContractFamilySpec {
    /// Arbitrary nonnegative schedule on a finite output grid.
    General { output_grid: Vec<f64>, payment_cap: f64 },
    /// `θ0 + θ1·y` with `θ0 ≥ 0`, `θ1 ∈ [0, 1]`.
    Affine {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta0_max: Option<f64>,
    },
    /// `θ1·y`, `θ1 ∈ [0, 1]`.
    Linear,
    /// Flat payment `θ0 ≥ 0`.
    Constant {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta0_max: Option<f64>,
    },
}

impl ContractFamilySpec {
    pub fn affine() -> Self {
        ContractFamilySpec::Affine { theta0_max: None }
    }

    pub fn constant() -> Self {
        ContractFamilySpec::Constant { theta0_max: None }
    }

    /// Every admissible payment reachable at every output.
    pub fn is_surjective(&self) -> bool {
        !matches!(self, ContractFamilySpec::Linear)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ContractFamilySpec::General { .. } => "general",
            ContractFamilySpec::Affine { .. } => "affine",
            ContractFamilySpec::Linear => "linear",
            ContractFamilySpec::Constant { .. } => "constant",
        }
    }

    pub fn is_parametric(&self) -> bool {
        !matches!(self, ContractFamilySpec::General { .. })
    }
}

/// A concrete payment rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Contract {
    Affine {
        theta0: f64,
        theta1: f64,
    },
    Linear {
        theta1: f64,
    },
    Constant {
        theta0: f64,
    },
    /// Pays `payments[i]` at `outputs[i]` and nothing at any other output.
    Schedule {
        outputs: Vec<f64>,
        payments: Vec<f64>,
    },
}

impl Contract {
    pub const ZERO: Contract = Contract::Constant { theta0: 0.0 };

    /// Builds the family member with parameters `(θ0, θ1)`; the unused
    /// parameter of linear and constant families is ignored.
    pub fn parametric(family: &ContractFamilySpec, theta0: f64, theta1: f64) -> Result<Self> {
        match family {
            ContractFamilySpec::Affine { .. } => Ok(Contract::Affine { theta0, theta1 }),
            ContractFamilySpec::Linear => Ok(Contract::Linear { theta1 }),
            ContractFamilySpec::Constant { .. } => Ok(Contract::Constant { theta0 }),
            ContractFamilySpec::General { .. } => {
                Err(Error::Unsupported("the general family has no (θ0, θ1) parameterization".into()))
            }
        }
    }

    /// `(θ0, θ1)` for parametric contracts.
    pub fn theta(&self) -> Option<(f64, f64)> {
        match *self {
            Contract::Affine { theta0, theta1 } => Some((theta0, theta1)),
            Contract::Linear { theta1 } => Some((0.0, theta1)),
            Contract::Constant { theta0 } => Some((theta0, 0.0)),
            Contract::Schedule { .. } => None,
        }
    }

    pub fn payment(&self, y: f64) -> f64 {
        match self {
            Contract::Affine { theta0, theta1 } => theta0 + theta1 * y,
            Contract::Linear { theta1 } => theta1 * y,
            Contract::Constant { theta0 } => *theta0,
            Contract::Schedule { outputs, payments } => outputs
                .iter()
                .position(|&o| (o - y).abs() <= SCHEDULE_MATCH_TOL * (1.0 + y.abs()))
                .map_or(0.0, |i| payments[i]),
        }
    }

    /// Whether the rule pays a nonnegative amount on every output.
    pub fn is_limited_liability(&self) -> bool {
        match self {
            Contract::Affine { theta0, theta1 } => *theta0 >= 0.0 && (0.0..=1.0).contains(theta1),
            Contract::Linear { theta1 } => (0.0..=1.0).contains(theta1),
            Contract::Constant { theta0 } => *theta0 >= 0.0,
            Contract::Schedule { payments, .. } => payments.iter().all(|p| *p >= 0.0),
        }
    }
}

const SCHEDULE_MATCH_TOL: f64 = 1e-9;

/// Probability weights over type ids.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeDistribution(pub BTreeMap<TypeId, f64>);

impl TypeDistribution {
    pub fn delta(t: &TypeId) -> Self {
        let mut m = BTreeMap::new();
        m.insert(t.clone(), 1.0);
        TypeDistribution(m)
    }

    pub fn from_pairs<I, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (T, f64)>,
        T: Into<TypeId>,
    {
        TypeDistribution(pairs.into_iter().map(|(t, w)| (t.into(), w)).collect())
    }

    pub fn weight(&self, t: &TypeId) -> f64 {
        self.0.get(t).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TypeId, f64)> {
        self.0.iter().map(|(t, w)| (t, *w))
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.0.is_empty() {
            return Err("empty distribution".into());
        }
        if let Some((t, w)) = self.iter().find(|(_, w)| !(*w >= 0.0)) {
            return Err(format!("negative weight {w} on type {t}"));
        }
        let total: f64 = self.0.values().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(format!("weights sum to {total}, not 1"));
        }
        Ok(())
    }
}

/// Plausible type distributions the principal guards against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "members", rename_all = "snake_case")]
pub enum AmbiguitySet {
    /// Known prior: the Bayesian case.
    Singleton(TypeDistribution),
    /// Every point mass on the listed types: the worst-case case.
    AllDeltas(Vec<TypeId>),
    FiniteSet(Vec<TypeDistribution>),
    /// Every distribution over the listed types.
    FullSimplex(Vec<TypeId>),
}

impl AmbiguitySet {
    pub fn referenced_types(&self) -> BTreeSet<TypeId> {
        match self {
            AmbiguitySet::Singleton(d) => d.0.keys().cloned().collect(),
            AmbiguitySet::AllDeltas(ts) | AmbiguitySet::FullSimplex(ts) => ts.iter().cloned().collect(),
            AmbiguitySet::FiniteSet(ds) => ds.iter().flat_map(|d| d.0.keys().cloned()).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AmbiguitySet::Singleton(_) => "singleton",
            AmbiguitySet::AllDeltas(_) => "all_deltas",
            AmbiguitySet::FiniteSet(_) => "finite_set",
            AmbiguitySet::FullSimplex(_) => "full_simplex",
        }
    }

    /// Robust variants whose worst case is always a point mass.
    pub fn is_vertex_set(&self) -> bool {
        matches!(self, AmbiguitySet::AllDeltas(_) | AmbiguitySet::FullSimplex(_))
    }
}

/// Numerical resolution and tolerances shared by every solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub theta1_steps: usize,
    pub theta0_steps: usize,
    /// Upper end of the θ0 grid; defaults to the family's bound, then to
    /// the largest expected output in the scenario.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0_max: Option<f64>,
    /// Samples per analytic curve.
    pub cost_steps: usize,
    pub eps_tie: f64,
    pub eps_val: f64,
    /// Add the exact switching slopes of every type's best response to the θ1 grid.
    pub breakpoints: bool,
    pub general_output_cap: usize,
    pub general_payment_levels: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            theta1_steps: 2001,
            theta0_steps: 101,
            theta0_max: None,
            cost_steps: 1001,
            eps_tie: DEFAULT_EPS_TIE,
            eps_val: DEFAULT_EPS_VAL,
            breakpoints: true,
            general_output_cap: 6,
            general_payment_levels: 8,
        }
    }
}

/// Which modelling assumption a violation breaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// Every technology holds the zero-cost, zero-output outside option.
    OutsideOption,
    /// Some action has expected output strictly above its cost.
    NonTriviality,
    /// Payments, costs and outputs are nonnegative.
    LimitedLiability,
    /// Structural problems: probabilities, references, grid sizes.
    WellFormed,
}

impl Assumption {
    pub fn describe(self) -> &'static str {
        match self {
            Assumption::OutsideOption => "normalized outside option",
            Assumption::NonTriviality => "non-triviality",
            Assumption::LimitedLiability => "one-sided (limited) liability",
            Assumption::WellFormed => "well-formed input",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: String,
    pub assumption: Assumption,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.subject, self.assumption.describe(), self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub technologies: BTreeMap<TypeId, Technology>,
    pub ambiguity: AmbiguitySet,
    pub family: ContractFamilySpec,
    #[serde(default)]
    pub grid: GridConfig,
}

impl Scenario {
    pub fn new(
        technologies: Vec<Technology>,
        ambiguity: AmbiguitySet,
        family: ContractFamilySpec,
        grid: GridConfig,
    ) -> Self {
        Scenario {
            technologies: technologies.into_iter().map(|t| (t.type_id.clone(), t)).collect(),
            ambiguity,
            family,
            grid,
        }
    }

    pub fn type_ids(&self) -> impl Iterator<Item = &TypeId> {
        self.technologies.keys()
    }

    pub fn technology(&self, t: &TypeId) -> Result<&Technology> {
        self.technologies.get(t).ok_or_else(|| Error::Invalid(format!("unknown type `{t}`")))
    }

    pub fn with_family(&self, family: ContractFamilySpec) -> Self {
        Scenario { family, ..self.clone() }
    }

    pub fn with_ambiguity(&self, ambiguity: AmbiguitySet) -> Self {
        Scenario { ambiguity, ..self.clone() }
    }

    /// Same scenario with every random output replaced by its mean.
    pub fn mean_reduced(&self) -> Self {
        Scenario {
            technologies: self.technologies.iter().map(|(k, t)| (k.clone(), t.mean_reduced())).collect(),
            ..self.clone()
        }
    }

    pub fn max_expected_output(&self) -> f64 {
        self.technologies.values().map(Technology::max_expected_output).fold(0.0, f64::max)
    }

    /// Upper end of the θ0 grid.
    pub fn theta0_max(&self) -> f64 {
        let family_max = match &self.family {
            ContractFamilySpec::Affine { theta0_max } | ContractFamilySpec::Constant { theta0_max } => *theta0_max,
            _ => None,
        };
        self.grid.theta0_max.or(family_max).unwrap_or_else(|| self.max_expected_output())
    }

    /// Every breached assumption; empty when the scenario is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push =
            |subject: String, assumption, message: String| out.push(Violation { subject, assumption, message });

        if self.technologies.is_empty() {
            push("types".into(), Assumption::WellFormed, "no technology types declared".into());
        }
        for (id, tech) in &self.technologies {
            let subject = format!("types[{id}]");
            if tech.type_id != *id {
                push(subject.clone(), Assumption::WellFormed, format!("keyed as `{id}` but named `{}`", tech.type_id));
            }
            if tech.actions.is_empty() {
                push(subject.clone(), Assumption::WellFormed, "no actions".into());
                continue;
            }
            for (i, a) in tech.actions.iter().enumerate() {
                if !a.cost.is_finite() || a.cost < 0.0 {
                    push(
                        format!("{subject}.actions[{i}]"),
                        Assumption::LimitedLiability,
                        format!("cost {} is negative or non-finite", a.cost),
                    );
                }
                if let Err((assumption, msg)) = a.output.check() {
                    push(format!("{subject}.actions[{i}]"), assumption, msg);
                }
            }
            if !tech.actions.iter().any(Action::is_outside_option) {
                push(
                    subject.clone(),
                    Assumption::OutsideOption,
                    "missing the zero-cost, zero-output outside option".into(),
                );
            }
            if !tech.actions.iter().any(|a| a.surplus() > 0.0) {
                push(subject.clone(), Assumption::NonTriviality, "no action has expected output above its cost".into());
            }
        }

        let declared: BTreeSet<TypeId> = self.technologies.keys().cloned().collect();
        for t in self.ambiguity.referenced_types() {
            if !declared.contains(&t) {
                push("ambiguity".into(), Assumption::WellFormed, format!("references undeclared type `{t}`"));
            }
        }
        match &self.ambiguity {
            AmbiguitySet::Singleton(d) => {
                if let Err(m) = d.check() {
                    push("ambiguity.members".into(), Assumption::WellFormed, m);
                }
            }
            AmbiguitySet::FiniteSet(ds) => {
                if ds.is_empty() {
                    push("ambiguity.members".into(), Assumption::WellFormed, "empty distribution list".into());
                }
                for (i, d) in ds.iter().enumerate() {
                    if let Err(m) = d.check() {
                        push(format!("ambiguity.members[{i}]"), Assumption::WellFormed, m);
                    }
                }
            }
            AmbiguitySet::AllDeltas(ts) | AmbiguitySet::FullSimplex(ts) => {
                if ts.is_empty() {
                    push("ambiguity.members".into(), Assumption::WellFormed, "empty type list".into());
                }
            }
        }

        match &self.family {
            ContractFamilySpec::General { output_grid, payment_cap } => {
                if !(*payment_cap >= 0.0) {
                    push(
                        "family.payment_cap".into(),
                        Assumption::LimitedLiability,
                        format!("payment cap {payment_cap} is negative"),
                    );
                }
                if output_grid.is_empty() {
                    push("family.output_grid".into(), Assumption::WellFormed, "empty output grid".into());
                }
                if output_grid.iter().any(|y| !(*y >= 0.0)) {
                    push(
                        "family.output_grid".into(),
                        Assumption::LimitedLiability,
                        "outputs must be nonnegative".into(),
                    );
                }
            }
            ContractFamilySpec::Affine { theta0_max: Some(m) }
            | ContractFamilySpec::Constant { theta0_max: Some(m) }
                if !(*m >= 0.0) =>
            {
                push("family.theta0_max".into(), Assumption::LimitedLiability, format!("θ0 bound {m} is negative"));
            }
            _ => {}
        }

        let g = &self.grid;
        if g.theta1_steps < 2 || g.theta0_steps < 2 || g.cost_steps < 2 {
            push("grid".into(), Assumption::WellFormed, "grid steps must be at least 2".into());
        }
        if !(g.eps_tie >= 0.0) || !(g.eps_val >= 0.0) {
            push("grid".into(), Assumption::WellFormed, "tolerances must be nonnegative".into());
        }
        if let Some(m) = g.theta0_max {
            if !(m >= 0.0) {
                push("grid.theta0_max".into(), Assumption::LimitedLiability, format!("θ0 bound {m} is negative"));
            }
        }
        out
    }

    /// Fails with every violation when the scenario is not well formed.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Violations(v))
        }
    }
}
