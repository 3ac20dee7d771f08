//! JSON scenario documents and result reports.
//!
//! A scenario document lists agent types, each given either as an explicit
//! action set or as a sampled curve:
//!
//! ```json
//! {
//!   "types": [
//!     {"id": "A", "actions": [{"cost": 0, "output": 0},
//!                             {"cost": 1, "dist": [{"y": 0, "p": 0.5}, {"y": 4, "p": 0.5}]}]},
//!     {"id": "B", "curve": {"kind": "polynomial", "coefficients": [0, 1, 0.25], "cost_cap": 2}}
//!   ],
//!   "ambiguity": {"variant": "all_deltas", "members": ["A", "B"]},
//!   "family": {"variant": "affine"},
//!   "grid": {"theta1_steps": 2001}
//! }
//! ```
//!
//! Case-study documents carry a `case` key instead of `types`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cases::{forest_curve, ForestParams, SalesforceParams};
use crate::error::{Error, Result};
use crate::model::{
    Action, AmbiguitySet, ContractFamilySpec, GridConfig, ProductionCurve, Scenario, Technology, TypeId,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Samples {
        costs: Vec<f64>,
        outputs: Vec<f64>,
    },
    /// `g(c) = Σ a_i c^i` on `[0, cost_cap]`.
    Polynomial {
        coefficients: Vec<f64>,
        cost_cap: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
    },
    /// `g(c) = Σ a·c^e` over `[a, e]` pairs on `[0, cost_cap]`.
    Terms {
        terms: Vec<(f64, f64)>,
        cost_cap: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
    },
    Forest {
        #[serde(flatten)]
        params: ForestParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        steps: Option<usize>,
    },
}

impl CurveSpec {
    pub fn sample(&self, default_steps: usize) -> Result<ProductionCurve> {
        match self {
            CurveSpec::Samples { costs, outputs } => ProductionCurve::new(costs.clone(), outputs.clone()),
            CurveSpec::Polynomial { coefficients, cost_cap, steps } => {
                ProductionCurve::from_fn(*cost_cap, steps.unwrap_or(default_steps), |c| {
                    coefficients.iter().rev().fold(0.0, |acc, a| acc * c + a)
                })
            }
            CurveSpec::Terms { terms, cost_cap, steps } => {
                ProductionCurve::from_fn(*cost_cap, steps.unwrap_or(default_steps), |c| {
                    terms.iter().map(|&(a, e)| a * c.powf(e)).sum()
                })
            }
            CurveSpec::Forest { params, steps } => forest_curve(params, steps.unwrap_or(default_steps)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeDocument {
    pub id: TypeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<Action>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub types: Vec<TypeDocument>,
    pub ambiguity: AmbiguitySet,
    #[serde(default = "ContractFamilySpec::affine")]
    pub family: ContractFamilySpec,
    #[serde(default)]
    pub grid: GridConfig,
}

impl ScenarioDocument {
    /// Builds the scenario without checking modelling assumptions.
    pub fn build(&self) -> Result<Scenario> {
        let mut techs = Vec::with_capacity(self.types.len());
        for (i, t) in self.types.iter().enumerate() {
            let tech = match (&t.actions, &t.curve) {
                (Some(a), None) => Technology::new(t.id.clone(), a.clone()),
                (None, Some(c)) => Technology::from_curve(t.id.clone(), &c.sample(self.grid.cost_steps)?),
                _ => {
                    return Err(Error::Invalid(format!(
                        "types[{i}] (`{}`): give exactly one of `actions` or `curve`",
                        t.id
                    )))
                }
            };
            if techs.iter().any(|x: &Technology| x.type_id == tech.type_id) {
                return Err(Error::Invalid(format!("types[{i}]: duplicate type id `{}`", t.id)));
            }
            techs.push(tech);
        }
        Ok(Scenario::new(techs, self.ambiguity.clone(), self.family.clone(), self.grid.clone()))
    }

    /// Document listing every type as explicit actions.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        ScenarioDocument {
            types: scenario
                .technologies
                .values()
                .map(|t| TypeDocument { id: t.type_id.clone(), actions: Some(t.actions.clone()), curve: None })
                .collect(),
            ambiguity: scenario.ambiguity.clone(),
            family: scenario.family.clone(),
            grid: scenario.grid.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum CaseDocument {
    Forest {
        params: ForestParams,
        /// Subsidy rate to evaluate.
        #[serde(default = "half")]
        p: f64,
        /// Baseline weights for the ratio sweep.
        #[serde(default)]
        sweep: Vec<f64>,
    },
    Salesforce {
        params: SalesforceParams,
        #[serde(default)]
        grid: GridConfig,
    },
}

fn half() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Scenario(ScenarioDocument),
    Case(CaseDocument),
}

fn parse_as<T: DeserializeOwned>(file: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = if path == "." { inner.to_string() } else { format!("at `{path}`: {inner}") };
        Error::Document { file: file.to_string(), message }
    })
}

pub fn parse_document(file: &str, text: &str) -> Result<Document> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Document { file: file.to_string(), message: e.to_string() })?;
    if value.get("case").is_some() {
        parse_as(file, text).map(Document::Case)
    } else {
        parse_as(file, text).map(Document::Scenario)
    }
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&path.display().to_string(), &text)
}

/// Parses, builds and validates a scenario document.
pub fn parse_scenario(file: &str, text: &str) -> Result<Scenario> {
    let doc: ScenarioDocument = parse_as(file, text)?;
    let s = doc.build()?;
    s.ensure_valid()?;
    Ok(s)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&path.display().to_string(), &text)
}

/// Result envelope written by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ok: bool,
    pub result: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, result: impl Serialize) -> Result<Self> {
        Ok(Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input: None,
            grid: None,
            seed: None,
            ok: true,
            result: serde_json::to_value(result)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
      "types": [
        {"id": "A", "actions": [{"cost": 0, "output": 0},
                                {"cost": 1, "dist": [{"y": 0, "p": 0.5}, {"y": 4, "p": 0.5}]}]},
        {"id": "B", "curve": {"kind": "polynomial", "coefficients": [0, 1, 0.25], "cost_cap": 2, "steps": 5}}
      ],
      "ambiguity": {"variant": "all_deltas", "members": ["A", "B"]}
    }"#;

    #[test]
    fn parses_mixed_types() {
        let s = parse_scenario("doc", DOC).unwrap();
        assert_eq!(s.family, ContractFamilySpec::affine());
        let a = s.technology(&"A".into()).unwrap();
        assert_eq!(a.actions[1].expected_output(), 2.0);
        let b = s.technology(&"B".into()).unwrap();
        assert_eq!(b.actions.len(), 5);
        assert_eq!(b.actions[4].expected_output(), 3.0);
    }

    #[test]
    fn round_trip_through_document() {
        let s = parse_scenario("doc", DOC).unwrap();
        let text = serde_json::to_string(&ScenarioDocument::from_scenario(&s)).unwrap();
        assert_eq!(parse_scenario("again", &text).unwrap(), s);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = DOC.replace(r#""cost": 1,"#, r#""cost": "one","#);
        let e = parse_scenario("doc", &bad).unwrap_err().to_string();
        assert!(e.contains("types[0].actions[1]"), "{e}");
        assert!(e.contains("line"), "{e}");
    }

    #[test]
    fn both_sources_rejected() {
        let bad = DOC.replace(
            r#""id": "A", "actions""#,
            r#""id": "A", "curve": {"kind": "samples", "costs": [0], "outputs": [0]}, "actions""#,
        );
        assert!(matches!(parse_scenario("doc", &bad), Err(Error::Invalid(_))));
    }

    #[test]
    fn terms_curve() {
        let c = CurveSpec::Terms { terms: vec![(2.0, 0.5)], cost_cap: 1.0, steps: Some(5) }.sample(0).unwrap();
        assert_eq!(c.outputs()[0], 0.0);
        assert_eq!(c.outputs()[1], 1.0);
        assert_eq!(c.output_at_cap(), 2.0);
    }

    #[test]
    fn case_documents_are_detected() {
        let d = parse_document("c", r#"{"case": "forest", "params": {"k": 1, "h": 1, "t": 0, "a0": 0}}"#).unwrap();
        assert!(matches!(d, Document::Case(CaseDocument::Forest { p, .. }) if p == 0.5));
    }
}
