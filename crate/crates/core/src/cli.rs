//! Command-line front end: every command reads a JSON document and emits a
//! JSON [`Report`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cases::{self, ForestParams};
use crate::certify::{self, classify_surplus, SurplusKind};
use crate::error::{Error, Result};
use crate::games;
use crate::geometry::{upper_hull, SurplusCurve};
use crate::io::{read_document, CaseDocument, Document, Report};
use crate::model::{GridConfig, Scenario, TypeId};
use crate::random::{validate_random, RandomSpec};

#[derive(Debug, Parser)]
#[command(name = "drpa", version, about = "Robust principal-agent contract solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridOverrides,
}

#[derive(Debug, Default, Args)]
pub struct GridOverrides {
    #[arg(long, global = true)]
    pub grid_theta1_steps: Option<usize>,
    #[arg(long, global = true)]
    pub grid_theta0_steps: Option<usize>,
    #[arg(long, global = true)]
    pub grid_theta0_max: Option<f64>,
    #[arg(long, global = true)]
    pub grid_cost_steps: Option<usize>,
    #[arg(long, global = true)]
    pub grid_eps_tie: Option<f64>,
    #[arg(long, global = true)]
    pub grid_eps_val: Option<f64>,
    /// Search the plain θ1 grid only.
    #[arg(long, global = true)]
    pub grid_no_breakpoints: bool,
}

impl GridOverrides {
    pub fn apply(&self, g: &mut GridConfig) {
        if let Some(v) = self.grid_theta1_steps {
            g.theta1_steps = v;
        }
        if let Some(v) = self.grid_theta0_steps {
            g.theta0_steps = v;
        }
        if let Some(v) = self.grid_theta0_max {
            g.theta0_max = Some(v);
        }
        if let Some(v) = self.grid_cost_steps {
            g.cost_steps = v;
        }
        if let Some(v) = self.grid_eps_tie {
            g.eps_tie = v;
        }
        if let Some(v) = self.grid_eps_val {
            g.eps_val = v;
        }
        if self.grid_no_breakpoints {
            g.breakpoints = false;
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Game I: contract first, then nature, then the agent.
    #[command(name = "solve-i")]
    SolveI { scenario: PathBuf },
    /// Game II: the type is revealed before contracting.
    #[command(name = "solve-ii")]
    SolveIi { scenario: PathBuf },
    /// Game III: the agent commits to effort first.
    #[command(name = "solve-iii")]
    SolveIii { scenario: PathBuf },
    /// All three games with the adjustability gap and information rent.
    Gaps { scenario: PathBuf },
    /// Sufficient condition for optimality of affine contracts.
    Certify { scenario: PathBuf },
    /// Surplus classification, concave envelope and adjustability ratio per type.
    Envelope { scenario: PathBuf },
    /// Maximin and minimax orders of the affine game.
    Minimax { scenario: PathBuf },
    /// Forest conservation under linear subsidies.
    #[command(name = "case-forest")]
    CaseForest(ForestArgs),
    /// Salesforce commission under an ambiguous sales distribution.
    #[command(name = "case-salesforce")]
    CaseSalesforce { document: PathBuf },
    /// Check a scenario file's assumptions, or run the invariant suite on
    /// random scenarios when no file is given.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    /// Case document; the parameter flags are ignored when it is given.
    pub document: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    /// Subsidy rate.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_types: usize,
    #[arg(long, default_value_t = 8)]
    pub max_actions: usize,
    #[arg(long, default_value_t = 5)]
    pub output_levels: usize,
}

fn load(path: &Path, grid: &GridOverrides) -> Result<Scenario> {
    let Document::Scenario(mut doc) = read_document(path)? else {
        return Err(Error::Invalid(format!("{}: expected a scenario document, found a case document", path.display())));
    };
    grid.apply(&mut doc.grid);
    let s = doc.build()?;
    s.ensure_valid()?;
    Ok(s)
}

#[derive(Serialize)]
struct EnvelopeEntry {
    surplus: SurplusKind,
    slope_below_one: usize,
    /// Vertices `(cost, surplus)` of the concave envelope.
    envelope_vertices: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    adjustability_ratio: Option<certify::RatioEstimate>,
}

fn envelope_report(s: &Scenario) -> Result<BTreeMap<TypeId, EnvelopeEntry>> {
    let mut out = BTreeMap::new();
    for (t, tech) in &s.technologies {
        let curve = tech.pointwise_curve(s.grid.eps_tie)?;
        let class = classify_surplus(&curve);
        let pts: Vec<(f64, f64)> =
            SurplusCurve::from_production(&curve).points.iter().map(|p| (p.cost, p.surplus)).collect();
        let adjustability_ratio = if class.is_concave() {
            certify::adjustability_ratio_concave(&curve).ok().map(|r| certify::RatioEstimate {
                ratio: r.ratio,
                lower_bound: r.lower_bound,
                from_envelope: false,
            })
        } else if class.classification == SurplusKind::Neither {
            crate::geometry::production_envelope(&curve)
                .and_then(|env| certify::adjustability_ratio_concave(&env))
                .ok()
                .map(|r| certify::RatioEstimate { ratio: r.ratio, lower_bound: true, from_envelope: true })
        } else {
            None
        };
        out.insert(
            t.clone(),
            EnvelopeEntry {
                surplus: class.classification,
                slope_below_one: class.slope_below_one.len(),
                envelope_vertices: upper_hull(&pts),
                adjustability_ratio,
            },
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct ForestReport {
    params: ForestParams,
    p: f64,
    payoff: f64,
    ratio: cases::ForestRatio,
    sweep: Vec<cases::ForestRatio>,
    /// Linear-family Game II value on the sampled curve.
    solver_value: f64,
}

#[derive(Serialize)]
struct SalesforceReport {
    slope: cases::SalesforceSlope,
    nominal_gain: f64,
    robust_gain: f64,
    certificate: certify::Certificate,
    gaps: certify::GapReport,
}

fn forest(params: ForestParams, p: f64, sweep: Vec<f64>, g: GridConfig) -> Result<ForestReport> {
    let sweep = if sweep.is_empty() { vec![0.0, 0.25, 0.5, 0.75, 1.0] } else { sweep };
    let scenario = cases::forest_scenario(&params, g)?;
    Ok(ForestReport {
        payoff: cases::forest_linear_payoff(&params, p)?,
        ratio: cases::forest_ratio_bound(&params)?,
        sweep: cases::forest_ratio_sweep(&params, &sweep)?,
        solver_value: games::solve_game_ii(&scenario)?.value,
        params,
        p,
    })
}

/// Runs one command and returns its report; `ok` is false when a
/// validation run found failures.
pub fn run(cli: &Cli) -> Result<Report> {
    let grid = &cli.grid;
    let with_input = |mut r: Report, path: &Path, s: &Scenario| {
        r.input = Some(path.display().to_string());
        r.grid = Some(s.grid.clone());
        r
    };
    Ok(match &cli.command {
        Command::SolveI { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("solve-i", games::solve_game_i(&s)?)?, p, &s)
        }
        Command::SolveIi { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("solve-ii", games::solve_game_ii(&s)?)?, p, &s)
        }
        Command::SolveIii { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("solve-iii", games::solve_game_iii(&s)?)?, p, &s)
        }
        Command::Gaps { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("gaps", certify::decompose_gap(&s)?)?, p, &s)
        }
        Command::Certify { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("certify", certify::certify_affine_optimal(&s)?)?, p, &s)
        }
        Command::Envelope { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("envelope", envelope_report(&s)?)?, p, &s)
        }
        Command::Minimax { scenario: p } => {
            let s = load(p, grid)?;
            with_input(Report::new("minimax", games::minimax_counterpart(&s)?)?, p, &s)
        }
        Command::CaseForest(a) => {
            let (params, p, sweep) = match &a.document {
                Some(path) => match read_document(path)? {
                    Document::Case(CaseDocument::Forest { params, p, sweep }) => (params, p, sweep),
                    _ => return Err(Error::Invalid(format!("{}: expected a forest case document", path.display()))),
                },
                None => (ForestParams { k: a.k, h: a.h, t: a.t, a0: a.a0 }, a.p, Vec::new()),
            };
            let mut g = GridConfig::default();
            grid.apply(&mut g);
            let mut r = Report::new("case-forest", forest(params, p, sweep, g.clone())?)?;
            r.grid = Some(g);
            r.input = a.document.as_ref().map(|p| p.display().to_string());
            r
        }
        Command::CaseSalesforce { document } => {
            let Document::Case(CaseDocument::Salesforce { params, grid: mut g }) = read_document(document)? else {
                return Err(Error::Invalid(format!("{}: expected a salesforce case document", document.display())));
            };
            grid.apply(&mut g);
            let s = cases::salesforce_scenario(&params, g)?;
            let report = SalesforceReport {
                slope: cases::salesforce_optimal_slope(&params)?,
                nominal_gain: params.nominal_gain(),
                robust_gain: params.robust_gain(),
                certificate: certify::certify_affine_optimal(&s)?,
                gaps: certify::decompose_gap(&s)?,
            };
            with_input(Report::new("case-salesforce", report)?, document, &s)
        }
        Command::Validate(a) => match &a.scenario {
            Some(path) => {
                let Document::Scenario(mut doc) = read_document(path)? else {
                    return Err(Error::Invalid(format!("{}: expected a scenario document", path.display())));
                };
                grid.apply(&mut doc.grid);
                let violations: Vec<String> = doc.build()?.validate().iter().map(ToString::to_string).collect();
                let mut r = Report::new("validate", &violations)?;
                r.ok = violations.is_empty();
                r.input = Some(path.display().to_string());
                r
            }
            None => {
                let spec = RandomSpec {
                    max_types: a.max_types,
                    max_actions: a.max_actions,
                    output_levels: a.output_levels,
                    ..RandomSpec::default()
                };
                let summary = validate_random(a.count, a.seed, &spec)?;
                let mut r = Report::new("validate", &summary)?;
                r.ok = summary.passed == summary.count;
                r.seed = Some(a.seed);
                r
            }
        },
    })
}

/// Parses `args`, runs the command and writes the report; returns the
/// process exit code (0 success, 1 failed checks, 2 error).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let written = run(&cli).and_then(|r| {
        let text = r.to_json()?;
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(r.ok)
    });
    match written {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
