//! Robust contract design between a principal and an agent of unknown type.
//!
//! The principal offers a payment rule `w(y)` without knowing the agent's
//! technology; nature picks a type distribution from an ambiguity set; the
//! agent responds with the action maximizing `E[w(y)] − cost`. The crate
//! solves the three orderings of these moves and splits the resulting gap into
//! an adjustability gap and an information rent. It also checks sufficient
//! conditions under which affine contracts are optimal.
//!
//! ```
//! use drpa::model::*;
//! use drpa::games::solve_game_i;
//!
//! let a = ProductionCurve::from_fn(1.0, 101, |c| c + c * c).unwrap();
//! let b = ProductionCurve::from_fn(2.0, 101, |c| 1.5 * c).unwrap();
//! let scenario = Scenario::new(
//!     vec![Technology::from_curve("A", &a), Technology::from_curve("B", &b)],
//!     AmbiguitySet::AllDeltas(vec!["A".into(), "B".into()]),
//!     ContractFamilySpec::affine(),
//!     GridConfig::default(),
//! );
//! let z = solve_game_i(&scenario).unwrap().value;
//! assert!((z - 2.0 / 3.0).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agent;
pub mod cases;
pub mod certify;
pub mod cli;
pub mod error;
pub mod games;
pub mod geometry;
pub mod io;
pub mod model;
pub mod random;

pub use error::{Error, Result};
