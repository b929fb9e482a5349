//! Static bending of tapered perforated beams on a Pasternak foundation under
//! an exponential load.
//!
//! The main solver ([`dfl_tfc`]) builds a trial deflection that satisfies the
//! support conditions exactly (a constrained expression, [`tfc`]) around a
//! Chebyshev free function ([`chebyshev`]) and fits its weights to the
//! collocation residual of the beam equation ([`beam`]). Three independent
//! references ship alongside it: a boundary-characteristic Galerkin solver
//! ([`galerkin`]), a small physics-informed network ([`pinn`]) and
//! closed-form / finite-difference oracles ([`oracles`]).

pub mod beam;
pub mod chebyshev;
pub mod dfl_tfc;
pub mod error;
pub mod galerkin;
pub mod lbfgs;
pub mod linalg;
pub mod oracles;
pub mod pinn;
pub mod poly;
pub mod quadrature;
pub mod solution;
pub mod tfc;

pub use beam::{BeamConfig, BoundaryKind, StiffnessProfile};
pub use dfl_tfc::{CollocationGrid, DflTfcSolution, GridKind, SolveMode};
pub use error::{Error, Result};
pub use galerkin::{galerkin_solve, GalerkinSolution};
pub use lbfgs::{LbfgsOutcome, LbfgsSettings};
pub use oracles::{analytic_solid_ss, fd_solve, AnalyticCase, FdSolution};
pub use pinn::{train_pinn, train_pinn_with, PinnOptions, PinnSolution};
pub use solution::{Deflection, Method, SolveResult};
pub use tfc::ConstrainedExpression;
