//! Method-independent references: the closed-form solid-beam deflection and
//! a finite-difference solver for any configuration.

mod analytic;
mod banded;
mod fd;

pub use analytic::{analytic_solid_ss, analytic_solid_ss_jet, AnalyticCase, AnalyticKind};
pub use banded::BandedMatrix;
pub use fd::{fd_solve, fd_solve_raw, FdGrid, FdSolution, MIN_GRID};
