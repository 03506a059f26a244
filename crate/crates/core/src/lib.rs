//! Self-similar solutions of the porous medium equation `θ_τ = (θ^{n+1})_ξξ`,
//! their nonlinear superposition, and a conservative explicit solver used to
//! check them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use kernel::{Nonlinearity, Solution, SteadyParams, SuperposedParams};
pub use solver::{BoundaryCondition, FieldState, Grid1D, StepControl};
