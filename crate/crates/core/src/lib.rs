//! Maximum-likelihood estimation on the simplex for kernels of the form
//! `Π x_i^{a_i} Π (δ_jᵀx)^{b_j}`, where the `b_j` may be negative.
//!
//! The estimators reconstruct the observed counts from a candidate point and
//! drive the reconstruction error to zero, without derivatives or matrix
//! inversion. Newton and MM baselines plus a grid oracle are included for
//! comparison.

// `!(v > 0.0)` is used on purpose so that NaN fails the test too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod ingest;
pub mod likelihood;
pub mod model;
pub mod recon;
pub mod slicing;
pub mod solvers;

pub use error::{Error, Result};
pub use ingest::{
    from_matches, model_from_json, model_to_json, parse_expression, parse_grid, parse_matches,
    render_expression, write_grid, MatchRecord,
};
pub use likelihood::{hessian, log_likelihood, score, HessianBlock};
pub use model::{canonicalize, CountModel, Pattern, SimplexPoint};
pub use recon::{
    deviation, quadratic_coeffs, reconstruct, sse, tau0_star, thickness, thickness_profile,
    thickness_raw, Quadratic, ThicknessProfile,
};
pub use slicing::{build_tsa, point_of_dual, tsa_residual, tsa_slices, TsaSystem};
pub use solvers::{
    alliance, greedy_weaver, grid_oracle, mm_solve, newton_solve, weaver, Solution, SolverKind,
    SolverOptions, Status,
};
