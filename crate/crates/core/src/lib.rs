//! Exponential B-spline collocation for the time-fractional sub-diffusion
//! equation `D_t^alpha u = kappa u_xx + f` with Dirichlet data.
//!
//! Time is discretised with Grünwald–Letnikov (GMMP) weights; space with a
//! tension spline basis whose cubic limit is also available for comparison.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analysis;
pub mod error;
pub mod fractime;
pub mod problems;
pub mod solver;
pub mod specfun;
pub mod splinebasis;
pub mod trisolve;

pub use analysis::{
    amplification_ratio, convergence_order, error_norms, growth_factor, heat_flux_at_left, pairwise_orders,
    perturbation_decay_check, pointwise_error, ErrorReport, FluxSign, PerturbationReport,
};
pub use error::{Error, Result};
pub use fractime::{caputo_gmmp, gmmp_weights, GmmpWeights};
pub use problems::{benchmark, benchmark_with_alpha, BenchmarkCase, Metric, TableTarget, TABLE_POINTS};
pub use solver::{
    advance, assemble_operators, assemble_with_weights, initial_coefficients, reconstruct, solve,
    solve_with_operators, AssembledOperators, CoefficientHistory, Discretization, Level, ProblemSpec,
    SlopeSource,
};
pub use specfun::{erfcx, heaviside, mittag_leffler, MLParams};
pub use splinebasis::{
    eval_basis, knot_stencils, make_shape, BasisMode, CollocationWeights, KnotStencils, Order, SplineBasis,
    SplineShape,
};
pub use trisolve::{dominance_margin, thomas_solve, TriDiagonalSystem};
