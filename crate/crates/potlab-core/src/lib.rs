//! Numerical toolkit for nonlinear integral inequalities on finite
//! discretized measure spaces.
//!
//! The crate models a weighted point set together with a nonnegative kernel
//! matrix over the extended reals `[0, +inf]`, and provides:
//!
//! - kernel construction (Riesz, radial, Volterra, inverse-distance powers)
//!   and the kernel transformations used to change the reference weight,
//! - certification machinery for the weak maximum principle: quasi-metric
//!   and Ptolemy constants by exhaustive enumeration, and a dense-simplex
//!   search over all supports for small instances,
//! - the scalar calculus of a monotone nonlinearity `g`: the integrated
//!   reciprocal `F`, its inverse, the shifted functions and their recursive
//!   integrals, and the associated iteration constants,
//! - closed-form pointwise lower/upper bounds with their necessary
//!   conditions,
//! - Picard iteration solvers that produce reference solutions, plus direct
//!   numerical oracles for the underlying integral inequalities.
//!
//! Everything is pure computation over immutable inputs; the crate is
//! `no_std`-compatible (with `alloc`) when built without the `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod kernel;
pub mod nonlinearity;
pub mod principles;
pub mod solver;
pub mod space;
pub mod xr;

mod quad;
mod simplex;

pub use bounds::{
    bounds_with_h, homogeneous_sublinear_bound, iterated_power_bound, lower_bound_general,
    lower_bound_power, power_iterate_residuals, upper_bound_general, upper_bound_power_negative,
    BoundError, BoundFamily, BoundReport, BoundRow, ConditionStatus, IteratedPowerBound,
    NecessaryCondition, PointBound,
};
pub use kernel::{DiagonalPolicy, Kernel, KernelError, RadialProfile};
pub use nonlinearity::{
    iteration_constant_c, IterationConstant, MonotoneTable, NonlinError, Nonlinearity, PsiLadder,
    PsiRoutes,
};
pub use principles::{
    certified_b, domination_kernel, minimal_b_exhaustive, mutual_energy, ptolemy_constant,
    quasimetric_constant, verify_domination, verify_wmp, KernelTransform, PrincipleError,
    PtolemyReport, QuasiMetricReport, Verdict, WmpReport, WmpStrategy, WmpWitness,
};
pub use solver::{
    homogeneous_picard, iter_psi_check, iterate_f, key_lemma_check, layer_cake_check,
    picard_decreasing, picard_increasing, InequalityCheck, IterPsiCheck, IterationTrace,
    PointStatus, SolveOptions, SolveResult, SolverError,
};
pub use space::{Measure, MeasureSpace, SpaceError};
