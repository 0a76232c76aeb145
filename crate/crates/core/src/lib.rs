//! B-angles in finite-dimensional real normed spaces.
//!
//! Given a norm on ℝⁿ and two vectors `x`, `y`, the radial profile
//! `λ ↦ ‖x + λy‖` is convex, so the strict sublevel set
//! `{λ : ‖x + λy‖ < ‖x‖}` is either empty (`x` is Birkhoff-orthogonal to `y`)
//! or a one-sided open interval `(−γ, 0)` / `(0, γ)`. This crate computes that
//! interval exactly for polyhedral and quadratic norms and by bisection for
//! everything else, and builds the angle calculus on top of it:
//! classification, `γ`, the scale-invariant `γ*`, the cosine analog `k`, and
//! comparisons between angles.
//!
//! The [`oracle`] module is a brute-force verifier that only ever evaluates the
//! norm on a grid; it is used to certify the solvers and drives the property
//! suite behind `birkhoff verify`.

// `!(a < b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod geometry;
pub mod norm;
pub mod oracle;
pub mod profile;

pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{
    classify, compare_same_base, compare_same_target, cosine_k, gamma, gamma_star,
    isosceles_angle, pythagorean_angle, report, sweep_k, AngleClass, AngleReport, Comparison,
    ComparisonBasis, SweepRow, Verdict,
};
pub use norm::{
    inner_product_eval, norm_eval, normalize, parse_norm_spec, Exponent, Gram, Norm, NormClass,
    NormKind, NormSpec, Vector,
};
pub use profile::{
    one_sided_derivatives, profile_eval, sublevel_interval, sublevel_interval_bisection,
    sublevel_interval_pl_exact, sublevel_interval_quadratic_exact, DerivativePair, Exactness,
    Shape, SolveMethod, SublevelInterval,
};

/// Default solver tolerance on `λ`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default band within which two normalized `γ` values compare as equal.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
