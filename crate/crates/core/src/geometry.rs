//! The B-angle calculus built on the sublevel solvers.
//!
//! `x` forms a proper acute B-angle to `y` when `‖x + λy‖ < ‖x‖` exactly on
//! some `(−γ, 0)`, a proper obtuse one when it happens on `(0, γ)`, and is
//! Birkhoff-orthogonal to `y` when it never happens. Angles are compared
//! through `γ` of the normalized pair, and `k(x, y) = ±γ(x̂, ŷ)/2` plays the
//! role of the cosine.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::norm::{check_dims, normalize, Norm, Vector};
use crate::profile::{derivatives, endpoint, Side, SolveMethod, DERIV_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleClass {
    ProperAcute,
    Orthogonal,
    ProperObtuse,
}

impl AngleClass {
    pub fn sign(self) -> f64 {
        match self {
            AngleClass::ProperAcute => 1.0,
            AngleClass::Orthogonal => 0.0,
            AngleClass::ProperObtuse => -1.0,
        }
    }

    /// The class of `(ax, by)` given the class of `(x, y)` and the sign of `ab`.
    pub fn under_scaling(self, same_sign: bool) -> AngleClass {
        match (self, same_sign) {
            (c, true) | (c @ AngleClass::Orthogonal, false) => c,
            (AngleClass::ProperAcute, false) => AngleClass::ProperObtuse,
            (AngleClass::ProperObtuse, false) => AngleClass::ProperAcute,
        }
    }

    fn side(self) -> Option<Side> {
        match self {
            AngleClass::ProperAcute => Some(Side::Negative),
            AngleClass::Orthogonal => None,
            AngleClass::ProperObtuse => Some(Side::Positive),
        }
    }

    fn acuteness_rank(self) -> u8 {
        match self {
            AngleClass::ProperAcute => 2,
            AngleClass::Orthogonal => 1,
            AngleClass::ProperObtuse => 0,
        }
    }
}

/// Everything computed for one ordered pair `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub class: AngleClass,
    pub gamma: f64,
    pub gamma_star: f64,
    pub k: f64,
    /// `γ(x̂, ŷ)`.
    pub gamma_hat: f64,
    pub method: SolveMethod,
    pub norm_x: f64,
    pub norm_y: f64,
}

fn class_from_side(side: Option<Side>) -> AngleClass {
    match side {
        Some(Side::Negative) => AngleClass::ProperAcute,
        Some(Side::Positive) => AngleClass::ProperObtuse,
        None => AngleClass::Orthogonal,
    }
}

/// Trichotomy for the ordered pair `(x, y)`. Zero vectors are orthogonal to
/// everything and everything is orthogonal to them.
pub fn classify<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> Result<AngleClass> {
    check_dims(norm, &[x, y])?;
    if x.is_zero() || y.is_zero() {
        return Ok(AngleClass::Orthogonal);
    }
    classify_nonzero(norm, x.coords(), y.coords())
}

fn classify_nonzero<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64]) -> Result<AngleClass> {
    let pair = derivatives(norm, x, y)?;
    Ok(class_from_side(pair.side(DERIV_MARGIN * norm.eval(y))))
}

fn nonzero_pair<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> Result<()> {
    check_dims(norm, &[x, y])?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

fn gamma_for<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64], class: AngleClass, tol: f64) -> Result<f64> {
    match class.side() {
        None => Ok(0.0),
        Some(side) => Ok(endpoint(norm, x, y, side, tol, SolveMethod::for_class(norm.class()))?.gamma()),
    }
}

/// Width of the failure interval of `‖x + λy‖ ≥ ‖x‖`; 0 for orthogonal pairs.
pub fn gamma<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<f64> {
    nonzero_pair(norm, x, y)?;
    let class = classify_nonzero(norm, x.coords(), y.coords())?;
    gamma_for(norm, x.coords(), y.coords(), class, tol)
}

/// `(‖y‖/‖x‖)·γ(x, y)`, invariant under positive rescaling of either vector.
pub fn gamma_star<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<f64> {
    let g = gamma(norm, x, y, tol)?;
    Ok(norm.eval(y.coords()) / norm.eval(x.coords()) * g)
}

/// The cosine analog `k(x, y) ∈ [−1, 1]`.
pub fn cosine_k<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<f64> {
    Ok(report(norm, x, y, tol)?.k)
}

pub fn report<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<AngleReport> {
    nonzero_pair(norm, x, y)?;
    let class = classify_nonzero(norm, x.coords(), y.coords())?;
    let (norm_x, norm_y) = (norm.eval(x.coords()), norm.eval(y.coords()));
    let gamma = gamma_for(norm, x.coords(), y.coords(), class, tol)?;
    let (xh, yh) = (normalize(norm, x)?, normalize(norm, y)?);
    let gamma_hat = gamma_for(norm, xh.coords(), yh.coords(), class, tol)?;
    Ok(AngleReport {
        class,
        gamma,
        gamma_star: norm_y / norm_x * gamma,
        k: class.sign() * gamma_hat / 2.0,
        gamma_hat,
        method: SolveMethod::for_class(norm.class()),
        norm_x,
        norm_y,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    MoreAcute,
    Same,
    MoreObtuse,
}

impl Verdict {
    pub fn reversed(self) -> Verdict {
        match self {
            Verdict::MoreAcute => Verdict::MoreObtuse,
            Verdict::Same => Verdict::Same,
            Verdict::MoreObtuse => Verdict::MoreAcute,
        }
    }
}

/// Whether the verdict came from comparing `γ̂` within one class, or from
/// ordering different classes (acute > orthogonal > obtuse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComparisonBasis {
    GammaHat,
    MixedClasses,
}

/// Verdict about the first angle relative to the second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub basis: ComparisonBasis,
    pub classes: (AngleClass, AngleClass),
    pub gamma_hat_first: f64,
    pub gamma_hat_second: f64,
    pub tie_tolerance: f64,
}

fn normalized_class_and_gamma<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<(AngleClass, f64)> {
    nonzero_pair(norm, x, y)?;
    let class = classify_nonzero(norm, x.coords(), y.coords())?;
    let (xh, yh) = (normalize(norm, x)?, normalize(norm, y)?);
    Ok((class, gamma_for(norm, xh.coords(), yh.coords(), class, tol)?))
}

fn compare(first: (AngleClass, f64), second: (AngleClass, f64), tie_tol: f64) -> Result<Comparison> {
    if !(tie_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tie tolerance must be non-negative, got {tie_tol}")));
    }
    let (basis, verdict) = if first.0 != second.0 {
        let verdict = match first.0.acuteness_rank().cmp(&second.0.acuteness_rank()) {
            Ordering::Greater => Verdict::MoreAcute,
            _ => Verdict::MoreObtuse,
        };
        (ComparisonBasis::MixedClasses, verdict)
    } else {
        let diff = first.1 - second.1;
        let by_gamma = if diff.abs() <= tie_tol {
            Verdict::Same
        } else if diff > 0.0 {
            Verdict::MoreAcute
        } else {
            Verdict::MoreObtuse
        };
        // On the obtuse side a wider failure interval means a more obtuse angle.
        let verdict = if first.0 == AngleClass::ProperObtuse { by_gamma.reversed() } else { by_gamma };
        (ComparisonBasis::GammaHat, verdict)
    };
    Ok(Comparison {
        verdict,
        basis,
        classes: (first.0, second.0),
        gamma_hat_first: first.1,
        gamma_hat_second: second.1,
        tie_tolerance: tie_tol,
    })
}

/// Compares the angle from `x` to `y1` against the angle from `x` to `y2`.
pub fn compare_same_base<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y1: &Vector,
    y2: &Vector,
    tie_tol: f64,
    tol: f64,
) -> Result<Comparison> {
    let first = normalized_class_and_gamma(norm, x, y1, tol)?;
    let second = normalized_class_and_gamma(norm, x, y2, tol)?;
    compare(first, second, tie_tol)
}

/// Compares the angle from `x1` to `y` against the angle from `x2` to `y`.
pub fn compare_same_target<N: Norm + ?Sized>(
    norm: &N,
    x1: &Vector,
    x2: &Vector,
    y: &Vector,
    tie_tol: f64,
    tol: f64,
) -> Result<Comparison> {
    let first = normalized_class_and_gamma(norm, x1, y, tol)?;
    let second = normalized_class_and_gamma(norm, x2, y, tol)?;
    compare(first, second, tie_tol)
}

fn arccos_checked(arg: f64) -> Result<f64> {
    const SPILL: f64 = 1e-12;
    if !(arg.abs() <= 1.0 + SPILL) {
        return Err(Error::Domain(format!(
            "arccos argument {arg} is out of range; the norm violates the triangle inequality"
        )));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// `arccos((‖x‖² + ‖y‖² − ‖x − y‖²) / (2‖x‖‖y‖))`.
pub fn pythagorean_angle<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> Result<f64> {
    nonzero_pair(norm, x, y)?;
    let (nx, ny) = (norm.eval(x.coords()), norm.eval(y.coords()));
    let diff = norm.eval_affine(x.coords(), y.coords(), -1.0);
    arccos_checked((nx * nx + ny * ny - diff * diff) / (2.0 * nx * ny))
}

/// `arccos((‖x + y‖² − ‖x − y‖²) / (4‖x‖‖y‖))`.
pub fn isosceles_angle<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> Result<f64> {
    nonzero_pair(norm, x, y)?;
    let (nx, ny) = (norm.eval(x.coords()), norm.eval(y.coords()));
    let sum = norm.eval_affine(x.coords(), y.coords(), 1.0);
    let diff = norm.eval_affine(x.coords(), y.coords(), -1.0);
    arccos_checked((sum * sum - diff * diff) / (4.0 * nx * ny))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub k: f64,
    pub class: AngleClass,
    pub gamma_hat: f64,
}

/// `k(x, (cos θ, sin θ))` for each `θ` in the grid. Planar norms only.
pub fn sweep_k<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    grid: &[f64],
    tol: f64,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if x.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: x.dim() });
    }
    check_dims(norm, &[x])?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    if let Some(t) = grid.iter().find(|t| !(**t > -PI && **t <= PI)) {
        return Err(Error::Domain(format!("sweep angle {t} is outside (-π, π]")));
    }
    exec.map(grid, |&theta| {
        let y = Vector::new(vec![theta.cos(), theta.sin()])?;
        let r = report(norm, x, &y, tol)?;
        Ok(SweepRow { theta, k: r.k, class: r.class, gamma_hat: r.gamma_hat })
    })
    .into_iter()
    .collect()
}
