//! The radial profile `f(λ) = ‖x + λy‖` and its strict sublevel set
//! `S(x, y) = {λ : f(λ) < ‖x‖}`.
//!
//! `f` is convex, so `S` is an open interval. It never contains 0, and when it
//! is non-empty it touches 0 from exactly one side, with its far endpoint at
//! distance below `2‖x‖/‖y‖`. Which side (if any) is decided by the one-sided
//! derivatives of `f` at 0; the far endpoint is then found exactly for
//! polyhedral and quadratic norms and by bisection otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{check_dims, Exponent, Norm, NormClass, NormSpec, Vector};

/// Derivatives with magnitude below `DERIV_MARGIN · ‖y‖` count as zero.
pub const DERIV_MARGIN: f64 = 1e-9;

const MAX_BISECTION_ITERS: usize = 200;
const MAX_INTERIOR_HALVINGS: usize = 60;
const FD_STEPS: [f64; 3] = [1e-4, 1e-6, 1e-8];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Empty,
    /// `S = (−γ, 0)`.
    NegativeSide(f64),
    /// `S = (0, γ)`.
    PositiveSide(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveMethod {
    ExactPL,
    ExactQuadratic,
    Bisection,
}

impl SolveMethod {
    pub fn for_class(class: NormClass) -> Self {
        match class {
            NormClass::PiecewiseLinear => SolveMethod::ExactPL,
            NormClass::Quadratic => SolveMethod::ExactQuadratic,
            NormClass::SmoothGeneric => SolveMethod::Bisection,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SublevelInterval {
    pub shape: Shape,
    pub method: SolveMethod,
    /// `|f(endpoint) − ‖x‖|` at the far endpoint; 0 for an empty set.
    pub endpoint_residual: f64,
}

impl SublevelInterval {
    /// Width of the interval, 0 when empty.
    pub fn gamma(&self) -> f64 {
        match self.shape {
            Shape::Empty => 0.0,
            Shape::NegativeSide(g) | Shape::PositiveSide(g) => g,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.shape == Shape::Empty
    }

    pub fn contains(&self, lambda: f64) -> bool {
        match self.shape {
            Shape::Empty => false,
            Shape::NegativeSide(g) => -g < lambda && lambda < 0.0,
            Shape::PositiveSide(g) => 0.0 < lambda && lambda < g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    FiniteDifference { step: f64 },
}

/// Left and right derivatives of the profile at `λ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativePair {
    pub d_minus: f64,
    pub d_plus: f64,
    pub exactness: Exactness,
}

/// The side of 0 on which the strict sublevel set lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Negative,
    Positive,
}

impl Side {
    fn shape(self, gamma: f64) -> Shape {
        match self {
            Side::Negative => Shape::NegativeSide(gamma),
            Side::Positive => Shape::PositiveSide(gamma),
        }
    }

    /// Walking direction away from 0 into the set.
    fn sign(self) -> f64 {
        match self {
            Side::Negative => -1.0,
            Side::Positive => 1.0,
        }
    }
}

impl DerivativePair {
    /// Which side of 0 the sublevel set lies on, with derivatives inside
    /// `±margin` treated as zero.
    pub(crate) fn side(&self, margin: f64) -> Option<Side> {
        if self.d_plus < -margin {
            Some(Side::Positive)
        } else if self.d_minus > margin {
            Some(Side::Negative)
        } else {
            None
        }
    }
}

fn require_nonzero(vectors: &[&Vector]) -> Result<()> {
    if vectors.iter().any(|v| v.is_zero()) {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")))
    }
}

pub fn profile_eval<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, lambda: f64) -> Result<f64> {
    check_dims(norm, &[x, y])?;
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    Ok(norm.eval_affine(x.coords(), y.coords(), lambda))
}

pub fn one_sided_derivatives<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> Result<DerivativePair> {
    check_dims(norm, &[x, y])?;
    require_nonzero(&[x, y])?;
    derivatives(norm, x.coords(), y.coords())
}

pub(crate) fn derivatives<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64]) -> Result<DerivativePair> {
    match norm.spec() {
        Some(spec) if spec.class() == NormClass::Quadratic => {
            let d = spec.inner(x, y).expect("quadratic norm has an inner product") / spec.eval(x);
            Ok(DerivativePair { d_minus: d, d_plus: d, exactness: Exactness::Exact })
        }
        Some(spec) if spec.class() == NormClass::PiecewiseLinear => Ok(polyhedral_derivatives(spec, x, y)),
        _ => finite_difference_derivatives(norm, x, y),
    }
}

fn polyhedral_derivatives(spec: &NormSpec, x: &[f64], y: &[f64]) -> DerivativePair {
    let (d_minus, d_plus) = match spec.exponent() {
        Some(Exponent::Infinity) => {
            // f is the max of the active pieces near 0; slopes are wᵢ·sgn(xᵢ)·yᵢ.
            let terms: Vec<f64> = x.iter().enumerate().map(|(i, xi)| (spec.weight(i) * xi).abs()).collect();
            let top = terms.iter().copied().fold(0.0, f64::max);
            let slopes = terms
                .iter()
                .enumerate()
                .filter(|(_, t)| **t == top)
                .map(|(i, _)| spec.weight(i) * x[i].signum() * y[i]);
            slopes.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
        }
        _ => {
            let mut smooth = 0.0;
            let mut kink = 0.0;
            for (i, (xi, yi)) in x.iter().zip(y).enumerate() {
                let w = spec.weight(i);
                if *xi == 0.0 {
                    kink += w * yi.abs();
                } else {
                    smooth += w * xi.signum() * yi;
                }
            }
            (smooth - kink, smooth + kink)
        }
    };
    DerivativePair { d_minus, d_plus, exactness: Exactness::Exact }
}

// Difference quotients of a convex function are monotone in the step, so the
// forward quotient can only shrink and the backward one only grow as h → 0.
fn finite_difference_derivatives<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64]) -> Result<DerivativePair> {
    let nx = norm.eval(x);
    let ny = norm.eval(y);
    let scale = nx / ny;
    let noise = 1e-7 * ny;
    let mut previous: Option<(f64, f64)> = None;
    let mut step = 0.0;
    let (mut d_minus, mut d_plus) = (0.0, 0.0);
    for rel in FD_STEPS {
        step = rel * scale;
        d_plus = (norm.eval_affine(x, y, step) - nx) / step;
        d_minus = (nx - norm.eval_affine(x, y, -step)) / step;
        if let Some((prev_minus, prev_plus)) = previous {
            if d_plus > prev_plus + noise || d_minus < prev_minus - noise {
                return Err(Error::Domain(
                    "difference quotients are not monotone: the norm is not convex".into(),
                ));
            }
        }
        previous = Some((d_minus, d_plus));
    }
    if d_minus > d_plus {
        // Rounding at the smallest step; a convex profile cannot do this.
        let mid = 0.5 * (d_minus + d_plus);
        d_minus = mid;
        d_plus = mid;
    }
    Ok(DerivativePair { d_minus, d_plus, exactness: Exactness::FiniteDifference { step } })
}

/// Strict sublevel set of the profile, solved by the method matching the
/// norm's class.
pub fn sublevel_interval<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64) -> Result<SublevelInterval> {
    solve(norm, x, y, tol, SolveMethod::for_class(norm.class()))
}

/// Same as [`sublevel_interval`] but always bisects for the far endpoint.
pub fn sublevel_interval_bisection<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y: &Vector,
    tol: f64,
) -> Result<SublevelInterval> {
    solve(norm, x, y, tol, SolveMethod::Bisection)
}

/// Exact solver for ℓ¹/ℓ∞-type norms: walks the breakpoints of the profile
/// and solves the endpoint equation on the linear piece where it crosses.
pub fn sublevel_interval_pl_exact(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<SublevelInterval> {
    if spec.class() != NormClass::PiecewiseLinear {
        return Err(Error::WrongNormClass { expected: NormClass::PiecewiseLinear, found: spec.class() });
    }
    solve(spec, x, y, f64::MIN_POSITIVE, SolveMethod::ExactPL)
}

/// Closed form for norms induced by an inner product: `γ = 2|⟨x,y⟩| / ‖y‖²`.
pub fn sublevel_interval_quadratic_exact(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<SublevelInterval> {
    if spec.class() != NormClass::Quadratic {
        return Err(Error::WrongNormClass { expected: NormClass::Quadratic, found: spec.class() });
    }
    check_dims(spec, &[x, y])?;
    require_nonzero(&[x, y])?;
    let (x, y) = (x.coords(), y.coords());
    let ip = spec.inner(x, y).expect("quadratic norm has an inner product");
    let (nx, ny) = (spec.eval(x), spec.eval(y));
    let side = if ip.abs() <= 1e-12 * nx * ny {
        None
    } else if ip > 0.0 {
        Some(Side::Negative)
    } else {
        Some(Side::Positive)
    };
    Ok(match side {
        None => empty(SolveMethod::ExactQuadratic),
        Some(side) => {
            let gamma = quadratic_gamma(spec, x, y);
            finish(spec, x, y, side, gamma, SolveMethod::ExactQuadratic)
        }
    })
}

fn empty(method: SolveMethod) -> SublevelInterval {
    SublevelInterval { shape: Shape::Empty, method, endpoint_residual: 0.0 }
}

fn finish<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64], side: Side, gamma: f64, method: SolveMethod) -> SublevelInterval {
    let residual = (norm.eval_affine(x, y, side.sign() * gamma) - norm.eval(x)).abs();
    SublevelInterval { shape: side.shape(gamma), method, endpoint_residual: residual }
}

fn solve<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, tol: f64, method: SolveMethod) -> Result<SublevelInterval> {
    check_tol(tol)?;
    check_dims(norm, &[x, y])?;
    require_nonzero(&[x, y])?;
    let (xs, ys) = (x.coords(), y.coords());
    let pair = derivatives(norm, xs, ys)?;
    let margin = DERIV_MARGIN * norm.eval(ys);
    match pair.side(margin) {
        None => Ok(empty(method)),
        Some(side) => endpoint(norm, xs, ys, side, tol, method),
    }
}

/// Far endpoint of the sublevel set on a known side.
pub(crate) fn endpoint<N: Norm + ?Sized>(
    norm: &N,
    x: &[f64],
    y: &[f64],
    side: Side,
    tol: f64,
    method: SolveMethod,
) -> Result<SublevelInterval> {
    let gamma = match (method, norm.spec()) {
        (SolveMethod::ExactQuadratic, Some(spec)) if spec.class() == NormClass::Quadratic => quadratic_gamma(spec, x, y),
        (SolveMethod::ExactPL, Some(spec)) if spec.class() == NormClass::PiecewiseLinear => polyhedral_gamma(spec, x, y, side),
        _ => bisect_gamma(norm, x, y, side, tol)?,
    };
    Ok(finish(norm, x, y, side, gamma, method))
}

fn quadratic_gamma(spec: &NormSpec, x: &[f64], y: &[f64]) -> f64 {
    let ip = spec.inner(x, y).expect("quadratic norm has an inner product");
    let yy = spec.inner(y, y).expect("quadratic norm has an inner product");
    2.0 * ip.abs() / yy
}

fn polyhedral_gamma(spec: &NormSpec, x: &[f64], y: &[f64], side: Side) -> f64 {
    let dir: Vec<f64> = y.iter().map(|v| side.sign() * v).collect();
    let nx = spec.eval(x);
    let g = |t: f64| spec.eval_affine(x, &dir, t);
    let bound = 2.0 * nx / spec.eval(y);

    let mut breaks = polyhedral_breakpoints(spec, x, &dir);
    breaks.retain(|t| *t > 0.0 && *t < bound);
    breaks.extend([bound, 2.0 * bound, 4.0 * bound]);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut prev = 0.0;
    for &b in &breaks {
        if g(b) >= nx {
            // g is affine on [prev, b]; read off its coefficients at the midpoint.
            let (intercept, slope) = affine_piece(spec, x, &dir, 0.5 * (prev + b));
            if slope > 0.0 {
                return ((nx - intercept) / slope).clamp(prev, b);
            }
            return b;
        }
        prev = b;
    }
    prev
}

/// All `t > 0` where `t ↦ ‖x + t·dir‖` may change slope.
fn polyhedral_breakpoints(spec: &NormSpec, x: &[f64], dir: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out: Vec<f64> = (0..n).filter(|&i| dir[i] != 0.0).map(|i| -x[i] / dir[i]).collect();
    if spec.exponent() == Some(Exponent::Infinity) {
        for i in 0..n {
            for j in (i + 1)..n {
                let (wi, wj) = (spec.weight(i), spec.weight(j));
                for s in [1.0, -1.0] {
                    // wᵢ(xᵢ + t dᵢ) = s·wⱼ(xⱼ + t dⱼ)
                    let denom = wi * dir[i] - s * wj * dir[j];
                    if denom != 0.0 {
                        out.push((s * wj * x[j] - wi * x[i]) / denom);
                    }
                }
            }
        }
    }
    out.retain(|t| t.is_finite());
    out
}

/// `(A, B)` with `‖x + t·dir‖ = A + B·t` on the linear piece containing `at`.
fn affine_piece(spec: &NormSpec, x: &[f64], dir: &[f64], at: f64) -> (f64, f64) {
    let signed = |i: usize| spec.weight(i) * (x[i] + at * dir[i]);
    if spec.exponent() == Some(Exponent::Infinity) {
        let (i, _) = (0..x.len())
            .map(|i| (i, signed(i).abs()))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        let s = signed(i).signum() * spec.weight(i);
        (s * x[i], s * dir[i])
    } else {
        (0..x.len()).fold((0.0, 0.0), |(a, b), i| {
            let s = signed(i).signum() * spec.weight(i);
            (a + s * x[i], b + s * dir[i])
        })
    }
}

fn bisect_gamma<N: Norm + ?Sized>(norm: &N, x: &[f64], y: &[f64], side: Side, tol: f64) -> Result<f64> {
    let nx = norm.eval(x);
    let sign = side.sign();
    let inside = |t: f64| norm.eval_affine(x, y, sign * t) < nx;

    let mut hi = 2.0 * nx / norm.eval(y);
    let mut grow = 0;
    while inside(hi) {
        grow += 1;
        if grow > 8 {
            return Err(Error::NonConvergence("sublevel set escapes the 2‖x‖/‖y‖ bound".into()));
        }
        hi *= 2.0;
    }

    let mut lo = hi;
    let mut found = false;
    for _ in 0..MAX_INTERIOR_HALVINGS {
        lo *= 0.5;
        if inside(lo) {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::NonConvergence(
            "no interior point of the sublevel set found near 0".into(),
        ));
    }

    for _ in 0..MAX_BISECTION_ITERS {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(lo + 0.5 * (hi - lo));
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!(
        "bisection did not reach tolerance {tol} in {MAX_BISECTION_ITERS} iterations"
    )))
}
