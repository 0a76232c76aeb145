//! Brute-force verification of the sublevel solvers.
//!
//! Nothing here looks at derivatives, breakpoints or closed forms: every
//! answer comes from evaluating `‖x + λy‖` on uniform grids over the bracket
//! `[−2‖x‖/‖y‖, 2‖x‖/‖y‖]`, outside of which the strict sublevel set cannot
//! reach. That keeps the oracle independent of the code it certifies.

mod cases;
mod suite;

pub use cases::{builtin_norms, random_case, RandomCase, BumpyGauge};
pub use suite::{run_suite, PropertyTally, SuiteConfig, SuiteReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::norm::{check_dims, Norm, Vector};

/// Grid resolution used for property suites.
pub const SUITE_POINTS: usize = 10_000;
/// Grid resolution used to produce reference values.
pub const REFERENCE_POINTS: usize = 1_000_000;

const MIN_POINTS: usize = 10;

/// Strict sublevel membership sampled on a uniform grid over the bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Grid values of `λ` with `‖x + λy‖ < ‖x‖`, ascending.
    pub lambdas_below: Vec<f64>,
    /// Grid indices of `lambdas_below`.
    pub indices_below: Vec<usize>,
    pub grid_step: f64,
    pub bracket: (f64, f64),
    pub num_points: usize,
}

impl ScanResult {
    /// Grid value at index `j`. The grid is symmetric and hits 0 exactly when
    /// `num_points` is odd.
    pub fn lambda(&self, j: usize) -> f64 {
        symmetric_grid_point(self.bracket.1, self.num_points, j)
    }

    pub fn is_contiguous(&self) -> bool {
        self.indices_below.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn measured_inf(&self) -> Option<f64> {
        self.lambdas_below.first().copied()
    }

    pub fn measured_sup(&self) -> Option<f64> {
        self.lambdas_below.last().copied()
    }
}

fn symmetric_grid_point(half_width: f64, n: usize, j: usize) -> f64 {
    let denom = (n - 1) as f64;
    half_width * ((2 * j) as f64 - denom) / denom
}

fn nonzero_inputs<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, num_points: usize) -> Result<()> {
    check_dims(norm, &[x, y])?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    if num_points < MIN_POINTS {
        return Err(Error::InvalidParameter(format!(
            "oracle grids need at least {MIN_POINTS} points, got {num_points}"
        )));
    }
    Ok(())
}

/// Half-width `2‖x‖/‖y‖` of the bracket that must contain the sublevel set.
pub fn bracket_half_width<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> f64 {
    2.0 * norm.eval(x.coords()) / norm.eval(y.coords())
}

pub fn grid_scan<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector, num_points: usize) -> Result<ScanResult> {
    grid_scan_with(norm, x, y, num_points, Execution::default())
}

pub fn grid_scan_with<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y: &Vector,
    num_points: usize,
    exec: Execution,
) -> Result<ScanResult> {
    nonzero_inputs(norm, x, y, num_points)?;
    let nx = norm.eval(x.coords());
    let half = bracket_half_width(norm, x, y);
    let flags = exec.map_range(num_points, |j| {
        norm.eval_affine(x.coords(), y.coords(), symmetric_grid_point(half, num_points, j)) < nx
    });
    let indices_below: Vec<usize> = flags.iter().enumerate().filter(|(_, b)| **b).map(|(j, _)| j).collect();
    let lambdas_below = indices_below.iter().map(|&j| symmetric_grid_point(half, num_points, j)).collect();
    Ok(ScanResult {
        lambdas_below,
        indices_below,
        grid_step: 2.0 * half / (num_points - 1) as f64,
        bracket: (-half, half),
        num_points,
    })
}

/// Sublevel side seen by a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanShape {
    Empty,
    Negative,
    Positive,
    /// Points below on both sides of 0: the profile is not convex.
    BothSides,
}

/// Width of the sublevel set estimated by nested grid scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub shape: ScanShape,
    /// Midpoint estimate of `γ`; 0 when empty.
    pub gamma: f64,
    /// Bound on `|γ − gamma|` (for an empty scan: the sublevel set, if any,
    /// is narrower than this).
    pub resolution: f64,
}

/// Estimates the sublevel set with `levels` nested grids of `num_points` each.
///
/// The first grid covers the whole bracket. If it finds points below, each
/// further level rescans the grid cell that contains the far endpoint; if it
/// finds none, the next level zooms into the two cells around 0.
pub fn oracle_gamma<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y: &Vector,
    num_points: usize,
    levels: usize,
    exec: Execution,
) -> Result<OracleEstimate> {
    nonzero_inputs(norm, x, y, num_points)?;
    let (xs, ys) = (x.coords(), y.coords());
    let nx = norm.eval(xs);
    let below = |l: f64| norm.eval_affine(xs, ys, l) < nx;
    let levels = levels.max(1);

    let mut half = bracket_half_width(norm, x, y);
    let mut found = None;
    let mut used = 0;
    while used < levels {
        used += 1;
        let flags = exec.map_range(num_points, |j| below(symmetric_grid_point(half, num_points, j)));
        let step = 2.0 * half / (num_points - 1) as f64;
        let hits: Vec<usize> = (0..num_points).filter(|&j| flags[j]).collect();
        if hits.is_empty() {
            if used == levels {
                return Ok(OracleEstimate { shape: ScanShape::Empty, gamma: 0.0, resolution: step });
            }
            half = step;
            continue;
        }
        let neg = hits.iter().any(|&j| symmetric_grid_point(half, num_points, j) < 0.0);
        let pos = hits.iter().any(|&j| symmetric_grid_point(half, num_points, j) > 0.0);
        let (shape, far) = match (neg, pos) {
            (true, true) => {
                return Ok(OracleEstimate { shape: ScanShape::BothSides, gamma: f64::NAN, resolution: step })
            }
            (true, false) => (ScanShape::Negative, hits[0]),
            _ => (ScanShape::Positive, *hits.last().unwrap()),
        };
        let t_in = symmetric_grid_point(half, num_points, far).abs();
        found = Some((shape, t_in, (t_in + step).min(half)));
        break;
    }
    let (shape, mut t_in, mut t_out) = found.expect("loop exits early when nothing is found");
    let sign = if shape == ScanShape::Negative { -1.0 } else { 1.0 };
    for _ in used..levels {
        let width = t_out - t_in;
        let flags = exec.map_range(num_points, |j| {
            below(sign * (t_in + width * j as f64 / (num_points - 1) as f64))
        });
        let last = flags.iter().rposition(|b| *b).unwrap_or(0);
        let cell = |j: usize| t_in + width * j as f64 / (num_points - 1) as f64;
        let (a, b) = (cell(last), cell((last + 1).min(num_points - 1)));
        t_in = a;
        t_out = b;
    }
    Ok(OracleEstimate { shape, gamma: 0.5 * (t_in + t_out), resolution: 0.5 * (t_out - t_in) })
}

/// Per-clause outcome of checking the structure of the strict sublevel set
/// against a grid scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// `0 ∉ S`.
    pub zero_excluded: bool,
    /// Points below lie on one side of 0 only.
    pub one_sided: bool,
    /// Points below form one run of consecutive grid indices.
    pub contiguous: bool,
    /// Nothing below at or beyond `±2‖x‖/‖y‖`.
    pub bounded: bool,
    /// A non-empty scan reaches the grid point next to 0.
    pub touches_zero: bool,
    /// The profile is within one Lipschitz step of `‖x‖` at the measured ends.
    pub endpoints_on_level: bool,
    pub measured_inf: Option<f64>,
    pub measured_sup: Option<f64>,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.zero_excluded
            && self.one_sided
            && self.contiguous
            && self.bounded
            && self.touches_zero
            && self.endpoints_on_level
    }

    pub fn clauses(&self) -> [(&'static str, bool); 6] {
        [
            ("zero-excluded", self.zero_excluded),
            ("one-sided", self.one_sided),
            ("contiguous", self.contiguous),
            ("bounded", self.bounded),
            ("touches-zero", self.touches_zero),
            ("endpoints-on-level", self.endpoints_on_level),
        ]
    }
}

pub fn verify_sublevel_structure<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y: &Vector,
    num_points: usize,
    exec: Execution,
) -> Result<TheoremReport> {
    let scan = grid_scan_with(norm, x, y, num_points, exec)?;
    let (xs, ys) = (x.coords(), y.coords());
    let nx = norm.eval(xs);
    let ny = norm.eval(ys);
    let f = |l: f64| norm.eval_affine(xs, ys, l);
    let half = scan.bracket.1;

    let zero_excluded = !(f(0.0) < nx) && !scan.lambdas_below.contains(&0.0);
    let has_neg = scan.lambdas_below.iter().any(|l| *l < 0.0);
    let has_pos = scan.lambdas_below.iter().any(|l| *l > 0.0);
    let one_sided = !(has_neg && has_pos);
    let contiguous = scan.is_contiguous();
    // The bound can be attained (‖x + λy‖ = ‖x‖ at λ = ±2‖x‖/‖y‖), so allow rounding.
    let floor = nx * (1.0 - 1e-12);
    let bounded = [1.0, 2.0, 4.0].iter().all(|m| f(m * half) >= floor && f(-m * half) >= floor);

    let n = scan.num_points;
    // Grid neighbours of 0 on each side.
    let last_negative = (n - 1) / 2 - usize::from(n % 2 == 1);
    let first_positive = n / 2 + usize::from(n % 2 == 1);
    let touches_zero = match (has_neg, has_pos) {
        (false, false) => true,
        (true, false) => scan.indices_below.last() == Some(&last_negative),
        (false, true) => scan.indices_below.first() == Some(&first_positive),
        (true, true) => {
            scan.indices_below.contains(&last_negative) && scan.indices_below.contains(&first_positive)
        }
    };

    let slack = scan.grid_step * ny * (1.0 + 1e-9) + 1e-12 * nx;
    let endpoints_on_level = match (scan.measured_inf(), scan.measured_sup()) {
        (Some(lo), Some(hi)) => f(lo) >= nx - slack && f(hi) >= nx - slack,
        _ => true,
    };

    Ok(TheoremReport {
        zero_excluded,
        one_sided,
        contiguous,
        bounded,
        touches_zero,
        endpoints_on_level,
        measured_inf: scan.measured_inf(),
        measured_sup: scan.measured_sup(),
    })
}

/// Checks on grids that `‖x + λy‖ ≥ ‖x‖` holding on `[0, δ)` implies it holds
/// for all `λ ≥ 0`, and the mirrored statement on `(−δ, 0]`.
pub fn verify_local_global<N: Norm + ?Sized>(
    norm: &N,
    x: &Vector,
    y: &Vector,
    delta: f64,
    num_points: usize,
) -> Result<bool> {
    nonzero_inputs(norm, x, y, num_points)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("window must be positive, got {delta}")));
    }
    let (xs, ys) = (x.coords(), y.coords());
    let nx = norm.eval(xs);
    let half = bracket_half_width(norm, x, y);
    let window = delta.min(half);
    let holds = |l: f64| norm.eval_affine(xs, ys, l) >= nx;
    let n = num_points;
    Ok([1.0, -1.0].iter().all(|&sign| {
        let holds_window = (0..n).all(|j| holds(sign * window * j as f64 / n as f64));
        let holds_global = holds_window && (0..n).all(|j| holds(sign * half * j as f64 / (n - 1) as f64));
        !holds_window || holds_global
    }))
}
