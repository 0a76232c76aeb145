//! Seeded property suite: every structural fact about sublevel sets and
//! B-angles, checked on random cases across the built-in norms.

use serde::{Deserialize, Serialize};

use super::cases::{builtin_norms, random_case, BumpyGauge, RandomCase};
use super::{oracle_gamma, verify_local_global, verify_sublevel_structure, ScanShape, SUITE_POINTS};
use crate::error::Result;
use crate::exec::Execution;
use crate::geometry::{classify, gamma, gamma_star, report, AngleClass};
use crate::norm::{Norm, NormClass, Vector};
use crate::profile::{
    one_sided_derivatives, sublevel_interval, sublevel_interval_bisection, Shape, SolveMethod,
};

/// Solver tolerance inside the suite, relative to the bracket half-width.
const REL_TOL: f64 = 1e-13;
const REFINE_LEVELS: usize = 2;
const NEGATIVE_CONTROL: &str = "bumpy-gauge";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub num_points: usize,
    /// Also run the oracle checks against a non-convex gauge, which must fail.
    pub inject_bad_norm: bool,
    #[serde(skip, default)]
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 500,
            seed: 42,
            num_points: SUITE_POINTS,
            inject_bad_norm: false,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: String,
    pub norm: String,
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl PropertyTally {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub tallies: Vec<PropertyTally>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(PropertyTally::all_passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyTally> {
        self.tallies.iter().filter(|t| !t.all_passed())
    }

    pub fn tally(&self, property: &str, norm: &str) -> Option<&PropertyTally> {
        self.tallies.iter().find(|t| t.property == property && t.norm == norm)
    }
}

/// Outcome of one property on one (norm, case) pair.
struct Outcome {
    norm: &'static str,
    property: &'static str,
    passed: bool,
    detail: String,
}

struct Recorder {
    norm: &'static str,
    out: Vec<Outcome>,
}

impl Recorder {
    fn check(&mut self, property: &'static str, passed: bool, detail: impl FnOnce() -> String) {
        let detail = if passed { String::new() } else { detail() };
        self.out.push(Outcome { norm: self.norm, property, passed, detail });
    }

    fn check_result(&mut self, property: &'static str, result: Result<(bool, String)>) {
        match result {
            Ok((passed, detail)) => self.check(property, passed, || detail),
            Err(e) => self.check(property, false, || format!("error: {e}")),
        }
    }
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let per_case = config.exec.map_range(config.trials, |i| {
        let case = random_case(config.seed, i as u64);
        let mut outcomes = Vec::new();
        for (label, spec) in builtin_norms(case.dim()) {
            let mut rec = Recorder { norm: label, out: Vec::new() };
            check_case(&mut rec, &spec, &case, config.num_points);
            outcomes.extend(rec.out);
        }
        if config.inject_bad_norm {
            let mut rec = Recorder { norm: NEGATIVE_CONTROL, out: Vec::new() };
            check_negative_control(&mut rec, &case, config.num_points);
            outcomes.extend(rec.out);
        }
        (i, outcomes)
    });

    let mut tallies: Vec<PropertyTally> = Vec::new();
    for (trial, outcomes) in per_case {
        for o in outcomes {
            let idx = match tallies.iter().position(|t| t.property == o.property && t.norm == o.norm) {
                Some(idx) => idx,
                None => {
                    tallies.push(PropertyTally {
                        property: o.property.to_string(),
                        norm: o.norm.to_string(),
                        passed: 0,
                        total: 0,
                        first_failure: None,
                    });
                    tallies.len() - 1
                }
            };
            let t = &mut tallies[idx];
            t.total += 1;
            if o.passed {
                t.passed += 1;
            } else if t.first_failure.is_none() {
                t.first_failure = Some(format!("trial {trial}: {}", o.detail));
            }
        }
    }
    tallies.sort_by_key(|t| (norm_rank(&t.norm), property_rank(&t.property)));
    SuiteReport { seed: config.seed, trials: config.trials, tallies }
}

const PROPERTY_ORDER: [&str; 15] = [
    "zero-excluded",
    "one-sided",
    "contiguous",
    "bounded",
    "touches-zero",
    "endpoints-on-level",
    "solver-contract",
    "exact-vs-bisection",
    "oracle-agreement",
    "local-global",
    "class-scaling",
    "cosine-bound",
    "cosine-sign-rule",
    "gamma-scaling",
    "gamma-star-invariance",
];

fn property_rank(p: &str) -> usize {
    PROPERTY_ORDER.iter().position(|q| *q == p).unwrap_or(usize::MAX)
}

fn norm_rank(n: &str) -> usize {
    builtin_norms(2)
        .iter()
        .position(|(label, _)| *label == n)
        .unwrap_or(usize::MAX)
}

fn solver_tol<N: Norm + ?Sized>(norm: &N, x: &Vector, y: &Vector) -> f64 {
    REL_TOL * 2.0 * norm.eval(x.coords()) / norm.eval(y.coords())
}

fn shape_side(shape: Shape) -> ScanShape {
    match shape {
        Shape::Empty => ScanShape::Empty,
        Shape::NegativeSide(_) => ScanShape::Negative,
        Shape::PositiveSide(_) => ScanShape::Positive,
    }
}

fn check_case<N: Norm + ?Sized>(rec: &mut Recorder, norm: &N, case: &RandomCase, points: usize) {
    let (x, y) = (&case.x, &case.y);
    let nx = norm.eval(x.coords());
    let ny = norm.eval(y.coords());
    let half = 2.0 * nx / ny;
    let tol = solver_tol(norm, x, y);
    let seq = Execution::Sequential;

    match verify_sublevel_structure(norm, x, y, points, seq) {
        Ok(r) => {
            for (name, ok) in r.clauses() {
                rec.check(name, ok, || format!("{r:?}"));
            }
        }
        Err(e) => {
            for name in PROPERTY_ORDER.iter().take(6) {
                rec.check(name, false, || format!("error: {e}"));
            }
        }
    }

    let solved = sublevel_interval(norm, x, y, tol);
    rec.check_result(
        "solver-contract",
        solved.clone().and_then(|s| {
            let pair = one_sided_derivatives(norm, x, y)?;
            let residual_ok = match s.method {
                SolveMethod::Bisection => s.endpoint_residual <= 10.0 * tol,
                _ => s.endpoint_residual <= 1e-12 * nx.max(f64::MIN_POSITIVE),
            };
            let ok = pair.d_minus <= pair.d_plus + 1e-9 && s.gamma() <= half + tol && residual_ok;
            Ok((ok, format!("{s:?} {pair:?} bound={half}")))
        }),
    );

    if norm.class() != NormClass::SmoothGeneric {
        rec.check_result(
            "exact-vs-bisection",
            solved.clone().and_then(|exact| {
                let numeric = sublevel_interval_bisection(norm, x, y, tol)?;
                let ok = shape_side(exact.shape) == shape_side(numeric.shape)
                    && (exact.gamma() - numeric.gamma()).abs() <= 10.0 * tol;
                Ok((ok, format!("exact={exact:?} bisection={numeric:?}")))
            }),
        );
    }

    let estimate = oracle_gamma(norm, x, y, points, REFINE_LEVELS, seq);
    // Sets narrower than the oracle's finest grid are invisible to it.
    let agrees = |s: Shape, e: &super::OracleEstimate| match e.shape {
        ScanShape::Empty => s == Shape::Empty || s_gamma(s) <= e.resolution + tol,
        side => {
            side == shape_side(s)
                && (s_gamma(s) - e.gamma).abs() <= e.resolution + tol + 1e-12 * half
        }
    };
    rec.check_result(
        "oracle-agreement",
        solved.clone().and_then(|s| {
            let e = estimate.clone()?;
            Ok((agrees(s.shape, &e), format!("solver={s:?} oracle={e:?}")))
        }),
    );

    rec.check_result(
        "local-global",
        (|| {
            let window_ok = verify_local_global(norm, x, y, case.window * half, points)?;
            let s = solved.clone()?;
            let e = estimate.clone()?;
            // Side from derivatives at 0 must match the side seen globally.
            let shape_ok = agrees(s.shape, &e);
            Ok((window_ok && shape_ok, format!("window_ok={window_ok} solver={s:?} oracle={e:?}")))
        })(),
    );

    let (ax, by) = (x.scaled(case.a), y.scaled(case.b));
    let same_sign = case.a * case.b > 0.0;
    rec.check_result(
        "class-scaling",
        (|| {
            let base = classify(norm, x, y)?;
            let scaled = classify(norm, &ax, &by)?;
            Ok((scaled == base.under_scaling(same_sign), format!("{base:?} -> {scaled:?}")))
        })(),
    );

    let base_report = report(norm, x, y, tol);
    rec.check_result(
        "cosine-bound",
        base_report.clone().map(|r| (r.k.abs() <= 1.0 + 1e-12, format!("{r:?}"))),
    );
    rec.check_result(
        "cosine-sign-rule",
        base_report.clone().and_then(|r| {
            let scaled = report(norm, &ax, &by, solver_tol(norm, &ax, &by))?;
            let sign = if same_sign { 1.0 } else { -1.0 };
            Ok(((scaled.k - sign * r.k).abs() <= 1e-9, format!("k={} scaled k={}", r.k, scaled.k)))
        }),
    );

    // The scaling lemmas are about proper acute pairs; an obtuse pair is
    // turned acute by flipping y.
    let acute_y = match base_report.as_ref().map(|r| r.class) {
        Ok(AngleClass::ProperAcute) => Some(y.clone()),
        Ok(AngleClass::ProperObtuse) => Some(y.scaled(-1.0)),
        _ => None,
    };
    if let Some(y) = acute_y {
        let (a, b) = (case.a.abs(), case.b.abs());
        let (ax, by) = (x.scaled(a), y.scaled(b));
        let tol_scaled = solver_tol(norm, &ax, &by);
        rec.check_result(
            "gamma-scaling",
            (|| {
                let g0 = gamma(norm, x, &y, tol)?;
                let g1 = gamma(norm, &ax, &by, tol_scaled)?;
                let expected = a / b * g0;
                let allowance = 1e-9 * expected + tol_scaled + a / b * tol;
                Ok(((g1 - expected).abs() <= allowance, format!("γ={g0} scaled γ={g1} expected {expected}")))
            })(),
        );
        rec.check_result(
            "gamma-star-invariance",
            (|| {
                let s0 = gamma_star(norm, x, &y, tol)?;
                let s1 = gamma_star(norm, &ax, &by, tol_scaled)?;
                let allowance = 1e-9 * s0 + 2.0 * REL_TOL * 2.0;
                Ok(((s1 - s0).abs() <= allowance, format!("γ*={s0} scaled γ*={s1}")))
            })(),
        );
    }
}

fn s_gamma(s: Shape) -> f64 {
    match s {
        Shape::Empty => 0.0,
        Shape::NegativeSide(g) | Shape::PositiveSide(g) => g,
    }
}

fn check_negative_control(rec: &mut Recorder, case: &RandomCase, points: usize) {
    let gauge = BumpyGauge::default();
    let planar = |v: &Vector| Vector::new(v.coords()[..2].to_vec()).expect("finite");
    let (mut x, mut y) = (planar(&case.x), planar(&case.y));
    if x.is_zero() || y.is_zero() {
        x = Vector::new(vec![1.0, 0.0]).expect("finite");
        y = Vector::new(vec![0.0, 1.0]).expect("finite");
    }
    match verify_sublevel_structure(&gauge, &x, &y, points, Execution::Sequential) {
        Ok(r) => {
            for (name, ok) in r.clauses() {
                rec.check(name, ok, || format!("{r:?}"));
            }
        }
        Err(e) => rec.check("zero-excluded", false, || format!("error: {e}")),
    }
    let half = 2.0 * gauge.eval(x.coords()) / gauge.eval(y.coords());
    rec.check_result(
        "local-global",
        verify_local_global(&gauge, &x, &y, case.window * half, points).map(|ok| (ok, String::new())),
    );
}
