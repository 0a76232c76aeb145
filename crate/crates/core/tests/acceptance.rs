//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use birkhoff::oracle::{builtin_norms, oracle_gamma, random_case, run_suite, SuiteConfig};
use birkhoff::{
    classify, compare_same_base, cosine_k, gamma, gamma_star, sublevel_interval,
    sublevel_interval_bisection, sublevel_interval_pl_exact, sublevel_interval_quadratic_exact,
    sweep_k, AngleClass, Execution, NormSpec, Vector, Verdict,
};

const TOL: f64 = 1e-10;
const BISECTION_TOL: f64 = 1e-10;

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_budget(started: Instant, budget: Duration) -> Result<(), String> {
    let spent = started.elapsed();
    ensure(spent < budget, format!("took {spent:?}, budget {budget:?}"))
}

fn linf_side_vectors() -> Outcome {
    let started = Instant::now();
    let linf = NormSpec::linf();
    let x = v(&[1.0, 0.0]);
    for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let y = v(&[a, 1.0]);
        let class = classify(&linf, &x, &y).map_err(|e| e.to_string())?;
        ensure(class == AngleClass::ProperAcute, format!("a={a}: class {class:?}"))?;
        let exact = sublevel_interval_pl_exact(&linf, &x, &y).map_err(|e| e.to_string())?.gamma();
        ensure(exact == 1.0, format!("a={a}: exact γ={exact}"))?;
        let numeric = sublevel_interval_bisection(&linf, &x, &y, BISECTION_TOL).map_err(|e| e.to_string())?.gamma();
        ensure((numeric - 1.0).abs() <= 1e-8, format!("a={a}: bisection γ={numeric}"))?;
    }
    within_budget(started, Duration::from_secs(1))?;
    Ok(format!("γ = 1 for all five a ({:?})", started.elapsed()))
}

fn linf_tilted_vectors() -> Outcome {
    let linf = NormSpec::linf();
    let x = v(&[1.0, 0.0]);
    let cases = [(0.1, 2.0), (0.25, 2.0), (0.5, 2.0), (0.6, 1.0 / 0.6), (0.8, 1.25), (1.0, 1.0)];
    for (a, expected) in cases {
        let y = v(&[1.0, a]);
        let exact = sublevel_interval_pl_exact(&linf, &x, &y).map_err(|e| e.to_string())?.gamma();
        ensure((exact - expected).abs() <= 1e-10, format!("a={a}: exact γ={exact}, want {expected}"))?;
        let numeric = sublevel_interval_bisection(&linf, &x, &y, BISECTION_TOL).map_err(|e| e.to_string())?.gamma();
        ensure((numeric - expected).abs() <= 1e-8, format!("a={a}: bisection γ={numeric}"))?;
    }
    Ok("γ = min{2, 1/a} on all six a".into())
}

fn euclidean_unit_vectors() -> Outcome {
    let l2 = NormSpec::l2();
    let x = v(&[1.0, 0.0]);
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        let y = v(&[a, (1.0 - a * a).sqrt()]);
        let closed = sublevel_interval_quadratic_exact(&l2, &x, &y).map_err(|e| e.to_string())?.gamma();
        ensure((closed - 2.0 * a).abs() <= 1e-10, format!("a={a}: closed form γ={closed}"))?;
        let numeric = sublevel_interval_bisection(&l2, &x, &y, BISECTION_TOL).map_err(|e| e.to_string())?.gamma();
        ensure((numeric - 2.0 * a).abs() <= 1e-8, format!("a={a}: bisection γ={numeric}"))?;
    }
    Ok("γ = 2a for a = 0.1..0.9".into())
}

fn parallel_targets() -> Outcome {
    let linf = NormSpec::linf();
    let (x, y1, y2) = (v(&[1.0, 0.0]), v(&[1.0, 1.0]), v(&[2.0, 2.0]));
    let err = |e: birkhoff::Error| e.to_string();
    let g1 = gamma(&linf, &x, &y1, TOL).map_err(err)?;
    let g2 = gamma(&linf, &x, &y2, TOL).map_err(err)?;
    ensure(g1 == 1.0 && g2 == 0.5, format!("γ = {g1}, {g2}"))?;
    let c = compare_same_base(&linf, &x, &y1, &y2, birkhoff::DEFAULT_TIE_TOL, TOL).map_err(err)?;
    ensure(c.verdict == Verdict::Same, format!("verdict {:?}", c.verdict))?;
    let s1 = gamma_star(&linf, &x, &y1, TOL).map_err(err)?;
    let s2 = gamma_star(&linf, &x, &y2, TOL).map_err(err)?;
    ensure(s1 == 1.0 && s2 == 1.0, format!("γ* = {s1}, {s2}"))?;
    Ok("γ = 1 and 1/2, verdict Same, γ* = 1 for both".into())
}

fn l1_step_function(theta: f64) -> f64 {
    let t = theta.abs();
    if t < FRAC_PI_4 {
        1.0
    } else if t <= 3.0 * FRAC_PI_4 {
        0.0
    } else {
        -1.0
    }
}

fn l1_sweep() -> Outcome {
    let started = Instant::now();
    let breakpoints = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
    let grid: Vec<f64> = (0..1000).map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / 1000.0).collect();
    for t in &grid {
        ensure(breakpoints.iter().all(|b| (t - b).abs() >= 1e-6), format!("θ={t} too close to a breakpoint"))?;
    }
    let rows = sweep_k(&NormSpec::l1(), &v(&[1.0, 0.0]), &grid, TOL, Execution::default())
        .map_err(|e| e.to_string())?;
    let worst = rows
        .iter()
        .map(|r| (r.k - l1_step_function(r.theta)).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-9, format!("max |k − f(θ)| = {worst}"))?;
    within_budget(started, Duration::from_secs(5))?;
    Ok(format!("1000 samples, max error {worst:e} ({:?})", started.elapsed()))
}

fn asymmetry() -> Outcome {
    let linf = NormSpec::linf();
    let (x, y) = (v(&[1.0, 0.0]), v(&[1.0, 1.0]));
    let kxy = cosine_k(&linf, &x, &y, TOL).map_err(|e| e.to_string())?;
    let kyx = cosine_k(&linf, &y, &x, TOL).map_err(|e| e.to_string())?;
    ensure(kxy > 0.0 && kyx == 0.0, format!("k(x,y)={kxy}, k(y,x)={kyx}"))?;
    Ok(format!("k(x,y) = {kxy} > 0 = k(y,x)"))
}

fn property_suite() -> Outcome {
    let started = Instant::now();
    let report = run_suite(&SuiteConfig { trials: 500, seed: 42, ..SuiteConfig::default() });
    let required_norms = ["l1", "l2", "l3", "linf", "wl2", "ip"];
    let required_properties = [
        "zero-excluded",
        "one-sided",
        "contiguous",
        "bounded",
        "touches-zero",
        "endpoints-on-level",
        "class-scaling",
        "local-global",
        "cosine-bound",
        "cosine-sign-rule",
        "gamma-scaling",
        "gamma-star-invariance",
    ];
    for norm in required_norms {
        for prop in required_properties {
            let t = report.tally(prop, norm).ok_or(format!("{prop} missing for {norm}"))?;
            ensure(t.total > 0, format!("{prop}/{norm} ran no cases"))?;
        }
    }
    if let Some(t) = report.failures().next() {
        return Err(format!(
            "{}/{}: {}/{} passed; {}",
            t.property,
            t.norm,
            t.passed,
            t.total,
            t.first_failure.clone().unwrap_or_default()
        ));
    }
    within_budget(started, Duration::from_secs(60))?;
    let checks: usize = report.tallies.iter().map(|t| t.total).sum();
    Ok(format!("{checks} checks over {} tallies, all pass ({:?})", report.tallies.len(), started.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for i in 0..500u64 {
        let case = random_case(8, i);
        for (label, spec) in builtin_norms(case.dim()) {
            let (x, y) = (&case.x, &case.y);
            let solved = sublevel_interval(&spec, x, y, TOL).map_err(|e| format!("{label}: {e}"))?;
            let est = oracle_gamma(&spec, x, y, 10_000, 2, Execution::default()).map_err(|e| e.to_string())?;
            let diff = (solved.gamma() - est.gamma).abs();
            worst = worst.max(diff);
            ensure(diff <= 1e-4, format!("{label} trial {i}: solver {solved:?}, oracle {est:?}"))?;
            pairs += 1;
        }
    }
    within_budget(started, Duration::from_secs(60))?;
    Ok(format!("{pairs} pairs, max |Δγ| = {worst:e} ({:?})", started.elapsed()))
}

fn euclidean_cosine() -> Outcome {
    let l2 = NormSpec::l2();
    let mut worst: f64 = 0.0;
    for i in 0..1000u64 {
        let case = random_case(9, i);
        let (x, y) = (case.x.coords(), case.y.coords());
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let expected = dot / (x.iter().map(|a| a * a).sum::<f64>().sqrt() * y.iter().map(|b| b * b).sum::<f64>().sqrt());
        let k = cosine_k(&l2, &case.x, &case.y, TOL).map_err(|e| e.to_string())?;
        worst = worst.max((k - expected).abs());
        ensure((k - expected).abs() <= 1e-8, format!("trial {i}: k={k}, cosine={expected}"))?;
    }
    Ok(format!("1000 pairs, max |k − cos| = {worst:e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 linf (1,0)->(a,1): acute, gamma = 1", linf_side_vectors),
        ("AC2 linf (1,0)->(1,a): gamma = min(2, 1/a)", linf_tilted_vectors),
        ("AC3 l2 unit vectors: gamma = 2a", euclidean_unit_vectors),
        ("AC4 linf (1,1) vs (2,2): gamma, gamma*, Same", parallel_targets),
        ("AC5 l1 sweep reproduces the three-valued k(theta)", l1_sweep),
        ("AC6 k(x,y) > 0 = k(y,x) in linf", asymmetry),
        ("AC7 property suite, 500 trials, seed 42", property_suite),
        ("AC8 solver vs brute-force oracle within 1e-4", oracle_equivalence),
        ("AC9 l2: k equals the Euclidean cosine", euclidean_cosine),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
