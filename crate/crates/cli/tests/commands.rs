use std::f64::consts::{FRAC_PI_4, PI};
use std::process::{Command, Output};

use birkhoff::oracle::{grid_scan, REFERENCE_POINTS};
use birkhoff::{report, AngleReport, Comparison, NormSpec, SweepRow, Vector, Verdict};

fn birkhoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birkhoff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> T {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = birkhoff(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn classify_linf_pair() {
    let r: AngleReport = json(&["--norm", "linf", "classify", "1,0", "1,1"]);
    assert_eq!(r.class, birkhoff::AngleClass::ProperAcute);
    assert_eq!(r.gamma, 1.0);
}

#[test]
fn classify_euclidean_orthogonal() {
    let r: AngleReport = json(&["--norm", "l2", "classify", "1,0", "0,1"]);
    assert_eq!(r.class, birkhoff::AngleClass::Orthogonal);
    assert_eq!(r.k, 0.0);
}

#[test]
fn classify_l3_matches_dense_grid() {
    let r: AngleReport = json(&["--norm", "lp:3", "classify", "1,0", "1,1"]);
    let spec: NormSpec = "lp:3".parse().unwrap();
    let (x, y) = (Vector::new(vec![1.0, 0.0]).unwrap(), Vector::new(vec![1.0, 1.0]).unwrap());
    let scan = grid_scan(&spec, &x, &y, REFERENCE_POINTS).unwrap();
    let measured = -scan.measured_inf().unwrap();
    assert!((r.gamma - measured).abs() <= 2.0 * scan.grid_step, "{} vs {measured}", r.gamma);
}

#[test]
fn human_line_names_class_and_all_three_quantities() {
    let o = birkhoff(&["--norm", "linf", "classify", "1,0", "1,1"]);
    assert_eq!(stdout(&o), "ProperAcute γ=1 γ*=1 k=0.5\n");
}

#[test]
fn compare_base_linf() {
    let c: Comparison = json(&["--norm", "linf", "compare-base", "1,0", "1,0.3", "1,0.8"]);
    assert_eq!(c.verdict, Verdict::MoreAcute);
}

#[test]
fn compare_identical_targets_is_same() {
    let c: Comparison = json(&["--norm", "lp:3", "compare-base", "1,2", "0.5,1", "0.5,1"]);
    assert_eq!(c.verdict, Verdict::Same);
}

#[test]
fn compare_target_euclidean() {
    let c: Comparison = json(&["--norm", "l2", "compare-target", "1,0.1", "1,1", "1,0"]);
    assert_eq!(c.verdict, Verdict::MoreAcute);
    // γ̂ = 2 cos of the Euclidean angle to (1, 0).
    assert!((c.gamma_hat_first - 2.0 / 1.01f64.sqrt()).abs() < 1e-9);
    assert!((c.gamma_hat_second - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn l1_sweep_is_a_step_function() {
    let o = birkhoff(&["--norm", "l1", "sweep", "1,0", "-3.14159", "3.14159", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["theta", "k", "class", "gamma_hat"]);
    assert_eq!(rows.len(), 1001);
    for row in &rows[1..] {
        let theta: f64 = row[0].parse().unwrap();
        let k: f64 = row[1].parse().unwrap();
        let t = theta.abs();
        let near = [FRAC_PI_4, 3.0 * FRAC_PI_4].iter().any(|b| (t - b).abs() < 1e-6);
        if near {
            continue;
        }
        let expected = if t < FRAC_PI_4 { 1.0 } else if t < 3.0 * FRAC_PI_4 { 0.0 } else { -1.0 };
        assert!((k - expected).abs() <= 1e-9, "θ={theta}: k={k}");
    }
}

#[test]
fn l2_sweep_is_the_cosine() {
    let rows: Vec<SweepRow> = json(&["--norm", "l2", "sweep", "1,0", "-3", "3.1", "257"]);
    assert_eq!(rows.len(), 257);
    for r in rows {
        assert!((r.k - r.theta.cos()).abs() <= 1e-9, "θ={}", r.theta);
    }
}

#[test]
fn two_step_sweep_has_just_the_endpoints() {
    let o = birkhoff(&["sweep", "1,0", "-1", "1", "2"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), -1.0);
    assert_eq!(rows[2][0].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn csv_is_lf_terminated_with_header() {
    let o = birkhoff(&["--format", "csv", "classify", "1,0", "1,1"]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert!(text.starts_with("class,gamma,gamma_star,k,gamma_hat,method,norm_x,norm_y\n"));
}

#[test]
fn json_round_trips_bit_for_bit() {
    let cases = [("lp:3", "0.3,-1.7", "2.2,0.9"), ("ip:[[2,-0.7],[-0.7,2]]", "1,0.1", "-0.4,1"), ("linf", "1,0", "1,0.6")];
    for (norm, x, y) in cases {
        let emitted: AngleReport = json(&["--norm", norm, "classify", x, y]);
        let spec: NormSpec = norm.parse().unwrap();
        let direct = report(&spec, &x.parse().unwrap(), &y.parse().unwrap(), birkhoff::DEFAULT_TOL).unwrap();
        assert_eq!(emitted.class, direct.class);
        assert_eq!(emitted.method, direct.method);
        for (a, b) in [
            (emitted.gamma, direct.gamma),
            (emitted.gamma_star, direct.gamma_star),
            (emitted.k, direct.k),
            (emitted.gamma_hat, direct.gamma_hat),
            (emitted.norm_x, direct.norm_x),
            (emitted.norm_y, direct.norm_y),
        ] {
            assert_eq!(a.to_bits(), b.to_bits(), "{norm}");
        }
    }
}

#[test]
fn csv_floats_round_trip() {
    let o = birkhoff(&["--norm", "l2", "--format", "csv", "sweep", "1,0", "-3", "3", "11"]);
    let direct = birkhoff::sweep_k(
        &NormSpec::l2(),
        &"1,0".parse().unwrap(),
        &(0..11).map(|i| if i == 10 { 3.0 } else { -3.0 + 6.0 * i as f64 / 10.0 }).collect::<Vec<_>>(),
        birkhoff::DEFAULT_TOL,
        birkhoff::Execution::Sequential,
    )
    .unwrap();
    for (row, d) in csv_rows(&stdout(&o))[1..].iter().zip(direct) {
        assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), d.k.to_bits());
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--seed", "7", "--format", "csv", "verify", "--trials", "6"];
    let (a, b) = (birkhoff(&args), birkhoff(&args));
    assert_eq!(a.stdout, b.stdout);
    let seq = birkhoff(&["--seed", "7", "--format", "csv", "verify", "--trials", "6", "--sequential"]);
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn verify_one_trial() {
    let o = birkhoff(&["verify", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trials 1:"));
}

#[test]
fn verify_with_bad_norm_exits_one() {
    let o = birkhoff(&["verify", "--trials", "4", "--inject-bad-norm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("bumpy-gauge")));
    assert!(!stdout(&o).lines().any(|l| l.starts_with("FAIL") && !l.contains("bumpy-gauge")));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| birkhoff(args).status.code();
    assert_eq!(code(&["classify", "1,0", "1,0,0"]), Some(2));
    assert_eq!(code(&["classify", "1,x", "1,0"]), Some(2));
    assert_eq!(code(&["--norm", "lp:0.5", "classify", "1,0", "1,1"]), Some(2));
    assert_eq!(code(&["--norm", "bogus", "classify", "1,0", "1,1"]), Some(2));
    assert_eq!(code(&["--tol", "-1", "classify", "1,0", "1,1"]), Some(2));
    assert_eq!(code(&["--format", "xml", "classify", "1,0", "1,1"]), Some(2));
    assert_eq!(code(&["sweep", "1,0,0", "-1", "1", "3"]), Some(2));
    assert_eq!(code(&["sweep", "1,0", "-1", "1", "1"]), Some(2));
    assert_eq!(code(&["verify", "--trials", "0"]), Some(2));
    assert_eq!(code(&["classify", "0,0", "1,0"]), Some(3));
    assert_eq!(code(&["angles", "1,0", "0,0"]), Some(3));
    assert_eq!(code(&["sweep", "1,0", "-4", "0", "3"]), Some(3));
}

#[test]
fn errors_go_to_stderr() {
    let o = birkhoff(&["classify", "0,0", "1,0"]);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero vector"));
}

#[test]
fn angles_agree_in_euclidean_space() {
    #[derive(serde::Deserialize)]
    struct Angles {
        pythagorean: f64,
        isosceles: f64,
    }
    let a: Angles = json(&["angles", "1,0", "1,1"]);
    assert!((a.pythagorean - PI / 4.0).abs() < 1e-12);
    assert!((a.isosceles - PI / 4.0).abs() < 1e-12);
}

#[test]
fn gamma_and_cosine_subcommands() {
    #[derive(serde::Deserialize)]
    struct G {
        gamma: f64,
        gamma_star: f64,
    }
    #[derive(serde::Deserialize)]
    struct K {
        k: f64,
    }
    let g: G = json(&["--norm", "linf", "gamma", "1,0", "2,2"]);
    assert_eq!((g.gamma, g.gamma_star), (0.5, 1.0));
    let k: K = json(&["--norm", "linf", "cosine", "1,1", "1,0"]);
    assert_eq!(k.k, 0.0);
}
