//! Reference values computed by the dense grid oracle rather than assumed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use birkhoff::oracle::{grid_scan, verify_local_global, verify_sublevel_structure, REFERENCE_POINTS};
use birkhoff::{
    compare_same_target, gamma_star, isosceles_angle, norm_eval, one_sided_derivatives, pythagorean_angle,
    sublevel_interval, sweep_k, AngleClass, Execution, Gram, NormSpec, Shape, Vector, Verdict, DEFAULT_TIE_TOL,
    DEFAULT_TOL as TOL,
};

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

/// The sublevel set measured on the dense grid: (negative side?, γ, grid step).
fn scanned(spec: &NormSpec, x: &Vector, y: &Vector) -> (Option<bool>, f64, f64) {
    let scan = grid_scan(spec, x, y, REFERENCE_POINTS).unwrap();
    match (scan.measured_inf(), scan.measured_sup()) {
        (None, _) | (_, None) => (None, 0.0, scan.grid_step),
        (Some(lo), Some(hi)) if hi < 0.0 => (Some(true), -lo, scan.grid_step),
        (Some(lo), Some(hi)) => {
            assert!(lo > 0.0, "sublevel set straddles zero");
            (Some(false), hi, scan.grid_step)
        }
    }
}

#[test]
fn l3_norm_of_ones() {
    let l3 = NormSpec::lp(3.0).unwrap();
    let direct = (1f64 + 1.0).powf(1.0 / 3.0);
    assert!((norm_eval(&l3, &v(&[1.0, 1.0])).unwrap() - direct).abs() < 1e-15);
    assert!((direct - 2f64.cbrt()).abs() < 1e-15);
}

#[test]
fn diagonal_gram_inner_product() {
    let g = Gram::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(birkhoff::inner_product_eval(&g, &v(&[1.0, 0.0]), &v(&[1.0, 0.0])).unwrap(), 2.0);
}

#[test]
fn linf_profile_is_flat_at_zero_toward_orthogonal_direction() {
    let d = one_sided_derivatives(&NormSpec::linf(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
    assert_eq!((d.d_minus, d.d_plus), (0.0, 0.0));
}

#[test]
fn l3_interval_matches_the_grid() {
    let l3 = NormSpec::lp(3.0).unwrap();
    let (x, y) = (v(&[1.0, 0.0]), v(&[1.0, 1.0]));
    let (negative, measured, step) = scanned(&l3, &x, &y);
    assert_eq!(negative, Some(true));
    let solved = sublevel_interval(&l3, &x, &y, TOL).unwrap();
    assert!(matches!(solved.shape, Shape::NegativeSide(_)));
    assert!((solved.gamma() - measured).abs() <= 2.0 * step, "{} vs {measured}", solved.gamma());
}

#[test]
fn euclidean_sign_flip_lands_on_the_positive_side() {
    let ip = NormSpec::inner_product(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let (x, y) = (v(&[1.0, 0.0]), v(&[-0.5, 0.75f64.sqrt()]));
    let solved = sublevel_interval(&ip, &x, &y, TOL).unwrap();
    let Shape::PositiveSide(g) = solved.shape else { panic!("{solved:?}") };
    assert!((g - 1.0).abs() < 1e-12);
    let (negative, measured, step) = scanned(&ip, &x, &y);
    assert_eq!(negative, Some(false));
    assert!((measured - 1.0).abs() <= 2.0 * step);
}

#[test]
fn gamma_star_of_the_doubled_target() {
    let linf = NormSpec::linf();
    let x = v(&[1.0, 0.0]);
    let doubled = gamma_star(&linf, &x, &v(&[2.0, 2.0]), TOL).unwrap();
    assert_eq!(doubled, 1.0);
    assert_eq!(doubled, gamma_star(&linf, &x, &v(&[1.0, 1.0]), TOL).unwrap());
}

#[test]
fn euclidean_compare_target_matches_the_grid() {
    let l2 = NormSpec::l2();
    let (x1, x2, y) = (v(&[1.0, 0.1]), v(&[1.0, 1.0]), v(&[1.0, 0.0]));
    let c = compare_same_target(&l2, &x1, &x2, &y, DEFAULT_TIE_TOL, TOL).unwrap();
    assert_eq!(c.verdict, Verdict::MoreAcute);
    for (x, got) in [(&x1, c.gamma_hat_first), (&x2, c.gamma_hat_second)] {
        let xh = x.scaled(1.0 / norm_eval(&l2, x).unwrap());
        let (negative, measured, step) = scanned(&l2, &xh, &y);
        assert_eq!(negative, Some(true));
        assert!((got - measured).abs() <= 2.0 * step, "{got} vs {measured}");
    }
}

#[test]
fn l1_pythagorean_angle_of_the_axes_is_straight() {
    let l1 = NormSpec::l1();
    let a = pythagorean_angle(&l1, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
    assert!((a - PI).abs() < 1e-12);
}

#[test]
fn linf_isosceles_angle_of_the_axes_is_right() {
    let a = isosceles_angle(&NormSpec::linf(), &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
    assert!((a - FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn linf_sweep_at_the_diagonal() {
    let linf = NormSpec::linf();
    let x = v(&[1.0, 0.0]);
    let row = sweep_k(&linf, &x, &[FRAC_PI_4], TOL, Execution::Sequential).unwrap()[0];
    assert_eq!(row.class, AngleClass::ProperAcute);
    // ŷ is the ℓ∞-normalized diagonal, (1, 1).
    let yh = v(&[FRAC_PI_4.cos(), FRAC_PI_4.sin()]);
    let yh = yh.scaled(1.0 / norm_eval(&linf, &yh).unwrap());
    let (negative, measured, step) = scanned(&linf, &x, &yh);
    assert_eq!(negative, Some(true));
    assert!((row.k - measured / 2.0).abs() <= step, "k={} vs {}", row.k, measured / 2.0);
    assert!((row.k - 0.5).abs() < 1e-12);
}

#[test]
fn linf_window_agrees_with_global_set() {
    let linf = NormSpec::linf();
    assert!(verify_local_global(&linf, &v(&[1.0, 0.0]), &v(&[1.0, 1.0]), 0.01, 100_000).unwrap());
}

#[test]
fn structure_holds_on_the_worked_pairs() {
    let pairs = [
        (NormSpec::linf(), v(&[1.0, 0.0]), v(&[1.0, 0.3])),
        (NormSpec::l1(), v(&[1.0, 0.0]), v(&[-0.2, 1.0])),
        (NormSpec::lp(3.0).unwrap(), v(&[1.0, 0.0]), v(&[1.0, 1.0])),
        (NormSpec::l2(), v(&[1.0, 0.0]), v(&[0.0, 1.0])),
    ];
    for (spec, x, y) in pairs {
        let r = verify_sublevel_structure(&spec, &x, &y, REFERENCE_POINTS, Execution::default()).unwrap();
        assert!(r.all_hold(), "{spec}: {r:?}");
    }
}
