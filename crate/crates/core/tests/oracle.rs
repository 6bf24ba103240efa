use rayleigh_mi::channel::{mutual_information, ChannelParams};
use rayleigh_mi::oracle::{
    mc_mutual_info, numeric_h_y, numeric_h_y_given_x, numeric_h_y_with_cutoff, numeric_output_mass,
    DEFAULT_CUTOFF_FRACTION,
};
use rayleigh_mi::quadrature::QuadratureRule;
use rayleigh_mi::special::EULER_GAMMA;
use rayleigh_mi::Error;

#[test]
fn zero_power_entropy() {
    let p = ChannelParams::new(0.0).unwrap();
    let e = numeric_h_y(&p, 1e-9).unwrap();
    assert!((e.value - (1.0 + 0.5 * EULER_GAMMA - std::f64::consts::LN_2)).abs() < 1e-9);
}

#[test]
fn entropy_matches_closed_form() {
    let rule = QuadratureRule::half_range(15).unwrap();
    let p = ChannelParams::new(1.0).unwrap();
    let e = numeric_h_y(&p, 1e-9).unwrap();
    let closed = rayleigh_mi::channel::h_y(&p, &rule, &rule).unwrap();
    assert!((e.value - closed).abs() < 1e-5);
    let hyx = numeric_h_y_given_x(&p, 1e-10).unwrap();
    assert!((hyx.value - rayleigh_mi::channel::h_y_given_x(&p)).abs() < 1e-9);
}

#[test]
fn output_mass_is_one() {
    for s in [0.1, 1.0, 10.0] {
        let m = numeric_output_mass(&ChannelParams::new(s).unwrap(), 1e-9).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9, "s = {s}");
    }
}

#[test]
fn truncation_robustness() {
    let tol = 1e-9;
    for s in [0.1, 1.0, 100.0] {
        let p = ChannelParams::new(s).unwrap();
        let a = numeric_h_y_with_cutoff(&p, tol, DEFAULT_CUTOFF_FRACTION).unwrap();
        let b = numeric_h_y_with_cutoff(&p, tol, 0.5 * DEFAULT_CUTOFF_FRACTION).unwrap();
        assert!((a.value - b.value).abs() <= 2.0 * tol, "s = {s}");
    }
}

#[test]
fn monte_carlo_consistency() {
    let rule = QuadratureRule::half_range(15).unwrap();
    let p = ChannelParams::new(1.0).unwrap();
    let mi = mutual_information(&p, &rule, &rule).unwrap().value;
    let mc = mc_mutual_info(&p, 1_000_000, 42).unwrap();
    assert!(mc.error_bound < 2e-3);
    assert!((mc.value - mi).abs() < 3.0 * mc.error_bound);
}

#[test]
fn unreachable_tolerance() {
    let p = ChannelParams::new(1.0).unwrap();
    assert!(matches!(numeric_h_y(&p, 1e-15), Err(Error::Convergence(_))));
    assert!(matches!(
        numeric_h_y(&p, -1.0),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn monte_carlo_vanishing_power() {
    let p = ChannelParams::new(1e-6).unwrap();
    let mc = mc_mutual_info(&p, 100_000, 42).unwrap();
    assert!(mc.value.abs() <= 3.0 * mc.error_bound, "{mc:?}");
}

#[test]
fn error_bounds_are_calibrated() {
    // closed forms that are exact serve as truth: h(Y|X) and unit output mass
    let grid = rayleigh_mi::sweep::db_grid(-10.0, 35.0, 0.5).unwrap();
    let mut covered = 0;
    let mut total = 0;
    for &s in &grid {
        let p = ChannelParams::new(s).unwrap();
        let hyx = numeric_h_y_given_x(&p, 1e-9).unwrap();
        let exact = rayleigh_mi::channel::h_y_given_x(&p);
        covered += ((hyx.value - exact).abs() <= hyx.error_bound.max(1e-15)) as usize;
        let mass = numeric_output_mass(&p, 1e-9).unwrap();
        covered += ((mass.value - 1.0).abs() <= mass.error_bound) as usize;
        total += 2;
    }
    assert!(covered as f64 >= 0.99 * total as f64, "{covered} of {total}");
}
