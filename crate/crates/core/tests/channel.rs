#![allow(clippy::excessive_precision)]

use proptest::prelude::*;
use rayleigh_mi::channel::*;
use rayleigh_mi::oracle::{numeric_h_y, numeric_output_pdf};
use rayleigh_mi::quadrature::{adaptive_integrate, QuadratureRule};
use rayleigh_mi::special::EULER_GAMMA;
use rayleigh_mi::Error;

fn rule() -> QuadratureRule {
    QuadratureRule::half_range(15).unwrap()
}

#[test]
fn conditional_density_is_normalised() {
    let mass = adaptive_integrate(
        |y| cond_pdf_y_given_x(y, 3.0).unwrap(),
        0.0,
        f64::INFINITY,
        1e-10,
    )
    .unwrap();
    assert!((mass.value - 1.0).abs() < 1e-10);
    assert!(cond_pdf_y_given_x(-1.0, 0.0).is_err());
}

#[test]
fn rayleigh_input_moments() {
    let p = ChannelParams::new(2.5).unwrap();
    let f = |x: f64| rayleigh_input_pdf(x, &p).unwrap();
    let m0 = adaptive_integrate(f, 0.0, f64::INFINITY, 1e-10).unwrap();
    let m2 = adaptive_integrate(|x| x * x * f(x), 0.0, f64::INFINITY, 1e-9).unwrap();
    assert!((m0.value - 1.0).abs() < 1e-10);
    assert!((m2.value - 2.5).abs() < 1e-9);
    assert!(matches!(
        rayleigh_input_pdf(1.0, &ChannelParams::new(0.0).unwrap()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn output_density_against_oracle() {
    let r = rule();
    for s in [0.1, 1.0] {
        let p = ChannelParams::new(s).unwrap();
        for y in [0.2, 1.0, 2.0] {
            let closed = output_pdf(y, &p, &r).unwrap();
            let oracle = numeric_output_pdf(y, &p, 1e-11).unwrap().value;
            assert!((closed - oracle).abs() < 1e-8, "s = {s}, y = {y}");
            assert!((ln_output_pdf(y, &p, &r).unwrap() - closed.ln()).abs() < 1e-12);
        }
    }
}

#[test]
fn output_density_normalised() {
    let r = rule();
    for s in [0.1, 1.0, 10.0] {
        let p = ChannelParams::new(s).unwrap();
        let mass = adaptive_integrate(
            |y| output_pdf(y, &p, &r).unwrap(),
            0.0,
            f64::INFINITY,
            1e-10,
        )
        .unwrap();
        assert!((mass.value - 1.0).abs() < 1e-9, "s = {s}");
    }
}

#[test]
fn output_entropy_against_oracle() {
    let r = rule();
    let p = ChannelParams::new(1.0).unwrap();
    let oracle = numeric_h_y(&p, 1e-9).unwrap().value;
    assert!((h_y(&p, &r, &r).unwrap() - oracle).abs() < 1e-6);
    let zero = ChannelParams::new(0.0).unwrap();
    assert_eq!(h_y(&zero, &r, &r).unwrap(), rayleigh_entropy_unit());
}

#[test]
fn full_range_rule_rejected_for_entropy() {
    let full = QuadratureRule::full_range(10).unwrap();
    let p = ChannelParams::new(1.0).unwrap();
    assert!(matches!(
        h_y(&p, &full, &rule()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn capacities_and_bound() {
    let one = ChannelParams::new(1.0).unwrap();
    assert!((c_rcsi(&one) - 0.596_347_362_323_194_07).abs() < 1e-14);
    assert!((h_y_given_x(&one) - 0.893_634_333_052_418_16).abs() < 1e-14);
    assert!((lower_bound(&one) - 0.048_399_909_118_375_618).abs() < 1e-14);
    let big = ChannelParams::new(1e6).unwrap();
    assert!((lower_bound(&big) - 0.5 * EULER_GAMMA).abs() < 1e-5);
    assert!((entropy_gap_at_zero() - 0.476_904_291_033_879).abs() < 1e-12);
}

#[test]
fn from_db_round_trip() {
    let p = ChannelParams::from_db(10.0).unwrap();
    assert!((p.omega_sq() - 10.0).abs() < 1e-12);
    assert!((p.snr_db() - 10.0).abs() < 1e-12);
    assert_eq!(ChannelParams::new(0.0).unwrap().snr_db(), f64::NEG_INFINITY);
    assert!(ChannelParams::new(-1.0).is_err());
    assert!(ChannelParams::new(f64::NAN).is_err());
}

proptest! {
    #[test]
    fn bound_below_mutual_information(db in -20.0f64..40.0) {
        let r = rule();
        let p = ChannelParams::from_db(db).unwrap();
        let mi = mutual_information(&p, &r, &r).unwrap().value;
        let lb = lower_bound(&p);
        prop_assert!(lb >= 0.0);
        prop_assert!(lb <= mi + 1e-12, "lb {} mi {}", lb, mi);
        prop_assert!(mi <= c_cnf(&p));
    }

    #[test]
    fn conditional_entropy_identity(s in 0.0f64..1e4) {
        let p = ChannelParams::new(s).unwrap();
        let k = 1.0 - std::f64::consts::LN_2 + 0.5 * EULER_GAMMA;
        prop_assert!((h_y_given_x(&p) - (0.5 * c_rcsi(&p) + k)).abs() < 1e-12);
    }

    #[test]
    fn capacities_nonnegative_ordered(s in 1e-6f64..1e8) {
        let p = ChannelParams::new(s).unwrap();
        prop_assert!(c_rcsi(&p) > 0.0);
        prop_assert!(c_rcsi(&p) <= c_cnf(&p));
    }
}

#[test]
fn quantities_nondecreasing_on_grid() {
    let r = rule();
    let rows: Vec<InfoPoint> = rayleigh_mi::sweep::db_grid(-10.0, 35.0, 0.5)
        .unwrap()
        .into_iter()
        .map(|s| InfoPoint::compute(&ChannelParams::new(s).unwrap(), &r, &r).unwrap())
        .collect();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(b.h_y >= a.h_y, "h_y at {} dB", b.snr_db);
        assert!(b.c_rcsi >= a.c_rcsi);
        assert!(b.c_cnf >= a.c_cnf);
        assert!(b.mutual_info >= a.mutual_info, "mi at {} dB", b.snr_db);
        assert!(b.lower_bound >= a.lower_bound);
    }
    let h = |s: f64| h_y(&ChannelParams::new(s).unwrap(), &r, &r).unwrap();
    assert!(h(10.0) > h(1.0) && h(1.0) > h(0.1));
}
