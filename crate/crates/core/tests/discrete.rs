use rayleigh_mi::discrete::{discrete_mi, two_point_capacity, DiscreteInput};
use rayleigh_mi::oracle::Xoshiro256StarStar;

/// Plain Monte-Carlo estimate of the mutual information of a discrete input.
fn mc_discrete(d: &DiscreteInput, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let u = rng.next_open01();
        let mut acc = 0.0;
        let mut x = d.points()[0].amplitude;
        for m in d.points() {
            acc += m.probability;
            x = m.amplitude;
            if u <= acc {
                break;
            }
        }
        let a = 1.0 + x * x;
        let y = a.sqrt() * (-rng.next_open01().ln()).sqrt();
        let cond = 2.0 * y / a * (-y * y / a).exp();
        let v = (cond / d.output_pdf(y)).ln();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum_sq / n as f64 - mean * mean) * n as f64 / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[test]
fn discrete_mi_matches_monte_carlo() {
    let d = DiscreteInput::new(vec![(0.0, 0.5), (2f64.sqrt(), 0.5)]).unwrap();
    let mi = discrete_mi(&d, 1e-10).unwrap();
    assert!(mi > 0.0);
    let (mc, se) = mc_discrete(&d, 1_000_000, 42);
    assert!((mi - mc).abs() < 3.0 * se, "{mi} vs {mc} +- {se}");
}

#[test]
fn continuity_at_the_origin() {
    let d = DiscreteInput::new(vec![(0.0, 0.5), (1e-5, 0.5)]).unwrap();
    assert!(discrete_mi(&d, 1e-11).unwrap().abs() < 1e-6);
}

#[test]
fn widely_separated_points() {
    // a light far point must not hide between integration nodes
    let d = DiscreteInput::on_off(1000.0, 1.25e-5).unwrap();
    let mi = discrete_mi(&d, 1e-9).unwrap();
    let binary = -(1.25e-5f64 * 1.25e-5f64.ln() + (1.0 - 1.25e-5) * (1.0 - 1.25e-5f64).ln());
    assert!(mi > 0.0 && mi <= binary, "{mi} vs {binary}");
}

#[test]
fn capacity_increases_with_budget() {
    let mut prev = 0.0;
    for db in [-10.0f64, -5.0, 0.0, 5.0, 10.0, 20.0, 30.0] {
        let c = two_point_capacity(10f64.powf(db / 10.0), 1e-8).unwrap();
        assert!(c.capacity > prev, "{db} dB");
        prev = c.capacity;
    }
}

#[test]
fn capacity_is_self_consistent() {
    let tol = 1e-9;
    for budget in [0.1, 1.0, 100.0] {
        let c = two_point_capacity(budget, tol).unwrap();
        let again = discrete_mi(&c.input, tol).unwrap();
        assert!((again - c.capacity).abs() <= tol);
        assert!(c.input.power() <= budget * (1.0 + 1e-12));
        // the power constraint ends up active
        assert!(
            (c.power_fraction - 1.0).abs() < 1e-6,
            "{}",
            c.power_fraction
        );
    }
}
