use std::sync::Mutex;

use hawkcast::hho::{levy_flight, levy_sigma, optimize, soft_besiege_dives, hard_besiege_dives, Bounds, HhoConfig};
use hawkcast::rng::seeded;
use proptest::prelude::*;

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[test]
fn levy_sigma_matches_closed_form() {
    // Γ(2.5) = 3√π/4, Γ(1.25) from its series value.
    let beta: f64 = 1.5;
    let gamma_2_5 = 3.0 * std::f64::consts::PI.sqrt() / 4.0;
    let gamma_1_25 = 0.906_402_477_055_477;
    let num = gamma_2_5 * (std::f64::consts::PI * beta / 2.0).sin();
    let den = gamma_1_25 * beta * 2f64.powf(0.25);
    let oracle = (num / den).powf(1.0 / beta);
    assert!((levy_sigma(beta) - oracle).abs() < 1e-12);
    assert!((oracle - 0.6966).abs() < 1e-4);
}

#[test]
fn levy_flight_is_heavy_tailed() {
    let mut rng = seeded(5);
    let xs: Vec<f64> = levy_flight(100_000, &mut rng);
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    let kurtosis = m4 / (var * var);
    assert!(kurtosis > 3.0, "kurtosis {kurtosis}");
}

#[test]
fn sphere_converges() {
    let cfg = HhoConfig::new(30, 200, Bounds::uniform(5, -10.0, 10.0).unwrap(), 1).unwrap();
    let result = optimize(sphere, &cfg).unwrap();
    assert!(result.best.objectives[0] < 1e-3, "{}", result.best.objectives[0]);
    assert_eq!(result.trace.len(), 200);
    assert!(result.trace.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn single_iteration_returns_best_evaluation() {
    for seed in 0..20 {
        let seen = Mutex::new(Vec::new());
        let f = |x: &[f64]| {
            let v = sphere(x);
            seen.lock().unwrap().push(v);
            v
        };
        let cfg = HhoConfig::new(2, 1, Bounds::uniform(3, -5.0, 5.0).unwrap(), seed).unwrap();
        let result = optimize(f, &cfg).unwrap();
        let seen = seen.into_inner().unwrap();
        let initial = seen[0].min(seen[1]);
        let overall = seen.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(result.best.objectives[0] <= initial);
        assert_eq!(result.best.objectives[0], overall);
        assert_eq!(sphere(&result.best.position), result.best.objectives[0]);
    }
}

#[test]
fn evaluations_stay_in_box() {
    let bounds = Bounds::uniform(4, -2.0, 3.0).unwrap();
    let outside = Mutex::new(0usize);
    let f = |x: &[f64]| {
        if !bounds.contains(x) {
            *outside.lock().unwrap() += 1;
        }
        sphere(x) + 100.0 * x[0].sin()
    };
    let cfg = HhoConfig::new(20, 100, bounds.clone(), 9).unwrap();
    optimize(f, &cfg).unwrap();
    assert_eq!(outside.into_inner().unwrap(), 0);
}

#[test]
fn all_strategies_are_entered() {
    let cfg = HhoConfig::new(30, 200, Bounds::uniform(5, -10.0, 10.0).unwrap(), 3).unwrap();
    let c = optimize(sphere, &cfg).unwrap().counts;
    assert!(c.exploration > 0 && c.soft_besiege > 0 && c.hard_besiege > 0 && c.soft_dive > 0 && c.hard_dive > 0, "{c:?}");
    assert_eq!(c.exploration + c.soft_besiege + c.hard_besiege + c.soft_dive + c.hard_dive, 30 * 200);
}

#[test]
fn same_seed_same_run() {
    let cfg = HhoConfig::new(15, 50, Bounds::uniform(3, -1.0, 1.0).unwrap(), 17).unwrap();
    let a = optimize(sphere, &cfg).unwrap();
    let b = optimize(sphere, &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best, b.best);
}

#[test]
fn single_precision_runs() {
    let cfg = HhoConfig::new(20, 100, Bounds::uniform(3, -5.0f32, 5.0).unwrap(), 2).unwrap();
    let r = optimize(|x: &[f32]| x.iter().map(|v| v * v).sum(), &cfg).unwrap();
    assert!(r.best.objectives[0] < 1e-2);
}

proptest! {
    #[test]
    fn dives_never_worsen_on_sphere(
        x in prop::collection::vec(-5.0f64..5.0, 3),
        e in 0.0f64..0.5,
        j in 0.0f64..2.0,
        seed in 0u64..1000,
    ) {
        let bounds = Bounds::uniform(3, -5.0, 5.0).unwrap();
        let rabbit = [0.0; 3];
        let mut rng = seeded(seed);
        let soft = soft_besiege_dives(&x, sphere(&x), &rabbit, e, j, &bounds, &mut rng, sphere);
        prop_assert!(sphere(&soft) <= sphere(&x));
        let mean = [1.0, -1.0, 0.5];
        let hard = hard_besiege_dives(&x, sphere(&x), &rabbit, &mean, e, j, &bounds, &mut rng, sphere);
        prop_assert!(sphere(&hard) <= sphere(&x));
    }
}
