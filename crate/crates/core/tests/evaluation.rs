use approx::assert_abs_diff_eq;
use hawkcast::evaluation::{
    dm_test, improvement_percentages, pearson_r, u1, variance_ratio, ForecastPair, Loss, MetricTable, Significance,
    EvaluationReport,
};
use hawkcast::rng::{seeded, standard_normal};
use proptest::prelude::*;

const ACTUAL: [f64; 10] = [52.0, 61.5, 48.2, 70.3, 66.1, 58.4, 75.9, 80.2, 69.7, 57.3];
const PREDICTED: [f64; 10] = [50.1, 63.0, 51.7, 67.8, 68.4, 55.9, 73.2, 83.5, 71.1, 59.0];
const BASELINE: [f64; 10] = [55.0, 58.0, 45.0, 74.0, 62.0, 62.0, 71.0, 76.0, 73.0, 54.0];

#[test]
fn frozen_fixture() {
    // Reference values computed separately in double precision.
    let m = MetricTable::from_slices(&ACTUAL, &PREDICTED).unwrap();
    let expected = [
        2.3300000000000005,
        2.4275502054540503,
        3.73183423944248,
        0.9845960494996657,
        0.018697433085975382,
        0.17770950076049977,
        0.9705938895088967,
    ];
    for (got, want) in m.values().iter().zip(expected) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
    }
    let e_pred: Vec<f64> = PREDICTED.iter().zip(&ACTUAL).map(|(p, a)| p - a).collect();
    let e_base: Vec<f64> = BASELINE.iter().zip(&ACTUAL).map(|(p, a)| p - a).collect();
    let sq = dm_test(&e_base, &e_pred, Loss::Squared).unwrap();
    assert_abs_diff_eq!(sq.statistic, 5.565125009168013, epsilon = 1e-9);
    assert_abs_diff_eq!(sq.p_value, 2.6196454402488647e-08, epsilon = 1e-9);
    assert_eq!(sq.significance, Significance::OnePercent);
    let ab = dm_test(&e_base, &e_pred, Loss::Absolute).unwrap();
    assert_abs_diff_eq!(ab.statistic, 6.171529331913691, epsilon = 1e-9);
    let vr = variance_ratio(&ForecastPair::new(&ACTUAL, &PREDICTED).unwrap()).unwrap();
    assert_abs_diff_eq!(vr, 0.9724782764694704, epsilon = 1e-9);
}

fn table(v: [f64; 7]) -> MetricTable {
    MetricTable::from_values(v)
}

#[test]
fn published_improvements_reproduce() {
    // Jinan PM2.5 and PM10 rows: baseline, proposed, published percentages.
    let cases = [
        (
            [15.866, 20.901, 35.913, 0.693, 0.197, 0.862, 0.496],
            [4.869, 6.160, 10.820, 0.979, 0.055, 0.317, 0.963],
            [69.312, 70.528, 69.872, 41.270, 72.081, 63.225, 94.153],
        ),
        (
            [9.947, 11.257, 24.447, 0.920, 0.101, 0.658, 0.865],
            [4.869, 6.160, 10.820, 0.979, 0.055, 0.317, 0.963],
            [51.051, 45.278, 55.741, 6.413, 45.545, 51.824, 11.329],
        ),
        (
            [24.168, 31.721, 25.061, 0.592, 0.143, 0.839, 0.347],
            [6.975, 9.098, 7.509, 0.973, 0.040, 0.306, 0.966],
            [71.140, 71.319, 70.037, 64.358, 72.028, 63.528, 178.386],
        ),
    ];
    for (base, proposed, published) in cases {
        let got = improvement_percentages(&table(base), &table(proposed)).unwrap();
        for (g, p) in got.values().iter().zip(published) {
            assert!((g - p).abs() <= 0.001, "{g} vs {p}");
        }
    }
}

#[test]
fn dm_on_shifted_losses_is_large() {
    let mut rng = seeded(31);
    let d: Vec<f64> = (0..100).map(|_| 1.0 + 0.1 * standard_normal::<f64, _>(&mut rng)).collect();
    // Absolute loss of (d, 0) reproduces d exactly when d > 0.
    assert!(d.iter().all(|&v| v > 0.0));
    let zeros = vec![0.0; 100];
    let res = dm_test(&d, &zeros, Loss::Absolute).unwrap();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let g0 = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    assert_abs_diff_eq!(res.statistic, mean / (g0 / n).sqrt(), epsilon = 1e-9);
    assert!((80.0..=120.0).contains(&res.statistic), "{}", res.statistic);
    assert_eq!(res.significance, Significance::OnePercent);
}

#[test]
fn report_compares_proposed_against_each_baseline() {
    let models = vec![
        ("proposed".to_string(), PREDICTED.to_vec()),
        ("baseline".to_string(), BASELINE.to_vec()),
    ];
    let report = EvaluationReport::build(&ACTUAL, &models, "proposed", Loss::Squared).unwrap();
    assert_eq!(report.models.len(), 2);
    assert_eq!(report.comparisons.len(), 1);
    assert_eq!(report.comparisons[0].baseline, "baseline");
    assert!(report.comparisons[0].dm.unwrap().statistic > 0.0);
    assert!(EvaluationReport::build(&ACTUAL, &models, "missing", Loss::Squared).is_err());
}

fn series() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..30).prop_flat_map(|n| {
        (prop::collection::vec(1.0f64..100.0, n), prop::collection::vec(1.0f64..100.0, n))
    })
}

proptest! {
    #[test]
    fn scale_equivariance((a, p) in series(), k in 0.1f64..50.0) {
        let base = MetricTable::from_slices(&a, &p);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let ka: Vec<f64> = a.iter().map(|v| v * k).collect();
        let kp: Vec<f64> = p.iter().map(|v| v * k).collect();
        let scaled = MetricTable::from_slices(&ka, &kp).unwrap();
        prop_assert!((scaled.mae - k * base.mae).abs() <= 1e-9 * (1.0 + k * base.mae));
        prop_assert!((scaled.rmse - k * base.rmse).abs() <= 1e-9 * (1.0 + k * base.rmse));
        for (s, b) in [(scaled.mape, base.mape), (scaled.ia, base.ia), (scaled.u1, base.u1), (scaled.u2, base.u2), (scaled.r, base.r)] {
            prop_assert!((s - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn bounded_metrics((a, p) in series()) {
        let m = MetricTable::from_slices(&a, &p);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        prop_assert!((0.0..=1.0).contains(&m.ia));
        prop_assert!((0.0..=1.0).contains(&m.u1));
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&m.r));
        let pair = ForecastPair::new(&a, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&u1(&pair).unwrap()));
    }

    #[test]
    fn r_symmetric_and_dm_antisymmetric((a, p) in series()) {
        let r1 = pearson_r(&ForecastPair::new(&a, &p).unwrap());
        let r2 = pearson_r(&ForecastPair::new(&p, &a).unwrap());
        if let (Ok(x), Ok(y)) = (r1, r2) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let ea: Vec<f64> = a.iter().map(|v| v - 50.0).collect();
        let eb: Vec<f64> = p.iter().map(|v| v - 50.0).collect();
        if let (Ok(x), Ok(y)) = (dm_test(&ea, &eb, Loss::Squared), dm_test(&eb, &ea, Loss::Squared)) {
            prop_assert!((x.statistic + y.statistic).abs() < 1e-9 * (1.0 + x.statistic.abs()));
            prop_assert!((x.p_value - y.p_value).abs() < 1e-12);
        }
    }
}
