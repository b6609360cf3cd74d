//! Synthetic nonstationary series for tests and demos.

use crate::rng::{seeded, standard_normal};

pub const SYNTHETIC_LEN: usize = 400;

/// Linear trend plus two tones plus AR(1) noise, strictly positive.
///
/// `y_t = 60 + 0.05·t + 8·sin(2πt/30) + 4·sin(2πt/7.5) + e_t`,
/// `e_t = 0.6·e_{t−1} + w_t`, `w_t ~ N(0, 1.5²)`.
pub fn synthetic_series(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded(seed);
    let tau = 2.0 * std::f64::consts::PI;
    let mut ar = 0.0;
    (0..len)
        .map(|t| {
            ar = 0.6 * ar + 1.5 * standard_normal::<f64, _>(&mut rng);
            let t = t as f64;
            60.0 + 0.05 * t + 8.0 * (tau * t / 30.0).sin() + 4.0 * (tau * t / 7.5).sin() + ar
        })
        .collect()
}

/// Noiseless `y_t = phi·y_{t−1} + c` from `y_0`.
pub fn ar1_series(len: usize, y0: f64, phi: f64, c: f64) -> Vec<f64> {
    std::iter::successors(Some(y0), |&y| Some(phi * y + c)).take(len).collect()
}
