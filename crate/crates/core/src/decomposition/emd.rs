use super::spline::envelope;
use super::{validate_signal, EnsembleConfig, ModeSet};
use crate::{Error, Result, Scalar};

/// Hard ceiling on extracted modes when `max_modes` is unset.
const MODE_CEILING: usize = 64;

/// Indices of interior local maxima and minima.
pub(crate) fn extrema<T: Scalar>(x: &[T]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for i in 1..x.len().saturating_sub(1) {
        if x[i] > x[i - 1] && x[i] >= x[i + 1] {
            maxima.push(i);
        } else if x[i] < x[i - 1] && x[i] <= x[i + 1] {
            minima.push(i);
        }
    }
    (maxima, minima)
}

/// Sign changes, skipping exact zeros.
pub(crate) fn zero_crossings<T: Scalar>(x: &[T]) -> usize {
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for &v in x {
        if v == T::zero() {
            continue;
        }
        let pos = v > T::zero();
        if let Some(p) = prev {
            if p != pos {
                count += 1;
            }
        }
        prev = Some(pos);
    }
    count
}

pub(crate) fn has_oscillation<T: Scalar>(x: &[T]) -> bool {
    let (maxima, minima) = extrema(x);
    maxima.len() >= 2 && minima.len() >= 2
}

/// Mean of the upper and lower spline envelopes, or `None` when the signal
/// lacks two maxima and two minima.
pub fn local_mean<T: Scalar>(x: &[T]) -> Option<Vec<T>> {
    let (maxima, minima) = extrema(x);
    if maxima.len() < 2 || minima.len() < 2 {
        return None;
    }
    let upper = envelope(x, &maxima);
    let lower = envelope(x, &minima);
    let half = T::lit(0.5);
    Some(upper.iter().zip(&lower).map(|(&u, &l)| (u + l) * half).collect())
}

/// Extracts one intrinsic mode function by sifting.
///
/// Sifting stops once the Cauchy-type change ratio drops below
/// `config.sift_stop_threshold` and the extrema/zero-crossing counts differ
/// by at most one, or when `config.max_sift_iterations` passes have run.
pub fn sift_imf<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<Vec<T>> {
    validate_signal(signal)?;
    sift_unchecked(signal, config)
}

pub(crate) fn sift_unchecked<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<Vec<T>> {
    let threshold = T::lit(config.sift_stop_threshold);
    let mut h = signal.to_vec();
    for iteration in 0..config.max_sift_iterations {
        let Some(mean) = local_mean(&h) else {
            if iteration == 0 {
                return Err(Error::MonotonicSignal);
            }
            break;
        };
        let energy: T = h.iter().map(|&v| v * v).sum();
        let change: T = mean.iter().map(|&m| m * m).sum();
        for (v, m) in h.iter_mut().zip(&mean) {
            *v -= *m;
        }
        let ratio = if energy > T::zero() { change / energy } else { T::zero() };
        if ratio < threshold && is_imf(&h) {
            break;
        }
    }
    Ok(h)
}

fn is_imf<T: Scalar>(h: &[T]) -> bool {
    let (maxima, minima) = extrema(h);
    let n_ext = maxima.len() + minima.len();
    n_ext.abs_diff(zero_crossings(h)) <= 1
}

/// Plain empirical mode decomposition.
///
/// A signal without two maxima and two minima decomposes into zero modes with
/// the whole signal as residual.
pub fn emd<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
    config.validate()?;
    validate_signal(signal)?;
    Ok(emd_unchecked(signal, config))
}

pub(crate) fn emd_unchecked<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> ModeSet<T> {
    let limit = config.max_modes.unwrap_or(MODE_CEILING);
    let mut residual = signal.to_vec();
    let mut modes = Vec::new();
    while modes.len() < limit {
        match sift_unchecked(&residual, config) {
            Ok(imf) => {
                for (r, m) in residual.iter_mut().zip(&imf) {
                    *r -= *m;
                }
                modes.push(imf);
            }
            Err(_) => break,
        }
    }
    ModeSet { modes, residual, source_length: signal.len() }
}

pub(crate) fn mode_ceiling(config: &EnsembleConfig) -> usize {
    config.max_modes.unwrap_or(MODE_CEILING)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> EnsembleConfig {
        EnsembleConfig::default()
    }

    fn two_tone(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let fast: Vec<f64> = (0..n).map(|i| (2.0 * PI * 5.0 * i as f64 / 100.0).sin()).collect();
        let slow: Vec<f64> = (0..n).map(|i| (2.0 * PI * 0.5 * i as f64 / 100.0).sin()).collect();
        let sum = fast.iter().zip(&slow).map(|(a, b)| a + b).collect();
        (sum, fast, slow)
    }

    fn corr(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    #[test]
    fn sine_is_a_fixed_point() {
        let s: Vec<f64> = (0..256).map(|i| (2.0 * PI * 4.0 * i as f64 / 256.0).sin()).collect();
        let imf = sift_imf(&s, &cfg()).unwrap();
        let num: f64 = imf.iter().zip(&s).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let den: f64 = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(num / den < 1e-6, "relative error {}", num / den);
    }

    #[test]
    fn first_imf_tracks_fast_tone() {
        let (sum, fast, _) = two_tone(1000);
        let imf = sift_imf(&sum, &cfg()).unwrap();
        assert!(corr(&imf, &fast) > 0.95, "corr {}", corr(&imf, &fast));
    }

    #[test]
    fn ramp_is_monotonic() {
        let ramp: Vec<f64> = (0..64).map(|i| i as f64).collect();
        assert_eq!(sift_imf(&ramp, &cfg()), Err(Error::MonotonicSignal));
        let set = emd(&ramp, &cfg()).unwrap();
        assert!(set.modes.is_empty());
        assert_eq!(set.residual, ramp);
    }

    #[test]
    fn short_signal_rejected() {
        assert!(matches!(sift_imf(&[1.0, -1.0, 1.0], &cfg()), Err(Error::TooShort { .. })));
    }

    #[test]
    fn zero_crossings_skip_exact_zeros() {
        assert_eq!(zero_crossings(&[1.0, 0.0, -1.0, 0.0, 0.0, 2.0]), 2);
        assert_eq!(zero_crossings(&[0.0, 0.0]), 0);
    }

    #[test]
    fn extrema_handle_plateaus_once() {
        let (maxima, minima) = extrema(&[0.0, 1.0, 1.0, 0.0, -1.0, -1.0, 0.0]);
        assert_eq!(maxima, vec![1]);
        assert_eq!(minima, vec![4]);
    }
}
