//! Noise-assisted variants: EEMD, CEEMD, CEEMDAN and ICEEMDAN.

use rayon::prelude::*;

use super::emd::{emd_unchecked, has_oscillation, mode_ceiling, sift_unchecked};
use super::{validate_signal, EnsembleConfig, ModeSet};
use crate::rng::{derive_seed, seeded, standard_normal};
use crate::scalar::std_dev;
use crate::{Result, Scalar};

fn white_noise<T: Scalar>(len: usize, seed: u64, index: u64) -> Vec<T> {
    let mut rng = seeded(derive_seed(seed, index));
    (0..len).map(|_| standard_normal::<T, _>(&mut rng)).collect()
}

/// Averages decompositions, padding missing trailing modes with zeros.
fn average<T: Scalar>(sets: Vec<ModeSet<T>>, len: usize) -> ModeSet<T> {
    let count = T::from_usize_lossy(sets.len());
    let depth = sets.iter().map(|s| s.modes.len()).max().unwrap_or(0);
    let mut modes = vec![vec![T::zero(); len]; depth];
    let mut residual = vec![T::zero(); len];
    for set in &sets {
        for (acc, mode) in modes.iter_mut().zip(&set.modes) {
            for (a, &v) in acc.iter_mut().zip(mode) {
                *a += v;
            }
        }
        for (a, &v) in residual.iter_mut().zip(&set.residual) {
            *a += v;
        }
    }
    for v in modes.iter_mut().flatten().chain(residual.iter_mut()) {
        *v /= count;
    }
    ModeSet { modes, residual, source_length: len }
}

fn perturbed<T: Scalar>(signal: &[T], noise: &[T], scale: T) -> Vec<T> {
    signal.iter().zip(noise).map(|(&x, &w)| x + scale * w).collect()
}

/// Ensemble EMD: average of EMDs of `signal + noise_i`.
pub fn eemd<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
    config.validate()?;
    validate_signal(signal)?;
    let scale = T::lit(config.noise_amplitude) * std_dev(signal);
    if scale == T::zero() {
        return Ok(emd_unchecked(signal, config));
    }
    let n = signal.len();
    let sets: Vec<ModeSet<T>> = (0..config.realizations)
        .into_par_iter()
        .map(|i| {
            let noise = white_noise::<T>(n, config.seed, i as u64);
            emd_unchecked(&perturbed(signal, &noise, scale), config)
        })
        .collect();
    Ok(average(sets, n))
}

/// Complementary ensemble EMD: each realization contributes `+noise` and
/// `-noise` decompositions so the added noise cancels in the average.
pub fn ceemd<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
    config.validate()?;
    validate_signal(signal)?;
    let scale = T::lit(config.noise_amplitude) * std_dev(signal);
    if scale == T::zero() {
        return Ok(emd_unchecked(signal, config));
    }
    let n = signal.len();
    let sets: Vec<ModeSet<T>> = (0..config.realizations)
        .into_par_iter()
        .flat_map_iter(|i| {
            let noise = white_noise::<T>(n, config.seed, i as u64);
            [
                emd_unchecked(&perturbed(signal, &noise, scale), config),
                emd_unchecked(&perturbed(signal, &noise, -scale), config),
            ]
        })
        .collect();
    Ok(average(sets, n))
}

/// EMD modes of each unit-variance noise realization.
fn noise_modes<T: Scalar>(n: usize, config: &EnsembleConfig) -> Vec<(Vec<T>, Vec<Vec<T>>)> {
    (0..config.realizations)
        .into_par_iter()
        .map(|i| {
            let noise = white_noise::<T>(n, config.seed, i as u64);
            let modes = emd_unchecked(&noise, &config.without_mode_limit()).modes;
            (noise, modes)
        })
        .collect()
}

fn mean_of<T: Scalar>(parts: Vec<Vec<T>>, n: usize) -> Vec<T> {
    let count = T::from_usize_lossy(parts.len());
    let mut acc = vec![T::zero(); n];
    for p in &parts {
        for (a, &v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    for a in &mut acc {
        *a /= count;
    }
    acc
}

/// Complete ensemble EMD with adaptive noise.
///
/// Stage one averages the first IMF of `x + a·std(x)·w_i`; stage `k` averages
/// the first IMF of `r_{k-1} + a·std(r_{k-1})·E_{k-1}(w_i)` where `E_j` is the
/// j-th EMD mode of the noise. Modes are successive differences, so the
/// decomposition reconstructs the input up to rounding.
pub fn ceemdan<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
    config.validate()?;
    validate_signal(signal)?;
    let n = signal.len();
    if !has_oscillation(signal) {
        return Ok(ModeSet { modes: Vec::new(), residual: signal.to_vec(), source_length: n });
    }
    let amplitude = T::lit(config.noise_amplitude);
    let noises = noise_modes::<T>(n, config);
    let limit = mode_ceiling(config);
    let first_imf = |y: Vec<T>| sift_unchecked(&y, config).unwrap_or_else(|_| vec![T::zero(); n]);

    let mut residual = signal.to_vec();
    let mut modes = Vec::new();
    while modes.len() < limit && has_oscillation(&residual) {
        let stage = modes.len();
        let beta = amplitude * std_dev(&residual);
        let parts: Vec<Vec<T>> = noises
            .par_iter()
            .map(|(noise, noise_modes)| {
                let driver = if stage == 0 { Some(noise) } else { noise_modes.get(stage - 1) };
                match driver {
                    Some(d) => first_imf(perturbed(&residual, d, beta)),
                    None => first_imf(residual.clone()),
                }
            })
            .collect();
        let imf = mean_of(parts, n);
        for (r, m) in residual.iter_mut().zip(&imf) {
            *r -= *m;
        }
        modes.push(imf);
    }
    Ok(ModeSet { modes, residual, source_length: n })
}

/// `M(y) = y - E_1(y)`: what remains after sifting out the first IMF. A
/// signal without enough extrema is its own local mean.
fn sifted_local_mean<T: Scalar>(y: &[T], config: &EnsembleConfig) -> Vec<T> {
    match sift_unchecked(y, config) {
        Ok(imf) => y.iter().zip(&imf).map(|(&a, &b)| a - b).collect(),
        Err(_) => y.to_vec(),
    }
}

/// Improved CEEMDAN built on the local-mean operator `M`.
///
/// `r_k = mean_i M(r_{k-1} + β_{k-1}·E_k(w_i))` and `mode_k = r_{k-1} - r_k`,
/// with `β_0 = a·std(x)/std(E_1(w_i))` and `β_k = a·std(r_k)`.
pub fn iceemdan<T: Scalar>(signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
    config.validate()?;
    validate_signal(signal)?;
    let n = signal.len();
    if !has_oscillation(signal) {
        return Ok(ModeSet { modes: Vec::new(), residual: signal.to_vec(), source_length: n });
    }
    let amplitude = T::lit(config.noise_amplitude);
    let noises = noise_modes::<T>(n, config);
    let limit = mode_ceiling(config);
    let signal_std = std_dev(signal);

    let mut previous = signal.to_vec();
    let mut modes = Vec::new();
    while modes.len() < limit && has_oscillation(&previous) {
        let stage = modes.len();
        let parts: Vec<Vec<T>> = noises
            .par_iter()
            .map(|(_, noise_modes)| {
                let y = match noise_modes.get(stage) {
                    Some(e) => {
                        let beta = if stage == 0 {
                            let s = std_dev(e);
                            if s > T::zero() { amplitude * signal_std / s } else { T::zero() }
                        } else {
                            amplitude * std_dev(&previous)
                        };
                        perturbed(&previous, e, beta)
                    }
                    None => previous.clone(),
                };
                sifted_local_mean(&y, config)
            })
            .collect();
        let current = mean_of(parts, n);
        let mode: Vec<T> = previous.iter().zip(&current).map(|(&a, &b)| a - b).collect();
        modes.push(mode);
        previous = current;
    }
    Ok(ModeSet { modes, residual: previous, source_length: n })
}
