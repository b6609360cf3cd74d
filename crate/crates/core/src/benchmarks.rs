//! ZDT test problems, analytic Pareto fronts and inverted generational distance.

use rayon::prelude::*;
use serde::Serialize;

use crate::mohho::non_dominated_filter;
use crate::rng::derive_seed;
use crate::{Error, Result, Scalar};

pub const DEFAULT_DIMENSION: usize = 30;
pub const TRUE_FRONT_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Zdt {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt1Linear,
}

impl Zdt {
    pub const ALL: [Zdt; 4] = [Zdt::Zdt1, Zdt::Zdt2, Zdt::Zdt3, Zdt::Zdt1Linear];

    pub fn name(self) -> &'static str {
        match self {
            Zdt::Zdt1 => "ZDT1",
            Zdt::Zdt2 => "ZDT2",
            Zdt::Zdt3 => "ZDT3",
            Zdt::Zdt1Linear => "ZDT1-linear",
        }
    }

    /// Second objective on the `g = 1` slice.
    fn front_shape<T: Scalar>(self, f1: T, g: T) -> T {
        let ratio = f1 / g;
        let shape = match self {
            Zdt::Zdt1 => T::one() - ratio.sqrt(),
            Zdt::Zdt2 => T::one() - ratio * ratio,
            Zdt::Zdt3 => T::one() - ratio.sqrt() - ratio * (T::lit(10.0 * std::f64::consts::PI) * f1).sin(),
            Zdt::Zdt1Linear => T::one() - ratio,
        };
        g * shape
    }

    /// Both objectives at `x ∈ [0,1]^D`.
    pub fn evaluate<T: Scalar>(self, x: &[T]) -> Result<[T; 2]> {
        if x.len() < 2 {
            return Err(Error::InvalidConfig("ZDT problems need at least two variables".into()));
        }
        if let Some(index) = x.iter().position(|&v| !(v >= T::zero() && v <= T::one())) {
            return Err(Error::OutOfBox { index });
        }
        let f1 = x[0];
        let tail: T = x[1..].iter().copied().sum();
        let g = T::one() + T::lit(9.0) * tail / T::from_usize_lossy(x.len() - 1);
        Ok([f1, self.front_shape(f1, g)])
    }

    /// `count` points on the analytic front from an even grid in `f1`.
    pub fn true_front<T: Scalar>(self, count: usize) -> Vec<Vec<T>> {
        let count = count.max(2);
        let raw: Vec<Vec<T>> = (0..count)
            .map(|i| {
                let f1 = T::from_usize_lossy(i) / T::from_usize_lossy(count - 1);
                vec![f1, self.front_shape(f1, T::one())]
            })
            .collect();
        match self {
            Zdt::Zdt3 => non_dominated_filter(&raw).expect("uniform dimension"),
            _ => raw,
        }
    }
}

pub fn zdt1<T: Scalar>(x: &[T]) -> Result<[T; 2]> {
    Zdt::Zdt1.evaluate(x)
}

pub fn zdt2<T: Scalar>(x: &[T]) -> Result<[T; 2]> {
    Zdt::Zdt2.evaluate(x)
}

pub fn zdt3<T: Scalar>(x: &[T]) -> Result<[T; 2]> {
    Zdt::Zdt3.evaluate(x)
}

pub fn zdt1_linear<T: Scalar>(x: &[T]) -> Result<[T; 2]> {
    Zdt::Zdt1Linear.evaluate(x)
}

/// `(1/n)·√(Σ d_t²)` where `d_t` is the distance from the t-th true point to
/// its nearest achieved point.
pub fn igd<T: Scalar, P: AsRef<[T]>, Q: AsRef<[T]>>(true_front: &[P], achieved: &[Q]) -> Result<T> {
    if true_front.is_empty() || achieved.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum: T = true_front
        .iter()
        .map(|t| {
            let t = t.as_ref();
            achieved
                .iter()
                .map(|a| t.iter().zip(a.as_ref()).map(|(&p, &q)| (p - q) * (p - q)).sum::<T>())
                .fold(T::infinity(), T::min)
        })
        .sum();
    Ok(sum.sqrt() / T::from_usize_lossy(true_front.len()))
}

/// Summary of IGD over repeated runs. `std` is the sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IgdStats {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub best: f64,
    pub worst: f64,
}

impl IgdStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 0 { (sorted[mid - 1] + sorted[mid]) / 2.0 } else { sorted[mid] };
        Ok(Self { mean, std, median, best: sorted[0], worst: sorted[sorted.len() - 1] })
    }
}

/// Per-run IGD values and their summary.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub problem: Zdt,
    pub igd: Vec<f64>,
    pub fronts: Vec<Vec<Vec<f64>>>,
    pub stats: IgdStats,
}

/// Runs `algorithm(problem, seed)` `runs` times with seeds derived from
/// `base_seed` and scores each returned front against a 1000-point true front.
pub fn run_comparison<A>(problem: Zdt, runs: usize, base_seed: u64, algorithm: A) -> Result<Comparison>
where
    A: Fn(Zdt, u64) -> Result<Vec<Vec<f64>>> + Sync,
{
    if runs == 0 {
        return Err(Error::InvalidConfig("runs must be positive".into()));
    }
    let truth: Vec<Vec<f64>> = problem.true_front(TRUE_FRONT_POINTS);
    let fronts: Vec<Vec<Vec<f64>>> = (0..runs)
        .into_par_iter()
        .map(|r| algorithm(problem, derive_seed(base_seed, r as u64)))
        .collect::<Result<_>>()?;
    let igd_values: Vec<f64> = fronts.iter().map(|f| igd(&truth, f)).collect::<Result<_>>()?;
    let stats = IgdStats::from_values(&igd_values)?;
    Ok(Comparison { problem, igd: igd_values, fronts, stats })
}
