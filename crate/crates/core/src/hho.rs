//! Single-objective Harris hawks optimization.
//!
//! Each iteration evaluates the flock, promotes the best position to rabbit,
//! then moves every hawk with one of five strategies chosen by the escaping
//! energy `E = 2·E0·(1 − t/T)` and the escape chance `r`:
//!
//! | condition                  | strategy                          |
//! |----------------------------|-----------------------------------|
//! | `|E| ≥ 1`                  | exploration                       |
//! | `r ≥ 0.5`, `|E| ≥ 0.5`     | soft besiege                      |
//! | `r ≥ 0.5`, `|E| < 0.5`     | hard besiege                      |
//! | `r < 0.5`, `|E| ≥ 0.5`     | soft besiege, progressive dives   |
//! | `r < 0.5`, `|E| < 0.5`     | hard besiege, progressive dives   |
//!
//! Move planning is split from evaluation so the multi-objective variant can
//! reuse it with a different acceptance rule, and so objective calls can run
//! in parallel without affecting the random stream.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng::{seeded, standard_normal, uniform};
use crate::{Error, Result, Scalar};

/// Lévy exponent used by the progressive dives.
pub const LEVY_BETA: f64 = 1.5;

/// Box constraints `lower ≤ x ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), found: upper.len() });
        }
        if lower.is_empty() {
            return Err(Error::InvalidConfig("bounds need at least one dimension".into()));
        }
        if let Some(i) = lower.iter().zip(&upper).position(|(l, u)| !(l < u)) {
            return Err(Error::InvalidConfig(format!("lower bound not below upper bound at {i}")));
        }
        Ok(Self { lower, upper })
    }

    /// The same interval in every dimension.
    pub fn uniform(dimension: usize, lower: T, upper: T) -> Result<Self> {
        Self::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn clamp(&self, x: &mut [T]) {
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.max(lo).min(hi);
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dimension()
            && x.iter().zip(&self.lower).zip(&self.upper).all(|((v, lo), hi)| v >= lo && v <= hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + uniform::<T, _>(rng) * (hi - lo))
            .collect()
    }
}

/// A candidate solution and its objective values (empty until evaluated).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hawk<T> {
    pub position: Vec<T>,
    pub objectives: Vec<T>,
}

impl<T: Scalar> Hawk<T> {
    pub fn new(position: Vec<T>, objectives: Vec<T>) -> Self {
        Self { position, objectives }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhoConfig<T> {
    pub population_size: usize,
    pub max_iterations: usize,
    pub bounds: Bounds<T>,
    pub seed: u64,
}

impl<T: Scalar> HhoConfig<T> {
    pub fn new(population_size: usize, max_iterations: usize, bounds: Bounds<T>, seed: u64) -> Result<Self> {
        let cfg = Self { population_size, max_iterations, bounds, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig("population_size must be at least 2".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Random state drawn for one hawk in one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeState<T> {
    /// Initial energy `E0 ∈ (−1, 1)`.
    pub initial_energy: T,
    /// Escaping energy `E`.
    pub energy: T,
    /// Jump strength `J = 2(1 − r5) ∈ (0, 2]`.
    pub jump: T,
    /// Escape chance `r`.
    pub escape_chance: T,
}

impl<T: Scalar> EscapeState<T> {
    pub fn sample<R: Rng + ?Sized>(iteration: usize, max_iterations: usize, rng: &mut R) -> Self {
        let two = T::lit(2.0);
        let initial_energy = two * uniform::<T, _>(rng) - T::one();
        let energy = escape_energy(initial_energy, iteration, max_iterations);
        let escape_chance = uniform(rng);
        let jump = two * (T::one() - uniform::<T, _>(rng));
        Self { initial_energy, energy, jump, escape_chance }
    }
}

/// `E = 2·E0·(1 − iter/T)`.
pub fn escape_energy<T: Scalar>(initial_energy: T, iteration: usize, max_iterations: usize) -> T {
    let ratio = T::from_usize_lossy(iteration) / T::from_usize_lossy(max_iterations);
    T::lit(2.0) * initial_energy * (T::one() - ratio)
}

/// Componentwise mean of the flock.
pub fn mean_position<T: Scalar, P: AsRef<[T]>>(population: &[P]) -> Result<Vec<T>> {
    let first = population.first().ok_or(Error::EmptyPopulation)?.as_ref();
    let mut mean = vec![T::zero(); first.len()];
    for p in population {
        let p = p.as_ref();
        if p.len() != mean.len() {
            return Err(Error::DimensionMismatch { expected: mean.len(), found: p.len() });
        }
        for (m, &v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    let n = T::from_usize_lossy(population.len());
    for m in &mut mean {
        *m /= n;
    }
    Ok(mean)
}

/// Random numbers of the exploration move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationDraws<T> {
    pub q: T,
    pub r1: T,
    pub r2: T,
    pub r3: T,
    pub r4: T,
}

impl<T: Scalar> ExplorationDraws<T> {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self { q: uniform(rng), r1: uniform(rng), r2: uniform(rng), r3: uniform(rng), r4: uniform(rng) }
    }
}

/// Perching move used while `|E| ≥ 1`.
///
/// With `q ≥ 0.5` the hawk perches relative to a random flock member,
/// otherwise relative to the rabbit and the flock mean.
pub fn exploration_step<T: Scalar>(
    position: &[T],
    random_hawk: &[T],
    rabbit: &[T],
    mean: &[T],
    bounds: &Bounds<T>,
    draws: &ExplorationDraws<T>,
) -> Vec<T> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut next: Vec<T> = if draws.q >= half {
        random_hawk
            .iter()
            .zip(position)
            .map(|(&xr, &x)| xr - draws.r1 * (xr - two * draws.r2 * x).abs())
            .collect()
    } else {
        rabbit
            .iter()
            .zip(mean)
            .zip(bounds.lower().iter().zip(bounds.upper()))
            .map(|((&xb, &xm), (&lo, &hi))| (xb - xm) - draws.r3 * (lo + draws.r4 * (hi - lo)))
            .collect()
    };
    bounds.clamp(&mut next);
    next
}

/// `ΔX − E·|J·X_rabbit − X|`.
pub fn soft_besiege<T: Scalar>(position: &[T], rabbit: &[T], energy: T, jump: T, bounds: &Bounds<T>) -> Vec<T> {
    let mut next: Vec<T> = position
        .iter()
        .zip(rabbit)
        .map(|(&x, &xb)| (xb - x) - energy * (jump * xb - x).abs())
        .collect();
    bounds.clamp(&mut next);
    next
}

/// `X_rabbit − E·|ΔX|`.
pub fn hard_besiege<T: Scalar>(position: &[T], rabbit: &[T], energy: T, bounds: &Bounds<T>) -> Vec<T> {
    let mut next: Vec<T> =
        position.iter().zip(rabbit).map(|(&x, &xb)| xb - energy * (xb - x).abs()).collect();
    bounds.clamp(&mut next);
    next
}

/// `σ` of Mantegna's algorithm for exponent `beta`.
pub fn levy_sigma(beta: f64) -> f64 {
    let num = libm::tgamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// One Lévy component from the normal draws `mu` and `v`.
pub fn levy_step<T: Scalar>(mu: T, v: T) -> T {
    let sigma = T::lit(levy_sigma(LEVY_BETA));
    T::lit(0.01) * mu * sigma / v.abs().powf(T::lit(1.0 / LEVY_BETA))
}

/// `D` independent Lévy-flight components.
pub fn levy_flight<T: Scalar, R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Vec<T> {
    (0..dimension)
        .map(|_| {
            let mu = standard_normal::<T, _>(rng);
            let v = standard_normal::<T, _>(rng);
            levy_step(mu, v)
        })
        .collect()
}

/// The dive pair `Y = X_rabbit − E·|J·X_rabbit − anchor|`, `Z = Y + S∘LF(D)`.
///
/// `anchor` is the hawk itself for soft dives and the flock mean for hard dives.
pub fn dive_candidates<T: Scalar, R: Rng + ?Sized>(
    anchor: &[T],
    rabbit: &[T],
    energy: T,
    jump: T,
    bounds: &Bounds<T>,
    rng: &mut R,
) -> (Vec<T>, Vec<T>) {
    let mut y: Vec<T> =
        rabbit.iter().zip(anchor).map(|(&xb, &a)| xb - energy * (jump * xb - a).abs()).collect();
    bounds.clamp(&mut y);
    let dimension = y.len();
    let step: Vec<T> = (0..dimension).map(|_| uniform::<T, _>(rng)).collect();
    let levy: Vec<T> = levy_flight(dimension, rng);
    let mut z: Vec<T> = y.iter().zip(step.iter().zip(&levy)).map(|(&yy, (&s, &lf))| yy + s * lf).collect();
    bounds.clamp(&mut z);
    (y, z)
}

/// Which candidate a dive keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiveChoice {
    Y,
    Z,
    Stay,
}

/// Greedy dive acceptance: `Y` if it improves on the current position, else
/// `Z` if it does, else stay put.
pub fn choose_dive<O>(current: &O, y: &O, z: &O, improves: impl Fn(&O, &O) -> bool) -> DiveChoice {
    if improves(y, current) {
        DiveChoice::Y
    } else if improves(z, current) {
        DiveChoice::Z
    } else {
        DiveChoice::Stay
    }
}

/// Soft besiege with progressive rapid dives (scalar objective).
#[allow(clippy::too_many_arguments)]
pub fn soft_besiege_dives<T: Scalar, R: Rng + ?Sized, F: Fn(&[T]) -> T>(
    position: &[T],
    current_value: T,
    rabbit: &[T],
    energy: T,
    jump: T,
    bounds: &Bounds<T>,
    rng: &mut R,
    objective: F,
) -> Vec<T> {
    let (y, z) = dive_candidates(position, rabbit, energy, jump, bounds, rng);
    pick_scalar(position, current_value, y, z, objective)
}

/// Hard besiege with progressive rapid dives (scalar objective).
#[allow(clippy::too_many_arguments)]
pub fn hard_besiege_dives<T: Scalar, R: Rng + ?Sized, F: Fn(&[T]) -> T>(
    position: &[T],
    current_value: T,
    rabbit: &[T],
    mean: &[T],
    energy: T,
    jump: T,
    bounds: &Bounds<T>,
    rng: &mut R,
    objective: F,
) -> Vec<T> {
    let (y, z) = dive_candidates(mean, rabbit, energy, jump, bounds, rng);
    pick_scalar(position, current_value, y, z, objective)
}

fn pick_scalar<T: Scalar, F: Fn(&[T]) -> T>(position: &[T], current: T, y: Vec<T>, z: Vec<T>, objective: F) -> Vec<T> {
    let (fy, fz) = (objective(&y), objective(&z));
    match choose_dive(&current, &fy, &fz, |a, b| a < b) {
        DiveChoice::Y => y,
        DiveChoice::Z => z,
        DiveChoice::Stay => position.to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    Exploration,
    SoftBesiege,
    HardBesiege,
    SoftDive,
    HardDive,
}

/// How often each strategy ran over an optimization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StrategyCounts {
    pub exploration: usize,
    pub soft_besiege: usize,
    pub hard_besiege: usize,
    pub soft_dive: usize,
    pub hard_dive: usize,
}

impl StrategyCounts {
    pub(crate) fn record(&mut self, s: Strategy) {
        match s {
            Strategy::Exploration => self.exploration += 1,
            Strategy::SoftBesiege => self.soft_besiege += 1,
            Strategy::HardBesiege => self.hard_besiege += 1,
            Strategy::SoftDive => self.soft_dive += 1,
            Strategy::HardDive => self.hard_dive += 1,
        }
    }
}

/// Planned move for one hawk; dives still need their candidates evaluated.
#[derive(Debug, Clone)]
pub(crate) enum Proposal<T> {
    Move(Vec<T>),
    Dive { y: Vec<T>, z: Vec<T> },
}

/// Draws the random state for hawk `index` and plans its move.
#[allow(clippy::too_many_arguments)]
pub(crate) fn plan_move<T: Scalar, R: Rng + ?Sized>(
    index: usize,
    positions: &[Vec<T>],
    rabbit: &[T],
    mean: &[T],
    bounds: &Bounds<T>,
    iteration: usize,
    max_iterations: usize,
    rng: &mut R,
) -> (Strategy, Proposal<T>) {
    let position = &positions[index];
    let state = EscapeState::<T>::sample(iteration, max_iterations, rng);
    let e = state.energy.abs();
    let half = T::lit(0.5);
    if e >= T::one() {
        let partner = rng.random_range(0..positions.len());
        let draws = ExplorationDraws::sample(rng);
        let next = exploration_step(position, &positions[partner], rabbit, mean, bounds, &draws);
        return (Strategy::Exploration, Proposal::Move(next));
    }
    match (state.escape_chance >= half, e >= half) {
        (true, true) => {
            (Strategy::SoftBesiege, Proposal::Move(soft_besiege(position, rabbit, state.energy, state.jump, bounds)))
        }
        (true, false) => (Strategy::HardBesiege, Proposal::Move(hard_besiege(position, rabbit, state.energy, bounds))),
        (false, true) => {
            let (y, z) = dive_candidates(position, rabbit, state.energy, state.jump, bounds, rng);
            (Strategy::SoftDive, Proposal::Dive { y, z })
        }
        (false, false) => {
            let (y, z) = dive_candidates(mean, rabbit, state.energy, state.jump, bounds, rng);
            (Strategy::HardDive, Proposal::Dive { y, z })
        }
    }
}

/// Evaluates all positions in parallel, preserving order.
pub(crate) fn evaluate_all<T: Scalar, O: Send, F: Fn(&[T]) -> O + Sync>(positions: &[&[T]], f: &F) -> Vec<O> {
    positions.par_iter().map(|p| f(p)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HhoResult<T> {
    /// The rabbit: best evaluated position.
    pub best: Hawk<T>,
    /// Best objective value after each iteration.
    pub trace: Vec<T>,
    pub counts: StrategyCounts,
    pub evaluations: usize,
}

/// Minimizes `objective` over the configured box.
pub fn optimize<T, F>(objective: F, config: &HhoConfig<T>) -> Result<HhoResult<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    config.validate()?;
    let bounds = &config.bounds;
    let n = config.population_size;
    let mut rng = seeded(config.seed);
    let mut positions: Vec<Vec<T>> = (0..n).map(|_| bounds.sample(&mut rng)).collect();
    let mut values: Vec<Option<T>> = vec![None; n];
    let mut rabbit: Option<Hawk<T>> = None;
    let mut trace = Vec::with_capacity(config.max_iterations);
    let mut counts = StrategyCounts::default();
    let mut evaluations = 0;

    for iteration in 0..config.max_iterations {
        let pending: Vec<usize> = (0..n).filter(|&i| values[i].is_none()).collect();
        let inputs: Vec<&[T]> = pending.iter().map(|&i| positions[i].as_slice()).collect();
        let fresh = evaluate_all(&inputs, &objective);
        evaluations += fresh.len();
        for (&i, v) in pending.iter().zip(fresh) {
            values[i] = Some(v);
        }
        for (position, value) in positions.iter().zip(&values) {
            let value = value.expect("evaluated above");
            if rabbit.as_ref().is_none_or(|r| value < r.objectives[0]) {
                rabbit = Some(Hawk::new(position.clone(), vec![value]));
            }
        }
        let rabbit_position = rabbit.as_ref().expect("population nonempty").position.clone();
        let mean = mean_position(&positions)?;

        let mut proposals = Vec::with_capacity(n);
        for i in 0..n {
            let (strategy, proposal) =
                plan_move(i, &positions, &rabbit_position, &mean, bounds, iteration, config.max_iterations, &mut rng);
            counts.record(strategy);
            proposals.push(proposal);
        }

        let dive_inputs: Vec<&[T]> = proposals
            .iter()
            .flat_map(|p| match p {
                Proposal::Dive { y, z } => vec![y.as_slice(), z.as_slice()],
                Proposal::Move(_) => vec![],
            })
            .collect();
        let mut dive_values = evaluate_all(&dive_inputs, &objective).into_iter();
        evaluations += dive_inputs.len();

        for (i, proposal) in proposals.into_iter().enumerate() {
            match proposal {
                Proposal::Move(next) => {
                    positions[i] = next;
                    values[i] = None;
                }
                Proposal::Dive { y, z } => {
                    let fy = dive_values.next().expect("one value per candidate");
                    let fz = dive_values.next().expect("one value per candidate");
                    let current = values[i].expect("evaluated this iteration");
                    for (candidate, value) in [(&y, fy), (&z, fz)] {
                        if rabbit.as_ref().is_some_and(|r| value < r.objectives[0]) {
                            rabbit = Some(Hawk::new(candidate.clone(), vec![value]));
                        }
                    }
                    match choose_dive(&current, &fy, &fz, |a, b| a < b) {
                        DiveChoice::Y => (positions[i], values[i]) = (y, Some(fy)),
                        DiveChoice::Z => (positions[i], values[i]) = (z, Some(fz)),
                        DiveChoice::Stay => {}
                    }
                }
            }
        }
        trace.push(rabbit.as_ref().expect("set").objectives[0]);
    }

    Ok(HhoResult { best: rabbit.expect("at least one iteration ran"), trace, counts, evaluations })
}
