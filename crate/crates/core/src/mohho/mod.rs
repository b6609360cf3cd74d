//! Multi-objective Harris hawks optimization.
//!
//! The flock moves exactly as in [`crate::hho`], with two changes: every hawk
//! draws its own rabbit from a bounded Pareto archive each iteration (sparse
//! grid cells preferred), and dive candidates replace the hawk only when they
//! dominate its current objective vector.

mod archive;
mod dominance;

pub use archive::{leader_weight, removal_weight, Cell, ParetoArchive};
pub use dominance::{dominates, non_dominated_filter, non_dominated_indices};

use serde::Serialize;

use crate::hho::{
    choose_dive, evaluate_all, mean_position, plan_move, DiveChoice, Hawk, HhoConfig, Proposal, StrategyCounts,
};
use crate::rng::seeded;
use crate::{Error, Result, Scalar};
use dominance::dominates_unchecked;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MohhoConfig<T> {
    pub base: HhoConfig<T>,
    pub archive_capacity: usize,
    pub grid_divisions: usize,
    /// Crowding constant `c > 1`.
    pub crowding: f64,
}

impl<T: Scalar> MohhoConfig<T> {
    /// Archive of 100, 10 grid divisions per objective, `c = 2`.
    pub fn new(base: HhoConfig<T>) -> Self {
        Self { base, archive_capacity: 100, grid_divisions: 10, crowding: 2.0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        ParetoArchive::<T>::new(self.archive_capacity, self.grid_divisions, self.crowding).map(|_| ())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MohhoResult<T> {
    pub archive: ParetoArchive<T>,
    /// Archive objective vectors after each iteration.
    pub snapshots: Vec<Vec<Vec<T>>>,
    pub counts: StrategyCounts,
    pub evaluations: usize,
}

/// Approximates the Pareto front of `objectives` over the configured box.
pub fn mohho_optimize<T, F>(objectives: F, config: &MohhoConfig<T>) -> Result<MohhoResult<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> Vec<T> + Sync,
{
    config.validate()?;
    let base = &config.base;
    let bounds = &base.bounds;
    let n = base.population_size;
    let mut rng = seeded(base.seed);
    let mut archive = ParetoArchive::new(config.archive_capacity, config.grid_divisions, config.crowding)?;

    let mut positions: Vec<Vec<T>> = (0..n).map(|_| bounds.sample(&mut rng)).collect();
    let inputs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
    let mut values: Vec<Vec<T>> = evaluate_all(&inputs, &objectives);
    let m = values[0].len();
    if m < 2 {
        return Err(Error::InvalidConfig("need at least two objectives".into()));
    }
    if let Some(v) = values.iter().find(|v| v.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: v.len() });
    }
    let mut evaluations = n;
    archive.update(positions.iter().zip(&values).map(|(p, v)| Hawk::new(p.clone(), v.clone())), &mut rng);

    let mut snapshots = Vec::with_capacity(base.max_iterations);
    let mut counts = StrategyCounts::default();
    for iteration in 0..base.max_iterations {
        let mean = mean_position(&positions)?;
        let mut proposals = Vec::with_capacity(n);
        for i in 0..n {
            let leader = archive.leader_select(&mut rng)?.position.clone();
            let (strategy, proposal) =
                plan_move(i, &positions, &leader, &mean, bounds, iteration, base.max_iterations, &mut rng);
            counts.record(strategy);
            proposals.push(proposal);
        }

        let inputs: Vec<&[T]> = proposals
            .iter()
            .flat_map(|p| match p {
                Proposal::Move(x) => vec![x.as_slice()],
                Proposal::Dive { y, z } => vec![y.as_slice(), z.as_slice()],
            })
            .collect();
        let fresh = evaluate_all(&inputs, &objectives);
        evaluations += fresh.len();
        if let Some(v) = fresh.iter().find(|v| v.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: v.len() });
        }
        let evaluated: Vec<Hawk<T>> =
            inputs.iter().zip(&fresh).map(|(p, v)| Hawk::new(p.to_vec(), v.clone())).collect();

        let mut fresh = fresh.into_iter();
        for (i, proposal) in proposals.into_iter().enumerate() {
            match proposal {
                Proposal::Move(x) => {
                    positions[i] = x;
                    values[i] = fresh.next().expect("one value per move");
                }
                Proposal::Dive { y, z } => {
                    let fy = fresh.next().expect("one value per candidate");
                    let fz = fresh.next().expect("one value per candidate");
                    match choose_dive(&values[i], &fy, &fz, |a, b| dominates_unchecked(a, b)) {
                        DiveChoice::Y => (positions[i], values[i]) = (y, fy),
                        DiveChoice::Z => (positions[i], values[i]) = (z, fz),
                        DiveChoice::Stay => {}
                    }
                }
            }
        }
        archive.update(evaluated, &mut rng);
        snapshots.push(archive.objectives());
    }

    Ok(MohhoResult { archive, snapshots, counts, evaluations })
}
