//! Bounded Pareto archive with hypergrid crowding.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::dominance::dominates_unchecked;
use crate::hho::Hawk;
use crate::rng::roulette;
use crate::{Error, Result, Scalar};

/// Grid cell coordinates, one index per objective.
pub type Cell = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoArchive<T> {
    entries: Vec<Hawk<T>>,
    cells: Vec<Cell>,
    grid_occupancy: BTreeMap<Cell, usize>,
    capacity: usize,
    grid_divisions: usize,
    inflation: f64,
    crowding: f64,
}

/// `N_i / c`: unnormalized weight for evicting a member of a cell holding `N_i`.
pub fn removal_weight(cell_count: usize, c: f64) -> f64 {
    cell_count as f64 / c
}

/// `c / N_i`: unnormalized weight for picking a member of a cell holding `N_i` as leader.
pub fn leader_weight(cell_count: usize, c: f64) -> f64 {
    c / cell_count as f64
}

impl<T: Scalar> ParetoArchive<T> {
    pub fn new(capacity: usize, grid_divisions: usize, crowding: f64) -> Result<Self> {
        Self::with_inflation(capacity, grid_divisions, crowding, 0.1)
    }

    pub fn with_inflation(capacity: usize, grid_divisions: usize, crowding: f64, inflation: f64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("archive capacity must be positive".into()));
        }
        if grid_divisions == 0 {
            return Err(Error::InvalidConfig("grid_divisions must be positive".into()));
        }
        if !(crowding > 1.0) {
            return Err(Error::InvalidConfig("crowding constant must exceed 1".into()));
        }
        if !(inflation >= 0.0) {
            return Err(Error::InvalidConfig("inflation must be nonnegative".into()));
        }
        Ok(Self {
            entries: Vec::new(),
            cells: Vec::new(),
            grid_occupancy: BTreeMap::new(),
            capacity,
            grid_divisions,
            inflation,
            crowding,
        })
    }

    pub fn entries(&self) -> &[Hawk<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn crowding(&self) -> f64 {
        self.crowding
    }

    pub fn grid_occupancy(&self) -> &BTreeMap<Cell, usize> {
        &self.grid_occupancy
    }

    /// Grid cell of entry `i`.
    pub fn cell_of(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    /// Occupancy of the cell holding entry `i`.
    pub fn cell_count(&self, i: usize) -> usize {
        self.grid_occupancy[&self.cells[i]]
    }

    /// Objective vectors of all members.
    pub fn objectives(&self) -> Vec<Vec<T>> {
        self.entries.iter().map(|h| h.objectives.clone()).collect()
    }

    /// Offers `candidates` to the archive.
    ///
    /// A candidate is rejected when a member dominates it or shares its exact
    /// objective vector; otherwise it evicts the members it dominates and joins.
    /// Overflow is then trimmed by roulette on removal weights.
    pub fn update<R: Rng + ?Sized>(&mut self, candidates: impl IntoIterator<Item = Hawk<T>>, rng: &mut R) {
        let mut changed = false;
        for candidate in candidates {
            if candidate.objectives.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let blocked = self.entries.iter().any(|e| {
                e.objectives == candidate.objectives || dominates_unchecked(&e.objectives, &candidate.objectives)
            });
            if blocked {
                continue;
            }
            self.entries.retain(|e| !dominates_unchecked(&candidate.objectives, &e.objectives));
            self.entries.push(candidate);
            changed = true;
        }
        if !changed {
            return;
        }
        self.rebuild_grid();
        while self.entries.len() > self.capacity {
            let weights: Vec<f64> =
                (0..self.entries.len()).map(|i| removal_weight(self.cell_count(i), self.crowding)).collect();
            let victim = roulette(&weights, rng).expect("positive weights");
            let cell = self.cells.swap_remove(victim);
            self.entries.swap_remove(victim);
            let count = self.grid_occupancy.get_mut(&cell).expect("cell recorded");
            *count -= 1;
            if *count == 0 {
                self.grid_occupancy.remove(&cell);
            }
        }
        self.rebuild_grid();
    }

    /// Roulette pick favouring sparse cells.
    pub fn leader_select<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&Hawk<T>> {
        if self.entries.is_empty() {
            return Err(Error::EmptyArchive);
        }
        let weights: Vec<f64> =
            (0..self.entries.len()).map(|i| leader_weight(self.cell_count(i), self.crowding)).collect();
        let i = roulette(&weights, rng).expect("positive weights");
        Ok(&self.entries[i])
    }

    fn rebuild_grid(&mut self) {
        self.cells.clear();
        self.grid_occupancy.clear();
        let Some(first) = self.entries.first() else {
            return;
        };
        let m = first.objectives.len();
        let inflation = T::lit(self.inflation);
        let divisions = T::from_usize_lossy(self.grid_divisions);
        let ranges: Vec<(T, T)> = (0..m)
            .map(|j| {
                let (lo, hi) = self
                    .entries
                    .iter()
                    .map(|e| e.objectives[j])
                    .fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
                let pad = inflation * (hi - lo);
                (lo - pad, (hi + pad - (lo - pad)) / divisions)
            })
            .collect();
        for entry in &self.entries {
            let cell: Cell = entry
                .objectives
                .iter()
                .zip(&ranges)
                .map(|(&v, &(lo, width))| {
                    if width > T::zero() {
                        ((v - lo) / width).floor().to_usize().unwrap_or(0).min(self.grid_divisions - 1)
                    } else {
                        0
                    }
                })
                .collect();
            *self.grid_occupancy.entry(cell.clone()).or_insert(0) += 1;
            self.cells.push(cell);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn hawk(f: &[f64]) -> Hawk<f64> {
        Hawk::new(vec![0.0], f.to_vec())
    }

    #[test]
    fn weights() {
        assert_eq!(removal_weight(4, 2.0), 2.0);
        assert_eq!(removal_weight(1, 2.0), 0.5);
        assert_eq!(leader_weight(1, 2.0) / leader_weight(4, 2.0), 4.0);
    }

    #[test]
    fn dominating_point_clears_archive() {
        let mut rng = seeded(1);
        let mut a = ParetoArchive::new(10, 10, 2.0).unwrap();
        a.update([hawk(&[1.0, 3.0]), hawk(&[2.0, 2.0]), hawk(&[3.0, 1.0])], &mut rng);
        assert_eq!(a.len(), 3);
        a.update([hawk(&[4.0, 4.0])], &mut rng);
        assert_eq!(a.len(), 3);
        a.update([hawk(&[0.5, 0.5])], &mut rng);
        assert_eq!(a.objectives(), vec![vec![0.5, 0.5]]);
    }

    #[test]
    fn duplicates_rejected() {
        let mut rng = seeded(1);
        let mut a = ParetoArchive::new(10, 10, 2.0).unwrap();
        a.update([hawk(&[1.0, 1.0]), hawk(&[1.0, 1.0])], &mut rng);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn occupancy_sums_to_len() {
        let mut rng = seeded(2);
        let mut a = ParetoArchive::new(5, 4, 2.0).unwrap();
        let pts: Vec<Hawk<f64>> = (0..20).map(|i| hawk(&[i as f64, 20.0 - i as f64])).collect();
        a.update(pts, &mut rng);
        assert_eq!(a.len(), 5);
        assert_eq!(a.grid_occupancy().values().sum::<usize>(), 5);
    }

    #[test]
    fn empty_archive_has_no_leader() {
        let a = ParetoArchive::<f64>::new(3, 10, 2.0).unwrap();
        assert_eq!(a.leader_select(&mut seeded(0)).err(), Some(Error::EmptyArchive));
    }

    #[test]
    fn crowding_must_exceed_one() {
        assert!(ParetoArchive::<f64>::new(3, 10, 1.0).is_err());
    }
}
