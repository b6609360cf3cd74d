use hawkcast::benchmarks::{igd, Zdt};
use hawkcast::hho::{Bounds, Hawk, HhoConfig};
use hawkcast::mohho::{dominates, mohho_optimize, non_dominated_filter, MohhoConfig, ParetoArchive};
use hawkcast::rng::seeded;
use proptest::prelude::*;

/// Pairwise oracle written from the definition.
fn weakly_better_everywhere(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn oracle_dominates(a: &[f64], b: &[f64]) -> bool {
    weakly_better_everywhere(a, b) && a != b
}

fn brute_force_front(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| oracle_dominates(q, p)))
        .cloned()
        .collect()
}

fn is_pure(front: &[Vec<f64>]) -> bool {
    front.iter().all(|a| front.iter().all(|b| !oracle_dominates(a, b)))
}

fn hawk(f: &[f64]) -> Hawk<f64> {
    Hawk::new(vec![], f.to_vec())
}

fn archive_of(points: &[[f64; 2]]) -> ParetoArchive<f64> {
    let mut a = ParetoArchive::new(100, 10, 2.0).unwrap();
    a.update(points.iter().map(|p| hawk(p)), &mut seeded(0));
    assert_eq!(a.len(), points.len());
    a
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..6).prop_map(f64::from), 3)
}

proptest! {
    #[test]
    fn dominance_is_a_strict_partial_order(a in point(), b in point(), c in point()) {
        prop_assert!(!dominates(&a, &a).unwrap());
        prop_assert!(!(dominates(&a, &b).unwrap() && dominates(&b, &a).unwrap()));
        if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
            prop_assert!(dominates(&a, &c).unwrap());
        }
        prop_assert_eq!(dominates(&a, &b).unwrap(), oracle_dominates(&a, &b));
    }

    #[test]
    fn filter_matches_brute_force(points in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..200)) {
        prop_assert_eq!(non_dominated_filter(&points).unwrap(), brute_force_front(&points));
    }

    #[test]
    fn filter_matches_brute_force_with_ties(points in prop::collection::vec(point(), 1..200)) {
        prop_assert_eq!(non_dominated_filter(&points).unwrap(), brute_force_front(&points));
    }

    #[test]
    fn archive_stays_pure_and_bounded(
        batches in prop::collection::vec(prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..30), 1..10),
        capacity in 1usize..12,
        seed in 0u64..100,
    ) {
        let mut rng = seeded(seed);
        let mut archive = ParetoArchive::new(capacity, 5, 2.0).unwrap();
        for batch in batches {
            archive.update(batch.iter().map(|p| hawk(p)), &mut rng);
            let objs = archive.objectives();
            prop_assert!(is_pure(&objs));
            prop_assert!(archive.len() <= capacity);
            prop_assert_eq!(archive.grid_occupancy().values().sum::<usize>(), archive.len());
            let leader = archive.leader_select(&mut rng).unwrap();
            prop_assert!(!objs.iter().any(|o| oracle_dominates(o, &leader.objectives)));
        }
    }
}

#[test]
fn filter_examples() {
    let pts = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![2.0, 2.0]];
    assert_eq!(non_dominated_filter(&pts).unwrap(), vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
    assert_eq!(non_dominated_filter(&[vec![3.0, 4.0]]).unwrap(), vec![vec![3.0, 4.0]]);
}

#[test]
fn eviction_follows_removal_weights() {
    // Two points share a grid cell (weight 2/2 each), one is alone (1/2).
    let points = [[0.0, 1.0], [0.01, 0.99], [1.0, 0.0]];
    let expected = [0.4, 0.4, 0.2];
    let trials = 10_000;
    let mut evicted = [0usize; 3];
    let mut rng = seeded(123);
    for _ in 0..trials {
        let mut a = ParetoArchive::new(2, 10, 2.0).unwrap();
        a.update(points.iter().map(|p| hawk(p)), &mut rng);
        assert_eq!(a.len(), 2);
        let kept = a.objectives();
        let gone = points.iter().position(|p| !kept.contains(&p.to_vec())).unwrap();
        evicted[gone] += 1;
    }
    for (count, p) in evicted.iter().zip(expected) {
        let freq = *count as f64 / trials as f64;
        assert!((freq - p).abs() <= 0.05 * p, "eviction frequency {freq} vs {p}");
    }
    assert!(evicted[0] > evicted[2] && evicted[1] > evicted[2]);
}

#[test]
fn leader_prefers_sparse_cells() {
    let a = archive_of(&[[0.0, 1.0], [0.005, 0.995], [0.01, 0.99], [0.015, 0.985], [1.0, 0.0]]);
    assert_eq!(a.cell_count(0), 4);
    assert_eq!(a.cell_count(4), 1);
    let trials = 10_000;
    let mut rng = seeded(7);
    let mut counts = [0usize; 5];
    for _ in 0..trials {
        let leader = a.leader_select(&mut rng).unwrap();
        counts[a.entries().iter().position(|e| e == leader).unwrap()] += 1;
    }
    // Per-member weights 2/4 in the crowded cell against 2/1 alone.
    let expected = [0.125, 0.125, 0.125, 0.125, 0.5];
    for (c, p) in counts.iter().zip(expected) {
        let freq = *c as f64 / trials as f64;
        assert!((freq - p).abs() <= 0.05 * p, "leader frequency {freq} vs {p}");
    }
}

#[test]
fn leader_uniform_over_equal_cells() {
    let a = archive_of(&[[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [0.75, 0.25], [1.0, 0.0]]);
    assert!((0..5).all(|i| a.cell_count(i) == 1));
    let trials = 10_000;
    let mut rng = seeded(99);
    let mut counts = [0usize; 5];
    for _ in 0..trials {
        let leader = a.leader_select(&mut rng).unwrap();
        counts[a.entries().iter().position(|e| e == leader).unwrap()] += 1;
    }
    let e = trials as f64 / 5.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    // 99th percentile of chi-square with 4 degrees of freedom.
    assert!(chi2 < 13.277, "chi2 {chi2}");
}

#[test]
fn singleton_archive_always_leads() {
    let a = archive_of(&[[0.3, 0.3]]);
    let mut rng = seeded(1);
    for _ in 0..100 {
        assert_eq!(a.leader_select(&mut rng).unwrap().objectives, vec![0.3, 0.3]);
    }
}

fn zdt_config(seed: u64, iterations: usize) -> MohhoConfig<f64> {
    MohhoConfig::new(HhoConfig::new(40, iterations, Bounds::uniform(30, 0.0, 1.0).unwrap(), seed).unwrap())
}

#[test]
fn snapshots_are_pure_and_bounded() {
    let cfg = zdt_config(4, 30);
    let r = mohho_optimize(|x: &[f64]| Zdt::Zdt3.evaluate(x).unwrap().to_vec(), &cfg).unwrap();
    assert_eq!(r.snapshots.len(), 30);
    for snap in &r.snapshots {
        assert!(snap.len() <= 100);
        assert!(is_pure(snap));
    }
}

#[test]
fn zdt1_front_is_close() {
    let cfg = zdt_config(11, 100);
    let r = mohho_optimize(|x: &[f64]| Zdt::Zdt1.evaluate(x).unwrap().to_vec(), &cfg).unwrap();
    let truth: Vec<Vec<f64>> = Zdt::Zdt1.true_front(1000);
    let v: f64 = igd(&truth, &r.archive.objectives()).unwrap();
    assert!(v < 0.01, "igd {v}");
}

#[test]
fn coincident_objectives_collapse() {
    let bounds = Bounds::uniform(5, -1.0, 1.0).unwrap();
    let cfg = MohhoConfig::new(HhoConfig::new(20, 200, bounds, 5).unwrap());
    let f = |x: &[f64]| {
        let s: f64 = x.iter().map(|v| v * v).sum();
        vec![s, s]
    };
    let r = mohho_optimize(f, &cfg).unwrap();
    let objs = r.archive.objectives();
    for a in &objs {
        for b in &objs {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-2));
        }
    }
    assert!(objs[0][0] < 1e-2);
}

#[test]
fn same_seed_same_archive() {
    let f = |x: &[f64]| Zdt::Zdt2.evaluate(x).unwrap().to_vec();
    let a = mohho_optimize(f, &zdt_config(8, 20)).unwrap();
    let b = mohho_optimize(f, &zdt_config(8, 20)).unwrap();
    assert_eq!(a.archive, b.archive);
    assert_eq!(a.snapshots, b.snapshots);
}

#[test]
fn single_objective_rejected() {
    let r = mohho_optimize(|x: &[f64]| vec![x[0]], &zdt_config(0, 5));
    assert!(r.is_err());
}
