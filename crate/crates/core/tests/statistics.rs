//! Distributional checks on the generators and seed splitting.

use std::collections::HashSet;

use clique_percolation::{gen_directed_gnp, gen_gnp, Seed};

const SEEDS: u64 = 200;

/// Mean of the per-seed counts, compared with `pairs * p` in units of the
/// standard error of that mean.
fn check_mean(counts: &[usize], pairs: f64, p: f64) {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    let sd = (pairs * p * (1.0 - p)).sqrt();
    let z = (mean - pairs * p) / (sd / n.sqrt());
    assert!(z.abs() < 5.0, "mean {mean} vs {}, z = {z}", pairs * p);
}

#[test]
fn undirected_edge_count() {
    let (n, p) = (1000usize, 0.01);
    let counts: Vec<usize> = (0..SEEDS)
        .map(|s| gen_gnp(n, p, Seed(s)).unwrap().edge_count())
        .collect();
    check_mean(&counts, (n * (n - 1) / 2) as f64, p);
}

#[test]
fn directed_arc_count() {
    let (n, p) = (500usize, 0.02);
    let counts: Vec<usize> = (0..SEEDS)
        .map(|s| gen_directed_gnp(n, p, Seed(s)).unwrap().arc_count())
        .collect();
    check_mean(&counts, (n * (n - 1)) as f64, p);
}

#[test]
fn dense_edge_count() {
    let (n, p) = (100usize, 0.7);
    let counts: Vec<usize> = (0..SEEDS)
        .map(|s| gen_gnp(n, p, Seed(1000 + s)).unwrap().edge_count())
        .collect();
    check_mean(&counts, (n * (n - 1) / 2) as f64, p);
}

#[test]
fn degrees_are_uniform_across_vertices() {
    // each vertex's total degree over many graphs is Binomial((n-1) * seeds, p)
    let (n, p) = (50usize, 0.1);
    let mut totals = vec![0usize; n];
    for s in 0..SEEDS {
        let g = gen_gnp(n, p, Seed(s)).unwrap();
        for (v, t) in totals.iter_mut().enumerate() {
            *t += g.degree(v as u32);
        }
    }
    let trials = ((n - 1) as u64 * SEEDS) as f64;
    let sd = (trials * p * (1.0 - p)).sqrt();
    let chi2: f64 = totals
        .iter()
        .map(|&t| ((t as f64 - trials * p) / sd).powi(2))
        .sum();
    // degrees are pairwise dependent through shared edges, so this is loose
    assert!(chi2 < 2.0 * n as f64, "chi2 = {chi2}");
}

#[test]
fn trial_seeds_are_distinct() {
    let master = Seed(7);
    let mut seen = HashSet::new();
    for point in 0..50 {
        for trial in 0..200 {
            assert!(seen.insert(master.for_trial(point, trial)));
        }
    }
}
