#![allow(dead_code)]

pub mod invariant;
pub mod oracle;

use protoselect::{Instance, LabelId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random points with distinct shuffled ids and at least two
/// classes. Continuous coordinates make exact distance ties vanishingly
/// unlikely (general position).
pub fn random_points(
    rng: &mut ChaCha8Rng,
    size: usize,
    dims: usize,
    classes: u32,
) -> Vec<Instance> {
    let mut ids: Vec<usize> = (0..size * 10).collect();
    ids.shuffle(rng);
    (0..size)
        .map(|i| {
            let values = (0..dims).map(|_| rng.random_range(0.0..10.0)).collect();
            // First two points cover two classes.
            let label = if i < 2 {
                i as u32
            } else {
                rng.random_range(0..classes)
            };
            Instance::new(ids[i], values, LabelId(label))
        })
        .collect()
}

/// Like [`random_points`] but spatially clustered by class, so selectors
/// have real structure to work with.
pub fn clustered_points(
    rng: &mut ChaCha8Rng,
    size: usize,
    dims: usize,
    classes: u32,
) -> Vec<Instance> {
    let centers: Vec<Vec<f64>> = (0..classes)
        .map(|_| (0..dims).map(|_| rng.random_range(0.0..10.0)).collect())
        .collect();
    let mut pts = random_points(rng, size, dims, classes);
    for p in &mut pts {
        let c = &centers[p.label.index()];
        for (v, m) in p.values.iter_mut().zip(c) {
            *v = m + (*v - 5.0) * 0.4;
        }
    }
    pts
}

pub fn d2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// All other points of `pool` sorted by (distance to `x`, id).
pub fn sorted_others<'a>(x: &Instance, pool: &[&'a Instance]) -> Vec<&'a Instance> {
    let mut v: Vec<&Instance> = pool.iter().copied().filter(|p| p.id != x.id).collect();
    v.sort_by(|a, b| {
        d2(&a.values, &x.values)
            .total_cmp(&d2(&b.values, &x.values))
            .then(a.id.cmp(&b.id))
    });
    v
}

/// Majority among labels given nearest first; ties to the nearest tied label.
pub fn majority(labels: &[LabelId]) -> LabelId {
    let count = |l: LabelId| labels.iter().filter(|&&m| m == l).count();
    let best = labels.iter().map(|&l| count(l)).max().expect("non-empty");
    *labels.iter().find(|&&l| count(l) == best).unwrap()
}

pub fn ids(points: &[&Instance]) -> Vec<usize> {
    let mut v: Vec<usize> = points.iter().map(|p| p.id).collect();
    v.sort_unstable();
    v
}

pub fn class_count(points: &[&Instance]) -> usize {
    let mut l: Vec<LabelId> = points.iter().map(|p| p.label).collect();
    l.sort_unstable();
    l.dedup();
    l.len()
}
