//! Independent brute-force reimplementations and the checks that compare
//! them with the library. Each check panics on the first mismatch.

use std::collections::BTreeMap;

use protoselect::partitioning::SNAP_TIE_RTOL;
use protoselect::{
    coverage_reachable, drop3, enn, extract_prototype, icf, knn_classify, local_set, lsbo, lssm,
    partition, psasa, snap_to_instances, Instance, LabelId,
};
use rand::Rng;

use super::*;

pub const PARTITION_FIXTURES: u64 = 200;
pub const SELECTOR_FIXTURES: u64 = 100;
const K: usize = 3;

// ---------------------------------------------------------------- partitioning

struct Fixture {
    points: Vec<Instance>,
    n: usize,
}

fn partition_fixture(seed: u64) -> Fixture {
    let mut r = rng(1000 + seed);
    let size = r.random_range(1..=100);
    let dims = r.random_range(1..=5);
    let n = [1, 2, 3, 5][r.random_range(0..4)];
    let mut points = random_points(&mut r, size.max(2), dims, 3);
    points.truncate(size);
    // Occasionally pin a dimension to a constant.
    if r.random_bool(0.15) {
        let j = r.random_range(0..dims);
        for p in &mut points {
            p.values[j] = 7.0;
        }
    }
    Fixture { points, n }
}

/// Every key of the full grid, in lexicographic order.
fn all_keys(dims: usize, n: usize) -> Vec<Vec<u32>> {
    let mut keys = vec![vec![]];
    for _ in 0..dims {
        keys = keys
            .into_iter()
            .flat_map(|k| {
                (0..n as u32).map(move |x| {
                    let mut k = k.clone();
                    k.push(x);
                    k
                })
            })
            .collect();
    }
    keys
}

/// Groups by testing each point against each cell's hyperrectangle:
/// intervals are `[lo, lo + width)` except the last, which is closed.
fn oracle_partition(points: &[Instance], n: usize) -> BTreeMap<Vec<u32>, Vec<usize>> {
    let dims = points[0].values.len();
    let lo: Vec<f64> = (0..dims)
        .map(|j| {
            points
                .iter()
                .map(|p| p.values[j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hi: Vec<f64> = (0..dims)
        .map(|j| {
            points
                .iter()
                .map(|p| p.values[j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let inside = |v: f64, j: usize, x: u32| -> bool {
        let width = (hi[j] - lo[j]) / n as f64;
        if width == 0.0 {
            return x == 0;
        }
        let a = lo[j] + x as f64 * width;
        let b = a + width;
        v >= a && (v < b || (x as usize == n - 1 && v <= hi[j]))
    };
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for key in all_keys(dims, n) {
        for p in points {
            if (0..dims).all(|j| inside(p.values[j], j, key[j])) {
                groups.entry(key.clone()).or_default().push(p.id);
            }
        }
    }
    for v in groups.values_mut() {
        v.sort_unstable();
    }
    groups
}

pub fn partition_matches_hyperrectangle_membership() {
    for seed in 0..PARTITION_FIXTURES {
        let f = partition_fixture(seed);
        let expected = oracle_partition(&f.points, f.n);
        let got: BTreeMap<Vec<u32>, Vec<usize>> = partition(&f.points, f.n)
            .unwrap()
            .groups
            .into_iter()
            .map(|(k, mut v)| {
                v.sort_unstable();
                (k.0, v)
            })
            .collect();
        assert_eq!(got, expected, "fixture {seed}");
    }
}

pub fn psasa_matches_group_and_average() {
    for seed in 0..PARTITION_FIXTURES {
        let f = partition_fixture(seed);
        let by_id: BTreeMap<usize, &Instance> = f.points.iter().map(|p| (p.id, p)).collect();
        let mut expected: Vec<(Vec<u32>, LabelId, Vec<f64>, usize)> = Vec::new();
        for (key, members) in oracle_partition(&f.points, f.n) {
            let mut by_label: BTreeMap<LabelId, Vec<&Instance>> = BTreeMap::new();
            for id in members {
                by_label
                    .entry(by_id[&id].label)
                    .or_default()
                    .push(by_id[&id]);
            }
            for (label, ms) in by_label {
                let dims = ms[0].values.len();
                let mean = (0..dims)
                    .map(|j| ms.iter().map(|m| m.values[j]).sum::<f64>() / ms.len() as f64)
                    .collect();
                expected.push((key.clone(), label, mean, ms.len()));
            }
        }
        let got = psasa(&f.points, f.n).unwrap();
        assert_eq!(got.len(), expected.len(), "fixture {seed}");
        for (p, (key, label, mean, count)) in got.iter().zip(&expected) {
            assert_eq!(p.source_key.as_ref().unwrap().0, *key, "fixture {seed}");
            assert_eq!(p.label, *label);
            assert_eq!(p.member_count, *count);
            for (a, b) in p.values.iter().zip(mean) {
                assert!(
                    (a - b).abs() <= 1e-9 * b.abs().max(1.0),
                    "fixture {seed}: {a} vs {b}"
                );
            }
        }
    }
}

pub fn extract_prototype_matches_summation() {
    for seed in 0..PARTITION_FIXTURES {
        let mut r = rng(5000 + seed);
        let size = r.random_range(1..=100);
        let dims = r.random_range(1..=5);
        let pts: Vec<Instance> = random_points(&mut r, size.max(2), dims, 1)
            .into_iter()
            .take(size)
            .map(|mut p| {
                p.label = LabelId(0);
                p
            })
            .collect();
        let refs: Vec<&Instance> = pts.iter().collect();
        let proto = extract_prototype(&refs).unwrap();
        for j in 0..dims {
            let mut sum = 0.0;
            for p in &pts {
                sum += p.values[j];
            }
            let mean = sum / size as f64;
            assert!((proto.values[j] - mean).abs() <= 1e-12 * mean.abs().max(1.0));
        }
        assert_eq!(proto.member_count, size);
    }
}

pub fn snap_matches_linear_scan() {
    for seed in 0..PARTITION_FIXTURES {
        let f = partition_fixture(seed);
        let protos = psasa(&f.points, f.n).unwrap();
        let mut expected: Vec<usize> = protos
            .iter()
            .map(|p| {
                let same: Vec<&Instance> = f.points.iter().filter(|i| i.label == p.label).collect();
                let best = same
                    .iter()
                    .map(|i| d2(&i.values, &p.values))
                    .fold(f64::INFINITY, f64::min);
                same.iter()
                    .filter(|i| d2(&i.values, &p.values) <= best * (1.0 + SNAP_TIE_RTOL))
                    .map(|i| i.id)
                    .min()
                    .unwrap()
            })
            .collect();
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(snap_to_instances(&protos, &f.points).unwrap(), expected);
    }
}

// ------------------------------------------------------------------ selectors

fn selector_fixture(seed: u64) -> Vec<Instance> {
    let mut r = rng(9000 + seed);
    let size = r.random_range(8..=40);
    let dims = r.random_range(1..=4);
    let classes = r.random_range(2..=3);
    if seed.is_multiple_of(2) {
        clustered_points(&mut r, size, dims, classes)
    } else {
        random_points(&mut r, size, dims, classes)
    }
}

fn oracle_enn<'a>(pool: &[&'a Instance], k: usize) -> Vec<&'a Instance> {
    pool.iter()
        .copied()
        .filter(|x| {
            let labels: Vec<LabelId> = sorted_others(x, pool)
                .iter()
                .take(k)
                .map(|p| p.label)
                .collect();
            majority(&labels) == x.label
        })
        .collect()
}

/// Squared distance to the nearest point of another class in `pool`.
fn enemy_radius(x: &Instance, pool: &[&Instance]) -> Option<f64> {
    pool.iter()
        .filter(|p| p.label != x.label)
        .map(|p| d2(&p.values, &x.values))
        .min_by(f64::total_cmp)
}

fn nearest_enemy_id(x: &Instance, pool: &[&Instance]) -> Option<usize> {
    pool.iter()
        .filter(|p| p.label != x.label)
        .min_by(|a, b| {
            d2(&a.values, &x.values)
                .total_cmp(&d2(&b.values, &x.values))
                .then(a.id.cmp(&b.id))
        })
        .map(|p| p.id)
}

fn oracle_coverage(x: &Instance, pool: &[&Instance]) -> Vec<usize> {
    let r = enemy_radius(x, pool).unwrap();
    let mut v: Vec<usize> = pool
        .iter()
        .filter(|y| y.id != x.id && d2(&y.values, &x.values) < r)
        .map(|y| y.id)
        .collect();
    v.sort_unstable();
    v
}

fn oracle_reachable(x: &Instance, pool: &[&Instance]) -> Vec<usize> {
    let mut v: Vec<usize> = pool
        .iter()
        .filter(|y| y.id != x.id && oracle_coverage(y, pool).contains(&x.id))
        .map(|y| y.id)
        .collect();
    v.sort_unstable();
    v
}

fn oracle_local_set(x: &Instance, pool: &[&Instance]) -> Vec<usize> {
    let r = enemy_radius(x, pool).unwrap();
    let mut v: Vec<usize> = pool
        .iter()
        .filter(|y| d2(&y.values, &x.values) < r)
        .map(|y| y.id)
        .collect();
    v.sort_unstable();
    v
}

fn oracle_lssm<'a>(pool: &[&'a Instance]) -> Vec<&'a Instance> {
    pool.iter()
        .copied()
        .filter(|x| {
            let u = pool
                .iter()
                .filter(|y| oracle_local_set(y, pool).contains(&x.id))
                .count();
            let h = pool
                .iter()
                .filter(|y| nearest_enemy_id(y, pool) == Some(x.id))
                .count();
            u >= h
        })
        .collect()
}

fn oracle_icf<'a>(pool: &[&'a Instance], k: usize) -> Vec<&'a Instance> {
    let mut current = oracle_enn(pool, k);
    if class_count(&current) < 2 {
        return current;
    }
    loop {
        let flagged: Vec<usize> = current
            .iter()
            .filter(|x| oracle_coverage(x, &current).len() > oracle_reachable(x, &current).len())
            .map(|x| x.id)
            .collect();
        if flagged.is_empty() {
            return current;
        }
        let next: Vec<&Instance> = current
            .iter()
            .copied()
            .filter(|x| !flagged.contains(&x.id))
            .collect();
        if class_count(&next) < 2 {
            return current;
        }
        current = next;
    }
}

fn oracle_drop3<'a>(pool: &[&'a Instance], k: usize) -> Vec<&'a Instance> {
    let filtered = oracle_enn(pool, k);
    if class_count(&filtered) < 2 {
        return filtered;
    }
    let mut order = filtered.clone();
    order.sort_by(|a, b| {
        enemy_radius(b, &filtered)
            .unwrap()
            .total_cmp(&enemy_radius(a, &filtered).unwrap())
            .then(a.id.cmp(&b.id))
    });
    let mut active: Vec<&Instance> = filtered.clone();
    for p in order {
        if active.len() <= 1 {
            break;
        }
        // Associates come from the whole filtered set, removed points included.
        let removable = filtered.iter().filter(|a| a.id != p.id).all(|a| {
            let nn = sorted_others(a, &active);
            if !nn.iter().take(k).any(|q| q.id == p.id) {
                return true;
            }
            let without: Vec<LabelId> = nn
                .iter()
                .filter(|q| q.id != p.id)
                .take(k)
                .map(|q| q.label)
                .collect();
            majority(&without) == a.label
        });
        if removable {
            active.retain(|q| q.id != p.id);
        }
    }
    active
}

fn oracle_lsbo<'a>(pool: &[&'a Instance]) -> Vec<&'a Instance> {
    let smoothed = oracle_lssm(pool);
    if class_count(&smoothed) < 2 {
        return smoothed;
    }
    let sets: BTreeMap<usize, Vec<usize>> = smoothed
        .iter()
        .map(|x| (x.id, oracle_local_set(x, &smoothed)))
        .collect();
    let mut order = smoothed.clone();
    order.sort_by_key(|x| (sets[&x.id].len(), x.id));
    let mut kept: Vec<&Instance> = Vec::new();
    for x in order {
        if !kept.iter().any(|s| sets[&x.id].contains(&s.id)) {
            kept.push(x);
        }
    }
    kept
}

fn for_each_fixture(mut check: impl FnMut(u64, &[Instance], &[&Instance])) {
    for seed in 0..SELECTOR_FIXTURES {
        let pts = selector_fixture(seed);
        let refs: Vec<&Instance> = pts.iter().collect();
        check(seed, &pts, &refs);
    }
}

pub fn enn_matches_majority_oracle() {
    for_each_fixture(|seed, pts, refs| {
        assert_eq!(
            enn(pts, K).unwrap().selected,
            ids(&oracle_enn(refs, K)),
            "fixture {seed}"
        );
    });
}

pub fn coverage_and_reachable_match_double_loop() {
    for_each_fixture(|seed, pts, refs| {
        for x in pts {
            let (cov, reach) = coverage_reachable(pts, x.id).unwrap();
            assert_eq!(
                cov,
                oracle_coverage(x, refs),
                "fixture {seed}, point {}",
                x.id
            );
            assert_eq!(
                reach,
                oracle_reachable(x, refs),
                "fixture {seed}, point {}",
                x.id
            );
        }
    });
}

pub fn local_set_matches_double_loop() {
    for_each_fixture(|seed, pts, refs| {
        for x in pts {
            assert_eq!(
                local_set(pts, x.id).unwrap(),
                oracle_local_set(x, refs),
                "fixture {seed}"
            );
        }
    });
}

pub fn lssm_matches_usefulness_harmfulness_counts() {
    for_each_fixture(|seed, pts, refs| {
        assert_eq!(
            lssm(pts).unwrap().selected,
            ids(&oracle_lssm(refs)),
            "fixture {seed}"
        );
    });
}

pub fn icf_matches_fixpoint_oracle() {
    for_each_fixture(|seed, pts, refs| {
        assert_eq!(
            icf(pts, K).unwrap().selected,
            ids(&oracle_icf(refs, K)),
            "fixture {seed}"
        );
    });
}

pub fn drop3_matches_reference() {
    for_each_fixture(|seed, pts, refs| {
        assert_eq!(
            drop3(pts, K).unwrap().selected,
            ids(&oracle_drop3(refs, K)),
            "fixture {seed}"
        );
    });
}

pub fn drop3_matches_reference_on_larger_sets() {
    // Exercises ranking refreshes past the initial lookahead window.
    for seed in 0..10 {
        let mut r = rng(20_000 + seed);
        let pts = clustered_points(&mut r, 150, 2, 3);
        let refs: Vec<&Instance> = pts.iter().collect();
        assert_eq!(
            drop3(&pts, K).unwrap().selected,
            ids(&oracle_drop3(&refs, K)),
            "fixture {seed}"
        );
    }
}

pub fn lsbo_matches_reference() {
    for_each_fixture(|seed, pts, refs| {
        assert_eq!(
            lsbo(pts).unwrap().selected,
            ids(&oracle_lsbo(refs)),
            "fixture {seed}"
        );
    });
}

pub fn knn_classify_matches_full_sort() {
    for_each_fixture(|seed, pts, refs| {
        let mut r = rng(30_000 + seed);
        let dims = pts[0].values.len();
        for k in [1, 3, 5, 50] {
            let q: Vec<f64> = (0..dims).map(|_| r.random_range(0.0..10.0)).collect();
            let probe = Instance::new(usize::MAX, q.clone(), LabelId(0));
            let labels: Vec<LabelId> = sorted_others(&probe, refs)
                .iter()
                .take(k)
                .map(|p| p.label)
                .collect();
            assert_eq!(
                knn_classify(pts, &q, k).unwrap(),
                majority(&labels),
                "fixture {seed}"
            );
        }
    });
}
