use std::time::Instant;

use super::enn::enn_mask;
use super::neighbors::Points;
use super::{SelectionResult, SelectorKind};
use crate::dataset::Instance;
use crate::error::{Error, Result};
use crate::par;

/// Coverage and reachable sets of the point with id `x_id`, as ascending ids.
///
/// Coverage holds the other points strictly closer to `x` than its nearest
/// enemy; reachable holds the points whose coverage contains `x`.
pub fn coverage_reachable(points: &[Instance], x_id: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let pts = Points::new(points)?;
    let x = pts
        .ids()
        .iter()
        .position(|&id| id == x_id)
        .ok_or(Error::UnknownId(x_id))?;
    let (radius, _) = pts.nearest_enemy(x, |_| true).ok_or(Error::NoEnemy(x_id))?;
    let mut coverage = Vec::new();
    let mut reachable = Vec::new();
    for y in (0..pts.len()).filter(|&y| y != x) {
        let d = pts.dist2(x, y);
        if d < radius {
            coverage.push(pts.id(y));
        }
        if let Some((ry, _)) = pts.nearest_enemy(y, |_| true) {
            if d < ry {
                reachable.push(pts.id(y));
            }
        }
    }
    coverage.sort_unstable();
    reachable.sort_unstable();
    Ok((coverage, reachable))
}

/// Iterative case filtering (Brighton & Mellish).
///
/// One ENN pass with the given `k`, then rounds of: compute coverage and
/// reachable sets on the current set, flag every point whose own
/// neighborhood is larger than the number of neighborhoods it belongs to
/// (`|coverage| > |reachable|` in the naming of [`coverage_reachable`]),
/// remove all flagged points at once. Stops when a round flags nothing. `params["iterations"]` records the number of
/// removal rounds.
pub fn icf(points: &[Instance], k: usize) -> Result<SelectionResult> {
    let start = Instant::now();
    let pts = Points::new(points)?;
    let keep = enn_mask(&pts, k)?;
    let survivors: Vec<usize> = (0..pts.len()).filter(|&i| keep[i]).collect();
    let filtered = pts.select(&survivors);
    let done = |ids: Vec<usize>| SelectionResult::new(SelectorKind::Icf, ids).with_k(k);
    if filtered.len() < 2 || filtered.class_count() < 2 {
        return Ok(done(filtered.ids().to_vec())
            .warn("fewer than two classes after the noise filter; returned filtered set")
            .timed(start));
    }
    let (kept, rounds, stalled) = filter_rounds(&filtered);
    let mut result = done(kept.into_iter().map(|i| filtered.id(i)).collect());
    result.params.insert("iterations".into(), rounds);
    if stalled {
        result = result.warn("stopped early: next round would leave a single class");
    }
    Ok(result.timed(start))
}

/// Nearest-enemy radius and coverage list of one point.
struct Neighborhood {
    enemy: usize,
    coverage: Vec<usize>,
}

fn neighborhood(pts: &Points, x: usize, active: &[bool]) -> Neighborhood {
    let (radius, enemy) = pts
        .nearest_enemy(x, |j| active[j])
        .expect("at least two classes remain active");
    let coverage = (0..pts.len())
        .filter(|&y| y != x && active[y] && pts.dist2(x, y) < radius)
        .collect();
    Neighborhood { enemy, coverage }
}

/// Returns surviving positions, the number of removal rounds, and whether
/// the loop stopped to avoid collapsing to one class.
fn filter_rounds(pts: &Points) -> (Vec<usize>, usize, bool) {
    let m = pts.len();
    let mut active = vec![true; m];
    let mut hoods: Vec<Neighborhood> = par::map_range(m, |x| neighborhood(pts, x, &active));
    let mut rounds = 0;
    loop {
        let live: Vec<usize> = (0..m).filter(|&x| active[x]).collect();
        let mut reach = vec![0usize; m];
        for &x in &live {
            for &y in &hoods[x].coverage {
                reach[y] += 1;
            }
        }
        let flagged: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&x| hoods[x].coverage.len() > reach[x])
            .collect();
        if flagged.is_empty() {
            return (live, rounds, false);
        }
        let mut survivors_by_class: Vec<_> = live
            .iter()
            .filter(|x| flagged.binary_search(x).is_err())
            .map(|&x| pts.label(x))
            .collect();
        survivors_by_class.sort_unstable();
        survivors_by_class.dedup();
        if survivors_by_class.len() < 2 {
            return (live, rounds, true);
        }
        for &x in &flagged {
            active[x] = false;
        }
        rounds += 1;

        let stale: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&x| active[x] && !active[hoods[x].enemy])
            .collect();
        let refreshed = par::map_slice(&stale, |&x| neighborhood(pts, x, &active));
        for (x, hood) in stale.into_iter().zip(refreshed) {
            hoods[x] = hood;
        }
        for &x in &live {
            if active[x] {
                hoods[x].coverage.retain(|&y| active[y]);
            } else {
                hoods[x].coverage = Vec::new();
            }
        }
    }
}
