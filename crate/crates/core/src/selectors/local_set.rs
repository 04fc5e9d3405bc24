//! Local-set based selectors (Leyva, Gonzalez & Perez).
//!
//! The local set of `x` is every point strictly closer to `x` than its
//! nearest enemy, `x` included.

use std::time::Instant;

use super::neighbors::Points;
use super::{SelectionResult, SelectorKind};
use crate::dataset::Instance;
use crate::error::{Error, Result};
use crate::par;

/// Local set of the point with id `x_id`, as ascending ids (contains `x_id`).
pub fn local_set(points: &[Instance], x_id: usize) -> Result<Vec<usize>> {
    let pts = Points::new(points)?;
    let x = pts
        .ids()
        .iter()
        .position(|&id| id == x_id)
        .ok_or(Error::UnknownId(x_id))?;
    let (radius, _) = pts.nearest_enemy(x, |_| true).ok_or(Error::NoEnemy(x_id))?;
    let mut ids: Vec<usize> = (0..pts.len())
        .filter(|&y| pts.dist2(x, y) < radius)
        .map(|y| pts.id(y))
        .collect();
    ids.sort_unstable();
    Ok(ids)
}

/// Local Set-based Smoother: keeps `x` when its usefulness (how many local
/// sets contain it) is at least its harmfulness (how many points have it as
/// nearest enemy).
pub fn lssm(points: &[Instance]) -> Result<SelectionResult> {
    let start = Instant::now();
    let pts = Points::new(points)?;
    if pts.class_count() < 2 {
        return Ok(SelectionResult::new(SelectorKind::Lssm, pts.ids().to_vec())
            .warn("single-class input returned unchanged")
            .timed(start));
    }
    let keep = smoother_mask(&pts);
    let selected = (0..pts.len())
        .filter(|&i| keep[i])
        .map(|i| pts.id(i))
        .collect();
    Ok(SelectionResult::new(SelectorKind::Lssm, selected).timed(start))
}

fn smoother_mask(pts: &Points) -> Vec<bool> {
    let radii = pts.enemy_radii();
    let mut harm = vec![0usize; pts.len()];
    for (_, enemy) in &radii {
        if let Some(e) = enemy {
            harm[*e] += 1;
        }
    }
    let useful = par::map_range(pts.len(), |x| {
        (0..pts.len())
            .filter(|&y| pts.dist2(x, y) < radii[y].0)
            .count()
    });
    useful.iter().zip(&harm).map(|(u, h)| u >= h).collect()
}

/// Local Set Border selector.
///
/// Runs LSSm, recomputes local sets on the smoothed set, then visits points
/// by ascending local-set size (ties by id), keeping `x` when no already
/// kept point lies in its local set.
pub fn lsbo(points: &[Instance]) -> Result<SelectionResult> {
    let start = Instant::now();
    let pts = Points::new(points)?;
    let done = |ids: Vec<usize>| SelectionResult::new(SelectorKind::Lsbo, ids);
    if pts.class_count() < 2 {
        return Ok(done(pts.ids().to_vec())
            .warn("single-class input returned unchanged")
            .timed(start));
    }
    let keep = smoother_mask(&pts);
    let smoothed: Vec<usize> = (0..pts.len()).filter(|&i| keep[i]).collect();
    let smoothed = pts.select(&smoothed);
    if smoothed.class_count() < 2 {
        return Ok(done(smoothed.ids().to_vec())
            .warn("smoothing left a single class; returned smoothed set")
            .timed(start));
    }
    let kept = border_pass(&smoothed);
    Ok(done(kept.into_iter().map(|i| smoothed.id(i)).collect()).timed(start))
}

fn border_pass(pts: &Points) -> Vec<usize> {
    let radii = pts.enemy_radii();
    let sizes = par::map_range(pts.len(), |x| {
        (0..pts.len())
            .filter(|&y| pts.dist2(x, y) < radii[x].0)
            .count()
    });
    let mut visit: Vec<usize> = (0..pts.len()).collect();
    visit.sort_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(pts.id(a).cmp(&pts.id(b))));
    let mut kept: Vec<usize> = Vec::new();
    for x in visit {
        let radius = radii[x].0;
        if !kept.iter().any(|&s| pts.dist2(x, s) < radius) {
            kept.push(x);
        }
    }
    kept
}
