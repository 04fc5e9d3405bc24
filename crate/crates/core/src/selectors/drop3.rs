use std::time::Instant;

use super::enn::enn_mask;
use super::neighbors::{vote, Points};
use super::{SelectionResult, SelectorKind};
use crate::dataset::Instance;
use crate::error::{Error, Result};
use crate::par;

/// DROP3 (Wilson & Martinez).
///
/// After an ENN pass with the same `k`, points are visited farthest from
/// their nearest enemy first (ties by id). Every point keeps its `k + 1`
/// nearest neighbors among the retained set; the associates of `p` are the
/// points with `p` among their first `k`. `p` is dropped when every
/// associate is classified correctly (k-NN vote) by its neighbors without `p`.
/// Dropped points stay associates of their neighbors and keep having their
/// lists refreshed, so later decisions still account for them.
pub fn drop3(points: &[Instance], k: usize) -> Result<SelectionResult> {
    let start = Instant::now();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let pts = Points::new(points)?;
    if pts.len() < k + 2 {
        return Err(Error::TooFewPoints {
            k,
            required: k + 1,
            available: pts.len(),
        });
    }
    let done = |ids: Vec<usize>| SelectionResult::new(SelectorKind::Drop3, ids).with_k(k);
    if pts.class_count() < 2 {
        return Ok(done(pts.ids().to_vec())
            .warn("single-class input returned unchanged")
            .timed(start));
    }
    let keep = enn_mask(&pts, k)?;
    let survivors: Vec<usize> = (0..pts.len()).filter(|&i| keep[i]).collect();
    let filtered = pts.select(&survivors);
    if filtered.len() < 2 || filtered.class_count() < 2 {
        return Ok(done(filtered.ids().to_vec())
            .warn("noise filter left fewer than two classes")
            .timed(start));
    }
    let kept = decremental_pass(&filtered, k);
    Ok(done(kept.into_iter().map(|i| filtered.id(i)).collect()).timed(start))
}

/// Cursor over a point's neighbor ranking among still-active points.
struct Ranking {
    order: Vec<usize>,
    next: usize,
    complete: bool,
}

fn decremental_pass(pts: &Points, k: usize) -> Vec<usize> {
    let m = pts.len();
    let width = (k + 1).min(m - 1);
    let lookahead = (4 * width + 16).min(m - 1);

    let radii = pts.enemy_radii();
    let mut visit: Vec<usize> = (0..m).collect();
    visit.sort_by(|&a, &b| {
        radii[b]
            .0
            .total_cmp(&radii[a].0)
            .then(pts.id(a).cmp(&pts.id(b)))
    });

    let mut rankings: Vec<Ranking> = par::map_range(m, |i| Ranking {
        order: pts
            .ranked(i, lookahead, |_| true)
            .into_iter()
            .map(|(_, j)| j)
            .collect(),
        next: width,
        complete: lookahead >= m - 1,
    });
    let mut nn: Vec<Vec<usize>> = rankings.iter().map(|r| r.order[..width].to_vec()).collect();
    let mut associates: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (a, list) in nn.iter().enumerate() {
        for &q in list {
            associates[q].push(a);
        }
    }

    let mut active = vec![true; m];
    let mut remaining = m;
    for &p in &visit {
        if remaining <= 1 {
            break;
        }
        let removable = associates[p].iter().all(|&a| {
            if !nn[a].iter().take(k).any(|&q| q == p) {
                return true;
            }
            let others = nn[a].iter().filter(|&&q| q != p).take(k);
            vote(others.map(|&q| pts.label(q))) == Some(pts.label(a))
        });
        if !removable {
            continue;
        }
        active[p] = false;
        remaining -= 1;
        for a in std::mem::take(&mut associates[p]) {
            nn[a].retain(|&q| q != p);
            if let Some(q) = next_active(pts, a, &mut rankings[a], &nn[a], &active) {
                nn[a].push(q);
                associates[q].push(a);
            }
        }
    }
    (0..m).filter(|&i| active[i]).collect()
}

/// Next active point in `a`'s ranking that is not already a neighbor,
/// widening the cached ranking when it runs out.
fn next_active(
    pts: &Points,
    a: usize,
    ranking: &mut Ranking,
    current: &[usize],
    active: &[bool],
) -> Option<usize> {
    loop {
        while let Some(&q) = ranking.order.get(ranking.next) {
            ranking.next += 1;
            if active[q] {
                return Some(q);
            }
        }
        if ranking.complete {
            return None;
        }
        let limit = ranking.order.len() * 4;
        let fresh: Vec<usize> = pts
            .ranked(a, limit, |j| active[j] && !current.contains(&j))
            .into_iter()
            .map(|(_, j)| j)
            .collect();
        ranking.complete = fresh.len() < limit;
        ranking.order = fresh;
        ranking.next = 0;
    }
}
