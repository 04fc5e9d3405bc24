//! Flat point storage and neighbor queries shared by the selectors.
//!
//! Neighbors are ranked by squared Euclidean distance, ties by ascending
//! instance id. A point is never its own neighbor.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::dataset::{squared_distance, Instance, LabelId};
use crate::error::{Error, Result};
use crate::par;

/// Contiguous copy of a labeled collection.
#[derive(Debug, Clone)]
pub(crate) struct Points {
    dim: usize,
    values: Vec<f64>,
    labels: Vec<LabelId>,
    ids: Vec<usize>,
}

impl Points {
    pub(crate) fn new(points: &[Instance]) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyInput)?.dim();
        let mut values = Vec::with_capacity(points.len() * dim);
        let mut seen = HashSet::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !seen.insert(p.id) {
                return Err(Error::DuplicateId(p.id));
            }
            values.extend_from_slice(&p.values);
        }
        Ok(Self {
            dim,
            values,
            labels: points.iter().map(|p| p.label).collect(),
            ids: points.iter().map(|p| p.id).collect(),
        })
    }

    /// The points at `indices`, in that order.
    pub(crate) fn select(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            dim: self.dim,
            values,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ids: indices.iter().map(|&i| self.ids[i]).collect(),
        }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub(crate) fn label(&self, i: usize) -> LabelId {
        self.labels[i]
    }

    #[inline]
    pub(crate) fn id(&self, i: usize) -> usize {
        self.ids[i]
    }

    pub(crate) fn ids(&self) -> &[usize] {
        &self.ids
    }

    #[inline]
    pub(crate) fn dist2(&self, i: usize, j: usize) -> f64 {
        squared_distance(self.row(i), self.row(j))
    }

    /// Ordering of candidates `(d2, index)` by distance, then id.
    #[inline]
    pub(crate) fn rank_cmp(&self, a: &(f64, usize), b: &(f64, usize)) -> Ordering {
        a.0.total_cmp(&b.0).then(self.ids[a.1].cmp(&self.ids[b.1]))
    }

    pub(crate) fn class_count(&self) -> usize {
        let mut seen: Vec<LabelId> = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Up to `limit` nearest points to `i` among those accepted by `active`,
    /// as `(d2, index)` in rank order.
    pub(crate) fn ranked(
        &self,
        i: usize,
        limit: usize,
        active: impl Fn(usize) -> bool,
    ) -> Vec<(f64, usize)> {
        let cmp = |a: &(f64, usize), b: &(f64, usize)| self.rank_cmp(a, b);
        if limit <= 64 && limit * 8 < self.len() {
            return self.ranked_small(i, limit, active);
        }
        let mut cand: Vec<(f64, usize)> = (0..self.len())
            .filter(|&j| j != i && active(j))
            .map(|j| (self.dist2(i, j), j))
            .collect();
        if limit < cand.len() {
            if limit == 0 {
                return Vec::new();
            }
            cand.select_nth_unstable_by(limit - 1, cmp);
            cand.truncate(limit);
            cand.shrink_to_fit();
        }
        cand.sort_unstable_by(cmp);
        cand
    }

    /// `ranked` for short lists: keeps a sorted buffer of the best `limit`.
    fn ranked_small(
        &self,
        i: usize,
        limit: usize,
        active: impl Fn(usize) -> bool,
    ) -> Vec<(f64, usize)> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(limit + 1);
        if limit == 0 {
            return best;
        }
        for j in (0..self.len()).filter(|&j| j != i) {
            let d = self.dist2(i, j);
            if best.len() == limit && d > best[limit - 1].0 {
                continue;
            }
            if !active(j) {
                continue;
            }
            let cand = (d, j);
            let pos = best.partition_point(|b| self.rank_cmp(b, &cand) == Ordering::Less);
            if pos < limit {
                best.insert(pos, cand);
                best.truncate(limit);
            }
        }
        best
    }

    /// Nearest point to `i` with a different label among `active`, as
    /// `(d2, index)`.
    pub(crate) fn nearest_enemy(
        &self,
        i: usize,
        active: impl Fn(usize) -> bool,
    ) -> Option<(f64, usize)> {
        let label = self.labels[i];
        let mut best: Option<(f64, usize)> = None;
        for j in 0..self.len() {
            if self.labels[j] == label || !active(j) {
                continue;
            }
            let cand = (self.dist2(i, j), j);
            if best.is_none_or(|b| self.rank_cmp(&cand, &b) == Ordering::Less) {
                best = Some(cand);
            }
        }
        best
    }

    /// Squared nearest-enemy distance for every point (infinite when the
    /// point has no enemy).
    pub(crate) fn enemy_radii(&self) -> Vec<(f64, Option<usize>)> {
        par::map_range(self.len(), |i| match self.nearest_enemy(i, |_| true) {
            Some((d, j)) => (d, Some(j)),
            None => (f64::INFINITY, None),
        })
    }
}

/// Majority label among `neighbors` (given nearest first).
///
/// Ties go to the tied label whose first occurrence is nearest.
pub(crate) fn vote(neighbors: impl IntoIterator<Item = LabelId>) -> Option<LabelId> {
    let mut tally: Vec<(LabelId, usize)> = Vec::new();
    for label in neighbors {
        match tally.iter_mut().find(|(l, _)| *l == label) {
            Some((_, c)) => *c += 1,
            None => tally.push((label, 1)),
        }
    }
    // `tally` is in first-occurrence order, so the first maximum is the
    // nearest among tied labels.
    let best = tally.iter().map(|&(_, c)| c).max()?;
    tally.into_iter().find(|&(_, c)| c == best).map(|(l, _)| l)
}

/// Precomputed k-nearest-neighbor lists over a labeled collection.
///
/// Lists exclude the point itself and are ordered by ascending distance,
/// ties by ascending id.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    points: Points,
    k: usize,
    lists: Vec<Vec<usize>>,
}

impl NeighborIndex {
    /// Builds k-NN lists for every point. Needs `k < points.len()`.
    pub fn build(points: &[Instance], k: usize) -> Result<Self> {
        Self::from_points(Points::new(points)?, k)
    }

    pub(crate) fn from_points(points: Points, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if k >= points.len() {
            return Err(Error::TooFewPoints {
                k,
                required: k,
                available: points.len(),
            });
        }
        let lists = par::map_range(points.len(), |i| {
            points
                .ranked(i, k, |_| true)
                .into_iter()
                .map(|(_, j)| j)
                .collect()
        });
        Ok(Self { points, k, lists })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() == 0
    }

    /// Ids of the k nearest neighbors of the point at position `i`.
    pub fn neighbor_ids(&self, i: usize) -> Vec<usize> {
        self.lists[i].iter().map(|&j| self.points.id(j)).collect()
    }

    /// Positions of the k nearest neighbors of the point at position `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    /// Majority label among the k neighbors of position `i`.
    pub fn predict(&self, i: usize) -> LabelId {
        vote(self.lists[i].iter().map(|&j| self.points.label(j)))
            .expect("neighbor lists are non-empty")
    }

    /// Position and squared distance of the nearest enemy of position `i`.
    pub fn nearest_enemy(&self, i: usize) -> Option<(usize, f64)> {
        self.points.nearest_enemy(i, |_| true).map(|(d, j)| (j, d))
    }
}
