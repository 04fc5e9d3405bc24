use std::time::Instant;

use super::neighbors::{NeighborIndex, Points};
use super::{SelectionResult, SelectorKind};
use crate::dataset::Instance;
use crate::error::Result;
use crate::par;

/// Edited nearest neighbor: removes every point whose label disagrees with
/// the majority of its k nearest neighbors. Single pass over the full input.
pub fn enn(points: &[Instance], k: usize) -> Result<SelectionResult> {
    let start = Instant::now();
    let pts = Points::new(points)?;
    let keep = enn_mask(&pts, k)?;
    let selected = keep
        .iter()
        .enumerate()
        .filter(|(_, &kept)| kept)
        .map(|(i, _)| pts.id(i))
        .collect();
    Ok(SelectionResult::new(SelectorKind::Enn, selected)
        .with_k(k)
        .timed(start))
}

/// `true` for positions that survive the ENN filter.
pub(crate) fn enn_mask(pts: &Points, k: usize) -> Result<Vec<bool>> {
    let index = NeighborIndex::from_points(pts.clone(), k)?;
    Ok(par::map_range(pts.len(), |i| {
        index.predict(i) == pts.label(i)
    }))
}
