//! Spatial abstraction over a uniform grid.
//!
//! Every dimension of the partitioned set is cut into `n` equal intervals
//! between its observed minimum and maximum. An instance lands in the cell
//! whose key is the tuple of its per-dimension interval indices; only
//! occupied cells are materialized. PSASA then replaces each (cell, class)
//! group by its centroid.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dataset::{squared_distance, Dataset, Instance, LabelId};
use crate::error::{Error, Result};
use crate::par;

/// Per-dimension grid geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub mins: Vec<f64>,
    /// Width of one interval: `(max - min) / n`.
    pub ranges: Vec<f64>,
}

impl GridSpec {
    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    /// Cell key of a point. Values outside the grid clamp to the border cells.
    pub fn key_of(&self, values: &[f64]) -> PartitionKey {
        PartitionKey(
            values
                .iter()
                .zip(self.mins.iter().zip(&self.ranges))
                .map(|(&v, (&min, &range))| interval_index(v, min, range, self.n) as u32)
                .collect(),
        )
    }

    /// Closed `[lower, upper]` bounds of a cell in each dimension.
    pub fn cell_bounds(&self, key: &PartitionKey) -> Vec<(f64, f64)> {
        key.0
            .iter()
            .zip(self.mins.iter().zip(&self.ranges))
            .map(|(&x, (&min, &range))| {
                let lo = min + x as f64 * range;
                (lo, lo + range)
            })
            .collect()
    }
}

/// Tuple of interval indices identifying one cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartitionKey(pub Vec<u32>);

impl PartitionKey {
    pub fn indices(&self) -> &[u32] {
        &self.0
    }
}

/// Occupied cells of a partitioned collection, keyed in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSet {
    /// Instance ids per cell, in input order.
    pub groups: BTreeMap<PartitionKey, Vec<usize>>,
    pub source: String,
    pub spec: GridSpec,
}

impl PartitionSet {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Per-cell summary for debugging dumps: key, member count and per-label
    /// counts (by label name).
    pub fn summary(&self, ds: &Dataset) -> Vec<CellSummary> {
        let label_of: HashMap<usize, LabelId> =
            ds.instances().iter().map(|i| (i.id, i.label)).collect();
        self.groups
            .iter()
            .map(|(key, ids)| {
                let mut labels = BTreeMap::new();
                for id in ids {
                    if let Some(&l) = label_of.get(id) {
                        *labels.entry(ds.label_name(l).to_string()).or_insert(0) += 1;
                    }
                }
                CellSummary {
                    key: key.0.clone(),
                    count: ids.len(),
                    labels,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellSummary {
    pub key: Vec<u32>,
    pub count: usize,
    pub labels: BTreeMap<String, usize>,
}

/// Centroid of one (cell, class) group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prototype {
    pub values: Vec<f64>,
    pub label: LabelId,
    pub member_count: usize,
    /// Cell the members came from; `None` when built outside a partition.
    pub source_key: Option<PartitionKey>,
}

/// Grid geometry over `h`: per-dimension minimum and interval width.
pub fn grid_spec(h: &[Instance], n: usize) -> Result<GridSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let first = h.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    let mut mins = first.values.clone();
    let mut maxs = first.values.clone();
    for inst in &h[1..] {
        if inst.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: inst.dim(),
            });
        }
        for (j, &v) in inst.values.iter().enumerate() {
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    let ranges = mins
        .iter()
        .zip(&maxs)
        .map(|(lo, hi)| (hi - lo).abs() / n as f64)
        .collect();
    Ok(GridSpec { n, mins, ranges })
}

/// Index of the interval containing `v`, clamped into `[0, n - 1]`.
///
/// The maximum of a dimension would land at index `n` by the plain floor
/// formula; it is folded into the last interval. A zero-width dimension maps
/// everything to 0.
pub fn interval_index(v: f64, min: f64, range: f64, n: usize) -> usize {
    if range <= 0.0 {
        return 0;
    }
    let raw = ((v - min) / range).floor();
    if raw.is_nan() || raw <= 0.0 {
        0
    } else if raw >= (n - 1) as f64 {
        n - 1
    } else {
        raw as usize
    }
}

/// Groups `h` into occupied grid cells.
pub fn partition(h: &[Instance], n: usize) -> Result<PartitionSet> {
    partition_named(h, n, "")
}

fn partition_named(h: &[Instance], n: usize, source: &str) -> Result<PartitionSet> {
    let spec = grid_spec(h, n)?;
    let keys = par::map_slice(h, |inst| spec.key_of(&inst.values));
    let mut region: HashMap<PartitionKey, Vec<usize>> = HashMap::new();
    for (inst, key) in h.iter().zip(keys) {
        region.entry(key).or_default().push(inst.id);
    }
    Ok(PartitionSet {
        groups: region.into_iter().collect(),
        source: source.to_string(),
        spec,
    })
}

/// Partitions a dataset, recording its name as the source.
pub fn partition_dataset(ds: &Dataset, n: usize) -> Result<PartitionSet> {
    partition_named(ds.instances(), n, ds.name())
}

/// Componentwise mean of a non-empty, single-label group.
pub fn extract_prototype(members: &[&Instance]) -> Result<Prototype> {
    let first = members.first().ok_or(Error::EmptyInput)?;
    let mut sums = vec![0.0; first.dim()];
    for m in members {
        if m.label != first.label {
            return Err(Error::MixedLabels);
        }
        if m.dim() != sums.len() {
            return Err(Error::DimensionMismatch {
                expected: sums.len(),
                found: m.dim(),
            });
        }
        for (s, v) in sums.iter_mut().zip(&m.values) {
            *s += v;
        }
    }
    let count = members.len() as f64;
    Ok(Prototype {
        values: sums.into_iter().map(|s| s / count).collect(),
        label: first.label,
        member_count: members.len(),
        source_key: None,
    })
}

/// PSASA candidate generation: one centroid per (occupied cell, class).
///
/// Output is ordered by cell key, then label id.
pub fn psasa(t: &[Instance], n: usize) -> Result<Vec<Prototype>> {
    let parts = partition(t, n)?;
    let by_id: HashMap<usize, &Instance> = t.iter().map(|i| (i.id, i)).collect();
    let cells: Vec<(&PartitionKey, &Vec<usize>)> = parts.groups.iter().collect();
    let per_cell = par::map_slice(&cells, |&(key, ids)| {
        let mut by_label: BTreeMap<LabelId, Vec<&Instance>> = BTreeMap::new();
        for id in ids {
            let inst = by_id[id];
            by_label.entry(inst.label).or_default().push(inst);
        }
        by_label
            .values()
            .map(|members| {
                extract_prototype(members).map(|mut p| {
                    p.source_key = Some(key.clone());
                    p
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::new();
    for cell in per_cell {
        out.extend(cell?);
    }
    Ok(out)
}

/// Relative tolerance under which two snap distances count as tied.
pub const SNAP_TIE_RTOL: f64 = 1e-9;

/// For each prototype, the nearest instance of `t` with the same label.
///
/// Distance ties (within [`SNAP_TIE_RTOL`]) go to the lowest id. Returns ascending, de-duplicated ids.
pub fn snap_to_instances(prototypes: &[Prototype], t: &[Instance]) -> Result<Vec<usize>> {
    if prototypes.is_empty() || t.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = t[0].dim();
    let picks = par::map_slice(prototypes, |p| -> Result<usize> {
        if p.values.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.values.len(),
            });
        }
        let cands: Vec<(f64, usize)> = t
            .iter()
            .filter(|i| i.label == p.label)
            .map(|i| (squared_distance(&p.values, &i.values), i.id))
            .collect();
        let best = cands
            .iter()
            .map(|c| c.0)
            .min_by(f64::total_cmp)
            .ok_or(Error::UnknownLabel(p.label.0))?;
        // A centroid is often exactly equidistant from its members; treat
        // rounding-level differences as ties.
        let tol = best * SNAP_TIE_RTOL;
        Ok(cands
            .iter()
            .filter(|c| c.0 <= best + tol)
            .map(|c| c.1)
            .min()
            .expect("best is attained"))
    });
    let mut ids = picks.into_iter().collect::<Result<Vec<_>>>()?;
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

/// Turns prototypes into instances with fresh ids `0..` in output order.
pub fn prototypes_to_instances(prototypes: &[Prototype]) -> Vec<Instance> {
    prototypes
        .iter()
        .enumerate()
        .map(|(id, p)| Instance::new(id, p.values.clone(), p.label))
        .collect()
}
