//! Labeled numeric datasets, Euclidean distance, CSV I/O and fold splitting.

mod csv_io;
mod folds;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv_io::{load_csv, read_csv, write_csv, LabelColumn};
pub use folds::{stratified_folds, FoldAssignment};

/// Interned class label. Indexes into [`Dataset::label_names`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One labeled point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: usize,
    pub values: Vec<f64>,
    pub label: LabelId,
}

impl Instance {
    pub fn new(id: usize, values: Vec<f64>, label: LabelId) -> Self {
        Self { id, values, label }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// An ordered, non-empty collection of instances sharing one feature schema.
///
/// `label_names` is the interner shared by every subset derived from the
/// same source, so a fold that happens to miss a class still maps ids to the
/// same names. [`Dataset::labels`] reports only the labels that occur.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    feature_names: Arc<[String]>,
    label_names: Arc<[String]>,
    labels: Vec<LabelId>,
    instances: Vec<Instance>,
}

impl Dataset {
    /// Validates and wraps `instances`.
    ///
    /// Fails on an empty collection, ragged or zero dimensions, non-finite
    /// values, labels outside the interner, or duplicate ids.
    pub fn new(
        name: impl Into<String>,
        feature_names: Vec<String>,
        label_names: Vec<String>,
        instances: Vec<Instance>,
    ) -> Result<Self> {
        Self::from_parts(
            name.into(),
            feature_names.into(),
            label_names.into(),
            instances,
        )
    }

    fn from_parts(
        name: String,
        feature_names: Arc<[String]>,
        label_names: Arc<[String]>,
        instances: Vec<Instance>,
    ) -> Result<Self> {
        let first = instances.first().ok_or(Error::EmptyInput)?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "instances need at least one feature".into(),
            ));
        }
        if feature_names.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: feature_names.len(),
            });
        }
        let mut seen = HashSet::with_capacity(instances.len());
        let mut present = vec![false; label_names.len()];
        for inst in &instances {
            if inst.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: inst.dim(),
                });
            }
            if let Some(j) = inst.values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    id: inst.id,
                    dim: j,
                });
            }
            match present.get_mut(inst.label.index()) {
                Some(p) => *p = true,
                None => return Err(Error::UnknownLabel(inst.label.0)),
            }
            if !seen.insert(inst.id) {
                return Err(Error::DuplicateId(inst.id));
            }
        }
        let labels = present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| LabelId(i as u32))
            .collect();
        Ok(Self {
            name,
            feature_names,
            label_names,
            labels,
            instances,
        })
    }

    /// Builds a dataset from raw rows, assigning ids `0..` in order and
    /// interning labels in first-appearance order.
    pub fn from_rows<S: AsRef<str>>(
        name: impl Into<String>,
        rows: impl IntoIterator<Item = (Vec<f64>, S)>,
    ) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut instances = Vec::new();
        for (id, (values, label)) in rows.into_iter().enumerate() {
            let label = label.as_ref();
            let lid = match names.iter().position(|n| n == label) {
                Some(i) => i,
                None => {
                    names.push(label.to_string());
                    names.len() - 1
                }
            };
            instances.push(Instance::new(id, values, LabelId(lid as u32)));
        }
        let dim = instances.first().map_or(0, Instance::dim);
        let features = (0..dim).map(|j| format!("x{j}")).collect();
        Self::new(name, features, names, instances)
    }

    /// A dataset over `instances` that shares this dataset's schema.
    pub fn derive(&self, name: impl Into<String>, instances: Vec<Instance>) -> Result<Self> {
        Self::from_parts(
            name.into(),
            Arc::clone(&self.feature_names),
            Arc::clone(&self.label_names),
            instances,
        )
    }

    /// The instances whose ids are in `ids`, in dataset order.
    pub fn subset(&self, name: impl Into<String>, ids: &HashSet<usize>) -> Result<Self> {
        let picked = self
            .instances
            .iter()
            .filter(|i| ids.contains(&i.id))
            .cloned()
            .collect();
        self.derive(name, picked)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn into_instances(self) -> Vec<Instance> {
        self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    /// Always false for a constructed dataset; kept for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Every label name known to the schema, indexed by [`LabelId`].
    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// Labels that occur in this dataset, ascending.
    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn label_name(&self, label: LabelId) -> &str {
        &self.label_names[label.index()]
    }

    /// Number of instances per label id (length = interner size).
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.label_names.len()];
        for inst in &self.instances {
            counts[inst.label.index()] += 1;
        }
        counts
    }

    /// Min-max scales every feature into [0, 1]. Constant features map to 0.
    pub fn min_max_scaled(&self) -> Self {
        let dim = self.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for inst in &self.instances {
            for (j, &v) in inst.values.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let instances = self
            .instances
            .iter()
            .map(|inst| {
                let values = inst
                    .values
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let span = hi[j] - lo[j];
                        if span > 0.0 {
                            (v - lo[j]) / span
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Instance::new(inst.id, values, inst.label)
            })
            .collect();
        Self {
            instances,
            ..self.clone()
        }
    }
}

/// Euclidean distance between two instances.
pub fn distance(a: &Instance, b: &Instance) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(squared_distance(&a.values, &b.values).sqrt())
}

/// Squared Euclidean distance. Slices must have equal length.
#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    // Four independent accumulators let the compiler vectorize.
    let mut acc = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            let d = x[l] - y[l];
            acc[l] += d * d;
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}
