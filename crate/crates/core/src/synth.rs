//! Synthetic Gaussian-blob datasets for runtime comparisons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Instance, LabelId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub size: usize,
    pub classes: usize,
    pub dims: usize,
    /// Standard deviation of every blob along every axis.
    pub cluster_std: f64,
    /// Blob centers are drawn uniformly from `[-center_box, center_box]^dims`.
    pub center_box: f64,
    pub seed: u64,
}

impl Default for BlobSpec {
    fn default() -> Self {
        Self {
            size: 20_000,
            classes: 10,
            dims: 16,
            cluster_std: 1.0,
            center_box: 10.0,
            seed: 42,
        }
    }
}

/// Draws `size` points split as evenly as possible over `classes` blobs.
/// Instance `i` belongs to class `i % classes`.
pub fn gaussian_blobs(spec: &BlobSpec) -> Result<Dataset> {
    if spec.size == 0 || spec.classes == 0 || spec.dims == 0 {
        return Err(Error::InvalidParameter(
            "size, classes and dims must be positive".into(),
        ));
    }
    if !(spec.cluster_std > 0.0 && spec.cluster_std.is_finite()) {
        return Err(Error::InvalidParameter(
            "cluster_std must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers: Vec<Vec<f64>> = (0..spec.classes)
        .map(|_| {
            (0..spec.dims)
                .map(|_| rng.random_range(-spec.center_box..=spec.center_box))
                .collect()
        })
        .collect();
    let noise =
        Normal::new(0.0, spec.cluster_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let instances = (0..spec.size)
        .map(|i| {
            let c = i % spec.classes;
            let values = centers[c]
                .iter()
                .map(|m| m + noise.sample(&mut rng))
                .collect();
            Instance::new(i, values, LabelId(c as u32))
        })
        .collect();
    Dataset::new(
        format!("blobs{}x{}c{}", spec.size, spec.dims, spec.classes),
        (0..spec.dims).map(|j| format!("x{j}")).collect(),
        (0..spec.classes).map(|c| format!("c{c}")).collect(),
        instances,
    )
}
