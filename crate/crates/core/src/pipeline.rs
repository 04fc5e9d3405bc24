//! PSASA followed by a conventional selector ("Fast" variants).

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Instance};
use crate::error::{Error, Result};
use crate::partitioning::{prototypes_to_instances, psasa, snap_to_instances};
use crate::selectors::{select, SelectorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub use_psasa: bool,
    /// Grid intervals per dimension.
    pub n: usize,
    pub selector: SelectorKind,
    pub k: usize,
    /// Replace prototypes by their nearest same-label training instances.
    pub snap: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            use_psasa: false,
            n: 5,
            selector: SelectorKind::None,
            k: 3,
            snap: false,
        }
    }
}

impl PipelineConfig {
    pub fn original(selector: SelectorKind) -> Self {
        Self {
            selector,
            ..Self::default()
        }
    }

    pub fn fast(selector: SelectorKind, n: usize) -> Self {
        Self {
            use_psasa: true,
            n,
            selector,
            ..Self::default()
        }
    }

    pub fn with_k(self, k: usize) -> Self {
        Self { k, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(())
    }

    /// Table label such as `ENN` or `Fast ENN`.
    pub fn label(&self) -> String {
        let name = self.selector.display_name();
        if self.use_psasa {
            format!("Fast {name}")
        } else {
            name.to_string()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timing {
    pub psasa: Duration,
    pub selector: Duration,
}

impl Timing {
    pub fn total(&self) -> Duration {
        self.psasa + self.selector
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// Reduced training set. Synthetic points carry fresh ids unless the
    /// configuration snaps to instances.
    pub points: Vec<Instance>,
    /// Size of the selector's input (PSASA output, or the training set).
    pub candidates: usize,
    pub timing: Timing,
    pub warnings: Vec<String>,
}

/// Runs the configured reduction on a training set.
///
/// With `use_psasa`, prototypes get ids `0..` in (cell key, label) order
/// before the selector sees them.
pub fn run_pipeline(train: &Dataset, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let mut timing = Timing::default();
    let candidates: Vec<Instance> = if cfg.use_psasa {
        let start = Instant::now();
        let protos = psasa(train.instances(), cfg.n)?;
        let cands = if cfg.snap {
            let ids = snap_to_instances(&protos, train.instances())?;
            train
                .instances()
                .iter()
                .filter(|i| ids.binary_search(&i.id).is_ok())
                .cloned()
                .collect()
        } else {
            prototypes_to_instances(&protos)
        };
        timing.psasa = start.elapsed();
        cands
    } else {
        train.instances().to_vec()
    };

    let start = Instant::now();
    let result = select(cfg.selector, &candidates, cfg.k)?;
    timing.selector = start.elapsed();

    let n_candidates = candidates.len();
    let points = candidates
        .into_iter()
        .filter(|c| result.selected.binary_search(&c.id).is_ok())
        .collect();
    Ok(PipelineOutput {
        points,
        candidates: n_candidates,
        timing,
        warnings: result.warnings,
    })
}
