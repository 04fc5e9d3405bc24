//! Prototype selection for k-nearest-neighbor classifiers.
//!
//! The crate pairs a grid-based spatial abstraction, PSASA, with five
//! classic selectors (ENN, DROP3, ICF, LSSm, LSBo). PSASA summarizes each
//! occupied grid cell by one centroid per class; running a selector on those
//! centroids instead of the raw training set gives the "Fast" variants.
//!
//! ```
//! use protoselect::{run_pipeline, Dataset, PipelineConfig, SelectorKind};
//!
//! let rows = (0..40).map(|i| {
//!     let c = i % 2;
//!     (vec![c as f64 * 3.0 + (i as f64).sin(), (i as f64).cos()], ["a", "b"][c])
//! });
//! let train = Dataset::from_rows("toy", rows).unwrap();
//! let out = run_pipeline(&train, &PipelineConfig::fast(SelectorKind::Enn, 5)).unwrap();
//! assert!(out.points.len() <= out.candidates);
//! ```
//!
//! # Layout
//!
//! ```text
//! dataset       Instance/Dataset, CSV, Euclidean distance, stratified folds
//! partitioning  grid spec, cells, centroids, PSASA, snapping
//! selectors     ENN, DROP3, ICF, LSSm, LSBo (+ neighbor index)
//! pipeline      PSASA -> selector composition
//! evaluation    k-NN accuracy, reduction, cross-validated experiments
//! synth         Gaussian blobs for runtime comparisons
//! ```
//!
//! Inner loops run on rayon when the default `parallel` feature is enabled;
//! without it everything runs on the calling thread with identical results.

pub mod dataset;
pub mod error;
pub mod evaluation;
mod par;
pub mod partitioning;
pub mod pipeline;
pub mod selectors;
pub mod synth;

pub use dataset::{
    distance, load_csv, stratified_folds, Dataset, FoldAssignment, Instance, LabelColumn, LabelId,
};
pub use error::{Error, Result};
pub use evaluation::{
    accuracy, knn_classify, reduction, run_experiment, run_experiment_with, EvaluationReport,
    FoldReport, FoldSchedule,
};
pub use par::is_parallel;
pub use partitioning::{
    extract_prototype, grid_spec, interval_index, partition, psasa, snap_to_instances, GridSpec,
    PartitionKey, PartitionSet, Prototype,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutput, Timing};
pub use selectors::{
    coverage_reachable, drop3, enn, icf, local_set, lsbo, lssm, select, NeighborIndex,
    SelectionResult, SelectorKind,
};
pub use synth::{gaussian_blobs, BlobSpec};
