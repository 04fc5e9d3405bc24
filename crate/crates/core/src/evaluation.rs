//! k-NN evaluation and the cross-validated experiment runner.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::dataset::{squared_distance, stratified_folds, Dataset, Instance, LabelId};
use crate::error::{Error, Result};
use crate::par;
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::selectors::vote;

/// Majority label of the `k` nearest model points to `query` (all points
/// when the model is smaller than `k`). Distance ties go to the lower id;
/// vote ties to the nearest tied label.
pub fn knn_classify(model: &[Instance], query: &[f64], k: usize) -> Result<LabelId> {
    let first = model.first().ok_or(Error::EmptyInput)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if first.dim() != query.len() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: query.len(),
        });
    }
    let cmp = |a: &(f64, usize, LabelId), b: &(f64, usize, LabelId)| {
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
    };
    let mut cand: Vec<(f64, usize, LabelId)> = model
        .iter()
        .map(|m| (squared_distance(&m.values, query), m.id, m.label))
        .collect();
    let k = k.min(cand.len());
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, cmp);
        cand.truncate(k);
    }
    cand.sort_unstable_by(cmp);
    Ok(vote(cand.iter().map(|c| c.2)).expect("k >= 1"))
}

/// Fraction of `test` classified correctly by k-NN over `model`.
pub fn accuracy(model: &[Instance], test: &[Instance], k: usize) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyInput);
    }
    let hits = par::map_slice(test, |t| {
        knn_classify(model, &t.values, k).map(|l| usize::from(l == t.label))
    })
    .into_iter()
    .sum::<Result<usize>>()?;
    Ok(hits as f64 / test.len() as f64)
}

/// `(original - reduced) / original`.
pub fn reduction(original_size: usize, reduced_size: usize) -> Result<f64> {
    if original_size == 0 || reduced_size > original_size {
        return Err(Error::InvalidSizes {
            original: original_size,
            reduced: reduced_size,
        });
    }
    Ok((original_size - reduced_size) as f64 / original_size as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldReport {
    pub fold: usize,
    pub accuracy: f64,
    pub reduction: f64,
    /// Seconds spent in PSASA (zero for original variants).
    pub psasa_time: f64,
    /// Seconds spent in the selector.
    pub selector_time: f64,
    pub train_size: usize,
    pub candidate_size: usize,
    pub reduced_size: usize,
    /// Set when the pipeline produced no points; accuracy is then 0.
    pub empty_output: bool,
    pub warnings: Vec<String>,
}

impl FoldReport {
    pub fn total_time(&self) -> f64 {
        self.psasa_time + self.selector_time
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub dataset: String,
    pub algorithm: String,
    pub config: PipelineConfig,
    pub n_folds: usize,
    pub seed: u64,
    pub per_fold: Vec<FoldReport>,
    pub mean_accuracy: f64,
    pub mean_reduction: f64,
    /// Mean per-fold selection time (PSASA + selector), seconds.
    pub mean_total_time: f64,
}

impl EvaluationReport {
    pub const CSV_HEADER: &'static str =
        "dataset,algorithm,selector,fast,n,k,snap,folds,seed,mean_accuracy,mean_reduction,mean_total_time";

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let c = &self.config;
        let mut row = String::new();
        write!(
            row,
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
            self.dataset,
            self.algorithm,
            c.selector,
            c.use_psasa,
            c.n,
            c.k,
            c.snap,
            self.n_folds,
            self.seed,
            self.mean_accuracy,
            self.mean_reduction,
            self.mean_total_time
        )
        .expect("writing to a String");
        row
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human one-liner for terminal output.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: accuracy {:.4}, reduction {:.4}, time {:.4}s",
            self.dataset,
            self.algorithm,
            self.mean_accuracy,
            self.mean_reduction,
            self.mean_total_time
        )
    }
}

/// How folds are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldSchedule {
    /// Folds run concurrently on the rayon pool.
    #[default]
    Concurrent,
    /// One fold at a time, for honest wall-clock timings.
    Exclusive,
}

/// Stratified k-fold evaluation of one pipeline configuration.
pub fn run_experiment(
    ds: &Dataset,
    cfg: &PipelineConfig,
    n_folds: usize,
    seed: u64,
) -> Result<EvaluationReport> {
    run_experiment_with(ds, cfg, n_folds, seed, FoldSchedule::Concurrent)
}

pub fn run_experiment_with(
    ds: &Dataset,
    cfg: &PipelineConfig,
    n_folds: usize,
    seed: u64,
    schedule: FoldSchedule,
) -> Result<EvaluationReport> {
    cfg.validate()?;
    let folds = stratified_folds(ds, n_folds, seed)?;
    if let Some((label, count)) = ds
        .labels()
        .iter()
        .map(|&l| (l, ds.class_counts()[l.index()]))
        .find(|&(_, c)| c < n_folds)
    {
        log::warn!(
            "{}: class {:?} has {count} instances for {n_folds} folds; stratification is best effort",
            ds.name(),
            ds.label_name(label)
        );
    }

    let run_fold = |fold: usize| -> Result<FoldReport> {
        let test_ids: HashSet<usize> = folds.test_ids(fold).into_iter().collect();
        let train_ids: HashSet<usize> = folds.train_ids(fold).into_iter().collect();
        debug_assert!(test_ids.is_disjoint(&train_ids));
        let train = ds.subset(format!("{}#train{fold}", ds.name()), &train_ids)?;
        let test = ds.subset(format!("{}#test{fold}", ds.name()), &test_ids)?;
        let out = run_pipeline(&train, cfg)?;
        let empty = out.points.is_empty();
        let acc = if empty {
            0.0
        } else {
            accuracy(&out.points, test.instances(), cfg.k)?
        };
        Ok(FoldReport {
            fold,
            accuracy: acc,
            reduction: reduction(train.len(), out.points.len())?,
            psasa_time: out.timing.psasa.as_secs_f64(),
            selector_time: out.timing.selector.as_secs_f64(),
            train_size: train.len(),
            candidate_size: out.candidates,
            reduced_size: out.points.len(),
            empty_output: empty,
            warnings: out.warnings,
        })
    };

    let per_fold = match schedule {
        FoldSchedule::Concurrent => par::map_range(n_folds, run_fold),
        FoldSchedule::Exclusive => (0..n_folds).map(run_fold).collect(),
    }
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mean = |f: fn(&FoldReport) -> f64| per_fold.iter().map(f).sum::<f64>() / n_folds as f64;
    Ok(EvaluationReport {
        dataset: ds.name().to_string(),
        algorithm: cfg.label(),
        config: *cfg,
        n_folds,
        seed,
        mean_accuracy: mean(|f| f.accuracy),
        mean_reduction: mean(|f| f.reduction),
        mean_total_time: mean(FoldReport::total_time),
        per_fold,
    })
}
