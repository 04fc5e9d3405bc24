//! Benchmark grids: accuracy/reduction tables, timings and n-sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use protoselect::{
    load_csv, run_experiment, run_experiment_with, Dataset, EvaluationReport, FoldSchedule,
    LabelColumn, PipelineConfig, SelectorKind,
};
use rayon::prelude::*;
use serde::Deserialize;

use crate::write_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Fast,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkGrid {
    pub datasets: Vec<PathBuf>,
    pub selectors: Vec<SelectorKind>,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    /// The first value is used for the accuracy and reduction tables.
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub output: PathBuf,
    /// Timed repetitions per cell; 0 skips `timing.csv`.
    #[serde(default = "default_repeats")]
    pub timing_repeats: usize,
    #[serde(default)]
    pub label_column: Option<String>,
    #[serde(default)]
    pub normalize: bool,
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::Original, Variant::Fast]
}
fn default_n_values() -> Vec<usize> {
    vec![5]
}
fn default_k() -> usize {
    3
}
fn default_folds() -> usize {
    10
}
fn default_seed() -> u64 {
    42
}
fn default_repeats() -> usize {
    3
}

impl BenchmarkGrid {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut grid: Self =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        // Relative paths resolve against the grid file.
        let base = path.parent().unwrap_or(Path::new("."));
        for d in grid
            .datasets
            .iter_mut()
            .chain(std::iter::once(&mut grid.output))
        {
            if d.is_relative() {
                *d = base.join(&*d);
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.selectors.is_empty() || self.variants.is_empty() {
            bail!("datasets, selectors and variants must be non-empty");
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            bail!("n_values must be non-empty and all >= 1");
        }
        if let Some(missing) = self.datasets.iter().find(|d| !d.exists()) {
            bail!("dataset not found: {}", missing.display());
        }
        Ok(())
    }

    fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for d in 0..self.datasets.len() {
            for &selector in &self.selectors {
                for &variant in &self.variants {
                    let ns: &[usize] = match variant {
                        Variant::Original => &self.n_values[..1],
                        Variant::Fast => &self.n_values,
                    };
                    for &n in ns {
                        let cfg = PipelineConfig {
                            use_psasa: variant == Variant::Fast,
                            n,
                            selector,
                            k: self.k,
                            snap: false,
                        };
                        cells.push(Cell { dataset: d, cfg });
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    dataset: usize,
    cfg: PipelineConfig,
}

type Outcome = std::result::Result<EvaluationReport, String>;

pub fn cmd_bench(grid_path: &Path, jobs: Option<usize>) -> Result<()> {
    let grid = BenchmarkGrid::from_file(grid_path)?;
    let label_column = match &grid.label_column {
        Some(s) => s.parse::<LabelColumn>().expect("infallible"),
        None => LabelColumn::Last,
    };
    let datasets: Vec<std::result::Result<Dataset, String>> = grid
        .datasets
        .iter()
        .map(|p| {
            load_csv(p, &label_column)
                .map(|ds| {
                    if grid.normalize {
                        ds.min_max_scaled()
                    } else {
                        ds
                    }
                })
                .map_err(|e| e.to_string())
        })
        .collect();
    for (p, d) in grid.datasets.iter().zip(&datasets) {
        if let Err(e) = d {
            log::error!("{}: {e}", p.display());
        }
    }

    let cells = grid.cells();
    let evaluate = |cell: &Cell, schedule: FoldSchedule| -> Outcome {
        let ds = datasets[cell.dataset].as_ref().map_err(Clone::clone)?;
        let res = match schedule {
            FoldSchedule::Concurrent => run_experiment(ds, &cell.cfg, grid.folds, grid.seed),
            FoldSchedule::Exclusive => {
                run_experiment_with(ds, &cell.cfg, grid.folds, grid.seed, schedule)
            }
        };
        res.map_err(|e| {
            log::error!("{} {}: {e}", ds.name(), cell.cfg.label());
            e.to_string()
        })
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().context("building thread pool")?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| evaluate(c, FoldSchedule::Concurrent))
            .collect()
    });

    fs::create_dir_all(&grid.output)
        .with_context(|| format!("creating {}", grid.output.display()))?;
    let names: Vec<String> = grid
        .datasets
        .iter()
        .zip(&datasets)
        .map(|(p, d)| match d {
            Ok(ds) => ds.name().to_string(),
            Err(_) => p
                .file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into()),
        })
        .collect();

    let table_n = grid.n_values[0];
    let table_cells: Vec<(usize, &Cell)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cfg.n == table_n)
        .collect();
    let columns: Vec<String> = {
        let mut seen = Vec::new();
        for (_, c) in &table_cells {
            let label = c.cfg.label();
            if !seen.contains(&label) {
                seen.push(label);
            }
        }
        seen
    };
    for (file, metric) in [
        (
            "accuracy.csv",
            (|r: &EvaluationReport| r.mean_accuracy) as fn(&EvaluationReport) -> f64,
        ),
        ("reduction.csv", |r: &EvaluationReport| r.mean_reduction),
    ] {
        let mut rows: BTreeMap<usize, BTreeMap<String, String>> = BTreeMap::new();
        for &(i, c) in &table_cells {
            rows.entry(c.dataset)
                .or_default()
                .insert(c.cfg.label(), fmt_outcome(&outcomes[i], metric));
        }
        let mut body = format!("dataset,{}\n", columns.join(","));
        for (d, row) in rows {
            let vals: Vec<&str> = columns.iter().map(|c| row[c].as_str()).collect();
            writeln!(body, "{},{}", names[d], vals.join(","))?;
        }
        write_file(&grid.output.join(file), &body)?;
    }

    if grid.n_values.len() > 1 {
        let mut body = String::from("dataset,algorithm,n,accuracy,reduction\n");
        for (c, o) in cells.iter().zip(&outcomes).filter(|(c, _)| c.cfg.use_psasa) {
            writeln!(
                body,
                "{},{},{},{},{}",
                names[c.dataset],
                c.cfg.label(),
                c.cfg.n,
                fmt_outcome(o, |r| r.mean_accuracy),
                fmt_outcome(o, |r| r.mean_reduction)
            )?;
        }
        write_file(&grid.output.join("nsweep.csv"), &body)?;
    }

    if grid.timing_repeats > 0 {
        // Timed cells run one at a time, each fold exclusively.
        let mut body = String::from("dataset,algorithm,n,median_seconds\n");
        for &(_, c) in &table_cells {
            let mut times = Vec::with_capacity(grid.timing_repeats);
            let mut failed = false;
            for _ in 0..grid.timing_repeats {
                match evaluate(c, FoldSchedule::Exclusive) {
                    Ok(r) => times.push(r.per_fold.iter().map(|f| f.total_time()).sum::<f64>()),
                    Err(_) => {
                        failed = true;
                        break;
                    }
                }
            }
            let cell = if failed {
                "ERR".to_string()
            } else {
                format!("{:.6}", median(&mut times))
            };
            let n = if c.cfg.use_psasa {
                c.cfg.n.to_string()
            } else {
                String::new()
            };
            writeln!(
                body,
                "{},{},{},{}",
                names[c.dataset],
                c.cfg.label(),
                n,
                cell
            )?;
        }
        write_file(&grid.output.join("timing.csv"), &body)?;
    }

    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    println!(
        "{} cells, {} failed; tables written to {}",
        cells.len(),
        failures,
        grid.output.display()
    );
    Ok(())
}

fn fmt_outcome(o: &Outcome, metric: fn(&EvaluationReport) -> f64) -> String {
    match o {
        Ok(r) => format!("{:.4}", metric(r)),
        Err(_) => "ERR".into(),
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}
