use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use protoselect::{
    gaussian_blobs, load_csv, partition, run_experiment, BlobSpec, Dataset, EvaluationReport,
    LabelColumn, PipelineConfig, SelectorKind,
};

mod bench;

#[derive(Parser)]
#[command(
    name = "protoselect",
    version,
    about = "Prototype selection experiments for k-NN"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validate one pipeline on one dataset.
    Run(RunArgs),
    /// Run a benchmark grid described by a TOML file.
    Bench(BenchArgs),
    /// Write a Gaussian-blob dataset as CSV.
    Synth(SynthArgs),
    /// Dump the PSASA grid cells of a dataset as JSON.
    Partition(PartitionArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// Label column: `last`, a 0-based index, or a header name.
    #[arg(long, default_value = "last")]
    label_column: LabelColumn,
    /// Min-max scale every feature to [0, 1] before running.
    #[arg(long)]
    normalize: bool,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        let ds = load_csv(&self.data, &self.label_column)?;
        Ok(if self.normalize {
            ds.min_max_scaled()
        } else {
            ds
        })
    }
}

#[derive(clap::Args)]
struct RunArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    selector: SelectorKind,
    /// Run PSASA before the selector.
    #[arg(long)]
    fast: bool,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..))]
    folds: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Replace PSASA prototypes by their nearest same-label instances.
    #[arg(long, requires = "fast")]
    snap: bool,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// TOML grid file.
    grid: PathBuf,
    /// Concurrent untimed cells.
    #[arg(long, env = "PROTOSELECT_JOBS")]
    jobs: Option<usize>,
}

#[derive(clap::Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 20_000)]
    size: usize,
    #[arg(long, default_value_t = 10)]
    classes: usize,
    #[arg(long, default_value_t = 16)]
    dims: usize,
    #[arg(long, default_value_t = BlobSpec::default().cluster_std)]
    std: f64,
    #[arg(long, default_value_t = BlobSpec::default().center_box)]
    center_box: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(clap::Args)]
struct PartitionArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => bench::cmd_bench(&args.grid, args.jobs),
        Command::Synth(args) => cmd_synth(args),
        Command::Partition(args) => cmd_partition(args),
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let ds = args.data.load()?;
    let cfg = PipelineConfig {
        use_psasa: args.fast,
        n: args.n as usize,
        selector: args.selector,
        k: args.k as usize,
        snap: args.snap,
    };
    let report = run_experiment(&ds, &cfg, args.folds as usize, args.seed)?;
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => format!("{}\n{}\n", EvaluationReport::CSV_HEADER, report.csv_row()),
    };
    match &args.output {
        Some(path) => {
            write_file(path, &body)?;
            println!("{}", report.summary());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            eprintln!("{}", report.summary());
        }
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let ds = gaussian_blobs(&BlobSpec {
        size: args.size,
        classes: args.classes,
        dims: args.dims,
        cluster_std: args.std,
        center_box: args.center_box,
        seed: args.seed,
    })?;
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    protoselect::dataset::write_csv(&ds, file)?;
    Ok(())
}

fn cmd_partition(args: PartitionArgs) -> Result<()> {
    let ds = args.data.load()?;
    let set = partition(ds.instances(), args.n as usize)?;
    let cells = set.summary(&ds);
    println!("{}", serde_json::to_string_pretty(&cells)?);
    Ok(())
}

pub(crate) fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}
