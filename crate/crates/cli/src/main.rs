use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use simbias::config::{Overrides, RunFile};
use simbias::correlate::{correlate, PerformanceTable};
use simbias::formats::{variant_tables, HarvestRecord};
use simbias::parallel::{harvest_parallel, pool};
use simbias::report::RankedReport;
use simbias::{Result, RunError};
use simbias_core::lz::{lz_complexity, BitString};

#[derive(Parser)]
#[command(name = "simbias", version, about = "Simplicity-bias scoring for self-attention candidates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Harvest every config in a sweep file, then rank by AUC.
    Run(RunArgs),
    /// Print the LZ complexity of a bit string.
    Lz {
        /// String over {0,1}, at least two symbols.
        bits: String,
    },
    /// Harvest one config and dump its functions and scores.
    Harvest(HarvestArgs),
    /// Spearman correlation of report metrics against a performance CSV.
    Correlate {
        #[arg(long)]
        report: PathBuf,
        /// CSV with header `label,metric1,...`.
        #[arg(long)]
        performance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the quantum attention variant tables as JSON.
    Variants {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write `<label>.csv` complexity distributions here.
    #[arg(long)]
    hist_dir: Option<PathBuf>,
}

#[derive(Args)]
struct HarvestArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Which config to harvest; required if the file has more than one.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| RunError::Io { path: path.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn overrides(a: &SweepArgs, top_k: Option<usize>) -> Overrides {
    Overrides { trials: a.trials, input_bits: a.bits, seed: a.seed, top_k }
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let spec = RunFile::load(&a.sweep.config)?.resolve(&overrides(&a.sweep, a.top_k))?;
    let report = pool(a.sweep.threads)?.install(|| simbias::run(&spec))?;
    if let Some(dir) = &a.hist_dir {
        std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
        for c in &report.configs {
            let path = dir.join(format!("{}.csv", c.label));
            std::fs::write(&path, c.distribution_csv()).map_err(|source| RunError::Io { path, source })?;
        }
    }
    let text = match a.format {
        Format::Json => report.to_json(),
        Format::Csv => report.summary_csv(),
    };
    emit(a.sweep.out.as_deref(), &text)
}

fn cmd_harvest(a: &HarvestArgs) -> Result<()> {
    let file = RunFile::load(&a.sweep.config)?;
    let spec = file.resolve(&overrides(&a.sweep, None))?;
    let config = match &a.label {
        Some(l) => spec
            .configs
            .iter()
            .find(|c| &c.label == l)
            .ok_or_else(|| RunError::Spec(format!("no config labelled {l:?}")))?,
        None if spec.configs.len() == 1 => &spec.configs[0],
        None => return Err(RunError::Spec("several configs in file; pass --label".into())),
    };
    let result = pool(a.sweep.threads)?.install(|| harvest_parallel(config, spec.trials, spec.master_seed))?;
    emit(a.sweep.out.as_deref(), &to_json(&HarvestRecord::from(&result)))
}

fn cmd_correlate(report: &Path, performance: &Path, out: Option<&Path>) -> Result<()> {
    let text = std::fs::read_to_string(report).map_err(|source| RunError::Io { path: report.into(), source })?;
    let report: RankedReport =
        serde_json::from_str(&text).map_err(|source| RunError::Json { path: report.into(), source })?;
    let file = std::fs::File::open(performance).map_err(|source| RunError::Io { path: performance.into(), source })?;
    let table = PerformanceTable::from_reader(file).map_err(|e| RunError::Spec(format!("{}: {e}", performance.display())))?;
    emit(out, &to_json(&correlate(&report, &table)?))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Lz { bits } => {
            let score = lz_complexity(&BitString::parse(&bits)?)?;
            println!("{:.6}", score.value());
            Ok(())
        }
        Command::Harvest(a) => cmd_harvest(&a),
        Command::Correlate { report, performance, out } => cmd_correlate(&report, &performance, out.as_deref()),
        Command::Variants { out } => emit(out.as_deref(), &to_json(&variant_tables())),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.to_object()).expect("error serializes"));
            ExitCode::FAILURE
        }
    }
}
