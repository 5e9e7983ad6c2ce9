use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paircount_cli::config::DEFAULT_SEED;
use paircount_cli::{record, stats, BenchConfig, CliError, Experiment, ExtentPolicy, Level};
use paircount_core::Schedule;

#[derive(Parser)]
#[command(name = "paircount", version, about = "Collision, contact and pairwise-interaction benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark experiment and emit raw CSV rows.
    Bench {
        #[command(subcommand)]
        experiment: BenchCommand,
    },
    /// Run the correctness suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        level: Level,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Append rows to this CSV instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize raw rows: mean, standard deviation, 4-sigma error bar, speedup.
    Stats {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Lattice counter against the pairwise loop on random chains.
    LinearVsQuadratic(BenchArgs),
    /// Lattice counter with the space reallocated every K vectors.
    Realloc(BenchArgs),
    /// Lattice counter on normal clouds of varying spread.
    Locality(BenchArgs),
    /// Standard against balanced pair schedule on random spheres.
    Spi(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Standard,
    Balanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtentArg {
    Tight,
    Chain,
}

#[derive(Args)]
struct BenchArgs {
    /// Problem sizes (beads or spheres per vector).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Vectors counted per timed execution.
    #[arg(long)]
    vectors: Option<usize>,
    /// Timed executions per size.
    #[arg(long)]
    reps: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reallocation periods K (0 = never); the realloc experiment sweeps them all.
    #[arg(long, value_delimiter = ',')]
    realloc_every: Option<Vec<u64>>,
    /// Standard deviations for the locality experiment.
    #[arg(long, value_delimiter = ',')]
    std_dev: Option<Vec<f64>>,
    #[arg(long)]
    workers: Option<usize>,
    /// Time only this schedule (default: both).
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
    /// Edge of the cube the sphere centers are drawn from.
    #[arg(long)]
    box_edge: Option<f64>,
    /// Lattice size for chain experiments: reached extent or n-1.
    #[arg(long, value_enum)]
    extent: Option<ExtentArg>,
    /// Skip the discarded warm-up execution.
    #[arg(long)]
    no_warmup: bool,
    /// Append rows to this CSV instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl BenchArgs {
    fn into_config(self, experiment: Experiment) -> BenchConfig {
        let d = BenchConfig::defaults(experiment);
        BenchConfig {
            experiment,
            sizes: self.sizes.unwrap_or(d.sizes),
            vectors: self.vectors.unwrap_or(d.vectors),
            repetitions: self.reps.unwrap_or(d.repetitions),
            seed: self.seed.unwrap_or(d.seed),
            realloc_every: self.realloc_every.unwrap_or(d.realloc_every),
            workers: self.workers.unwrap_or(d.workers),
            schedule: self.schedule.map(|s| match s {
                ScheduleArg::Standard => Schedule::Standard,
                ScheduleArg::Balanced => Schedule::Balanced,
            }),
            std_devs: self.std_dev.unwrap_or(d.std_devs),
            box_edge: self.box_edge.unwrap_or(d.box_edge),
            extent: match self.extent {
                Some(ExtentArg::Tight) => ExtentPolicy::Tight,
                Some(ExtentArg::Chain) => ExtentPolicy::Chain,
                None => d.extent,
            },
            warmup: !self.no_warmup,
            out: self.out,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bench { experiment } => {
            let config = match experiment {
                BenchCommand::LinearVsQuadratic(a) => a.into_config(Experiment::LinearVsQuadratic),
                BenchCommand::Realloc(a) => a.into_config(Experiment::Realloc),
                BenchCommand::Locality(a) => a.into_config(Experiment::Locality),
                BenchCommand::Spi(a) => a.into_config(Experiment::Spi),
            };
            let output = paircount_cli::experiments::run(&config)?;
            record::emit(config.out.as_deref(), &output.records)?;
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Verify { level, seed, out } => {
            let report = paircount_cli::run_verify(level, seed)?;
            record::emit(out.as_deref(), &report.records)?;
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                if check.detail.is_empty() {
                    eprintln!("{status} {}", check.name);
                } else {
                    eprintln!("{status} {} ({})", check.name, check.detail);
                }
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Mismatch(format!("{failed} verification checks failed")));
            }
            Ok(())
        }
        Command::Stats { input, out } => {
            let records = record::read_records(File::open(&input)?)?;
            let summary = stats::summarize(&records);
            match out {
                Some(path) => stats::write_summary(File::create(path)?, &summary),
                None => stats::write_summary(io::stdout().lock(), &summary),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
