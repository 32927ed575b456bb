use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ftr_maint::cli::{self, CliError, Population, SimulateOptions, SolveOutput, UrgencyMode};
use ftr_maint::simgen::GenConfig;

#[derive(Parser)]
#[command(
    name = "ftr-maint",
    version,
    about = "Flow-time and tardiness scheduling of preventive maintenance"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule an instance's tasks offline with the FTR rule
    Solve {
        instance: PathBuf,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value = "1,1")]
        weights: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SRPT lower bound of a single-processor instance
    Lowerbound {
        instance: PathBuf,
        #[arg(long)]
        q: Option<usize>,
    },
    /// FTR cost, lower bound and (small instances) optimum side by side
    Gap {
        instance: PathBuf,
        #[arg(long, default_value = "1,1")]
        weights: String,
    },
    /// Horizon simulations over a processor sweep, as CSV
    Simulate {
        /// Generator configuration (JSON or TOML)
        #[arg(long, conflicts_with = "instance")]
        config: Option<PathBuf>,
        /// Instance file with machines
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "both")]
        urgency: String,
        /// Comma-separated processor fractions
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        machines: Option<usize>,
        #[arg(long, default_value = "1,1")]
        weights: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a JSON run report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Time the offline scheduler and fit its growth exponent
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
    /// Check an instance and optionally a schedule written by `solve`
    Validate {
        instance: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Write a generated machine population as an instance file
    Generate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        machines: Option<usize>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 1)]
        processors: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn base_config(path: Option<&Path>) -> Result<GenConfig, CliError> {
    path.map_or_else(|| Ok(GenConfig::default()), cli::load_config)
}

fn run(args: Args) -> Result<(), CliError> {
    match args.command {
        Command::Solve {
            instance,
            q,
            weights,
            out,
        } => {
            let result = cli::solve(&cli::load_instance(&instance)?, q, cli::parse_weights(&weights)?)?;
            emit(&to_json(&result), out.as_deref())
        }
        Command::Lowerbound { instance, q } => {
            let lb = cli::lowerbound(&cli::load_instance(&instance)?, q)?;
            emit(&format!("{lb:.6}\n"), None)
        }
        Command::Gap { instance, weights } => {
            let report = cli::gap(&cli::load_instance(&instance)?, None, cli::parse_weights(&weights)?)?;
            emit(&to_json(&report), None)
        }
        Command::Simulate {
            config,
            instance,
            urgency,
            sweep,
            seed,
            horizon,
            machines,
            weights,
            out,
            report,
        } => {
            let population = match instance {
                Some(path) => Population::Instance(cli::load_instance(&path)?),
                None => {
                    let mut c = base_config(config.as_deref())?;
                    if let Some(m) = machines {
                        c.machine_count = m;
                    }
                    Population::Generated(c)
                }
            };
            let opts = SimulateOptions {
                population,
                urgency: urgency.parse::<UrgencyMode>()?,
                weights: cli::parse_weights(&weights)?,
                fractions: sweep.as_deref().map(cli::parse_fractions).transpose()?,
                seed,
                horizon,
            };
            let result = cli::simulate(&opts)?;
            if let Some(path) = report {
                emit(&to_json(&result.report), Some(&path))?;
            }
            emit(&result.csv, out.as_deref())
        }
        Command::Bench {
            sizes,
            seed,
            repetitions,
        } => {
            let report = cli::bench(&sizes, seed, repetitions);
            let mut text = String::from("n,seconds\n");
            for row in &report.rows {
                text.push_str(&format!("{},{:.6}\n", row.n, row.seconds));
            }
            match report.exponent {
                Some(e) => text.push_str(&format!("# fitted exponent {e:.3}\n")),
                None => text.push_str("# fitted exponent n/a\n"),
            }
            emit(&text, None)
        }
        Command::Validate { instance, schedule } => {
            let inst = cli::load_instance(&instance)?;
            let sched: Option<SolveOutput> = match schedule {
                Some(path) => Some(
                    serde_json::from_str(&cli::read_file(&path)?)
                        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
                ),
                None => None,
            };
            let msg = cli::validate(&inst, sched.as_ref())?;
            emit(&format!("{msg}\n"), None)
        }
        Command::Generate {
            config,
            seed,
            machines,
            horizon,
            processors,
            out,
        } => {
            let mut c = base_config(config.as_deref())?;
            if let Some(s) = seed {
                c.seed = s;
            }
            if let Some(m) = machines {
                c.machine_count = m;
            }
            if let Some(h) = horizon {
                c.horizon = h;
            }
            let file = cli::generate(&c, processors)?;
            emit(&(file.to_json() + "\n"), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
