//! Commands behind the `ftr-maint` binary.
//!
//! Each command takes parsed inputs and returns a value that serializes to
//! its output, so the binary only parses arguments and prints. Durations are
//! written in days with 6 decimals.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::instance::{InstanceError, InstanceFile};
use crate::offline::{self, GapReport, OfflineError, OfflineInstance};
use crate::realtime::{run_horizon, DispatchError, SimReport, SystemState};
use crate::simgen::{self, ConfigError, GenConfig};
use crate::taskmodel::{validate_schedule, CostWeights, Machine, MaintTask, ScheduleEntry, TaskKey};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("cannot parse configuration: {0}")]
    Config(String),
    #[error(transparent)]
    InvalidConfig(#[from] ConfigError),
    #[error(transparent)]
    Offline(#[from] OfflineError),
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("schedule violation: {0}")]
    Violation(String),
}

impl CliError {
    /// 2 for unreadable or malformed input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Config(_)
            | CliError::Usage(_)
            | CliError::Instance(InstanceError::Parse(_)) => 2,
            _ => 1,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    Ok(InstanceFile::parse(&read_file(path)?)?)
}

/// Reads a generator configuration; `.toml` files as TOML, anything else as JSON.
pub fn load_config(path: &Path) -> Result<GenConfig, CliError> {
    let text = read_file(path)?;
    let config: GenConfig = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
    };
    config.validate()?;
    Ok(config)
}

/// Parses `wf,wt`.
pub fn parse_weights(text: &str) -> Result<CostWeights, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        CliError::Usage(format!(
            "weights must be two non-negative numbers `wf,wt`, got `{text}`"
        ))
    };
    let [wf, wt] = parts.as_slice() else {
        return Err(bad());
    };
    let wf: f64 = wf.parse().map_err(|_| bad())?;
    let wt: f64 = wt.parse().map_err(|_| bad())?;
    CostWeights::new(wf, wt).ok_or_else(bad)
}

/// Parses a comma-separated list of processor fractions.
pub fn parse_fractions(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let f: f64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad fraction `{s}`")))?;
            if f > 0.0 && f <= 1.0 {
                Ok(f)
            } else {
                Err(CliError::Usage(format!("fraction {f} is outside (0, 1]")))
            }
        })
        .collect()
}

pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Short SHA-256 of the canonical JSON form of a value.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("value serializes");
    hex::encode(&Sha256::digest(&json)[..8])
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct EntryRow {
    pub machine_id: u32,
    pub seq: u32,
    pub processor: usize,
    pub start: f64,
    pub completion: f64,
    pub release: f64,
    pub due: f64,
}

impl From<&ScheduleEntry> for EntryRow {
    fn from(e: &ScheduleEntry) -> Self {
        Self {
            machine_id: e.task.key.machine_id,
            seq: e.task.key.seq,
            processor: e.processor,
            start: round6(e.start),
            completion: round6(e.completion),
            release: round6(e.task.release),
            due: round6(e.task.due),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SolveOutput {
    pub processors: usize,
    pub weights: [f64; 2],
    pub total_cost: f64,
    pub entries: Vec<EntryRow>,
}

fn offline_instance(
    instance: &InstanceFile,
    q: Option<usize>,
    weights: CostWeights,
) -> Result<OfflineInstance, CliError> {
    let tasks = instance.offline_tasks()?;
    Ok(OfflineInstance::new(tasks, q.unwrap_or(instance.processors), weights)?)
}

/// Offline FTR schedule of the instance's task set.
pub fn solve(instance: &InstanceFile, q: Option<usize>, weights: CostWeights) -> Result<SolveOutput, CliError> {
    let inst = offline_instance(instance, q, weights)?;
    let schedule = offline::schedule_ftr(&inst);
    Ok(SolveOutput {
        processors: inst.q,
        weights: [weights.flow, weights.tardy],
        total_cost: round6(schedule.cost(weights)),
        entries: schedule.entries.iter().map(EntryRow::from).collect(),
    })
}

/// SRPT lower bound on one processor.
pub fn lowerbound(instance: &InstanceFile, q: Option<usize>) -> Result<f64, CliError> {
    let inst = offline_instance(instance, q, CostWeights::UNIT)?;
    Ok(offline::lower_bound(&inst)?)
}

pub fn gap(instance: &InstanceFile, q: Option<usize>, weights: CostWeights) -> Result<GapReport, CliError> {
    let inst = offline_instance(instance, q, weights)?;
    Ok(offline::gap_report(&inst)?)
}

/// Checks an instance and, optionally, a schedule written by [`solve`].
pub fn validate(instance: &InstanceFile, schedule: Option<&SolveOutput>) -> Result<String, CliError> {
    let machines = instance.build_machines()?;
    let tasks = instance.offline_tasks()?;
    if instance.processors == 0 {
        return Err(CliError::Usage("processors must be at least 1".into()));
    }
    let mut report = format!("instance ok: {} machines, {} tasks", machines.len(), tasks.len());
    if let Some(out) = schedule {
        let entries = rows_to_entries(&out.entries, &tasks)?;
        validate_schedule(&entries, &tasks, out.processors).map_err(|v| CliError::Violation(v.to_string()))?;
        report.push_str(&format!(
            "\nschedule ok: {} entries on {} processors",
            entries.len(),
            out.processors
        ));
    }
    Ok(report)
}

fn rows_to_entries(rows: &[EntryRow], tasks: &[MaintTask]) -> Result<Vec<ScheduleEntry>, CliError> {
    rows.iter()
        .map(|row| {
            let key = TaskKey {
                machine_id: row.machine_id,
                seq: row.seq,
            };
            let task = tasks
                .iter()
                .find(|t| t.key == key)
                .copied()
                .ok_or_else(|| CliError::Violation(format!("task {key} is not part of the instance")))?;
            Ok(ScheduleEntry {
                task,
                processor: row.processor,
                start: row.start,
                completion: row.completion,
            })
        })
        .collect()
}

/// Urgency variants to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrgencyMode {
    On,
    Off,
    Both,
}

impl UrgencyMode {
    pub fn flags(self) -> &'static [bool] {
        match self {
            UrgencyMode::On => &[true],
            UrgencyMode::Off => &[false],
            UrgencyMode::Both => &[false, true],
        }
    }
}

impl std::str::FromStr for UrgencyMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "on" => Ok(Self::On),
            "off" => Ok(Self::Off),
            "both" => Ok(Self::Both),
            other => Err(CliError::Usage(format!(
                "urgency must be on, off or both, got `{other}`"
            ))),
        }
    }
}

/// Machine population to simulate.
#[derive(Debug, Clone)]
pub enum Population {
    Generated(GenConfig),
    Instance(InstanceFile),
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub population: Population,
    pub urgency: UrgencyMode,
    pub weights: CostWeights,
    pub fractions: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub fraction: f64,
    pub q: usize,
    pub seed: u64,
    pub report: SimReport,
}

pub const CSV_HEADER: [&str; 9] = [
    "fraction",
    "q",
    "MC",
    "MRC",
    "mean_busy_time",
    "processed",
    "needed",
    "urgency_flag",
    "seed",
];

/// Sweep rows as CSV, sorted by fraction and then urgency flag (off first).
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.fraction
            .total_cmp(&b.fraction)
            .then(a.report.urgency.cmp(&b.report.urgency))
            .then(a.q.cmp(&b.q))
    });
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for row in sorted {
        let r = &row.report;
        writer
            .write_record([
                format!("{:.6}", row.fraction),
                row.q.to_string(),
                format!("{:.6}", r.mc),
                format!("{:.6}", r.mrc),
                format!("{:.6}", r.mean_busy_time),
                r.processed.to_string(),
                r.needed.to_string(),
                if r.urgency { "on" } else { "off" }.to_string(),
                row.seed.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
}

/// Provenance of a command's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub results: T,
    pub wall_clock_ms: f64,
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub rows: Vec<SweepRow>,
    pub csv: String,
    pub report: RunReport<Vec<SweepRow>>,
}

struct SimulationInputs {
    machines: Vec<Machine>,
    horizon: f64,
    sweep: Vec<(f64, usize)>,
    seed: u64,
    hash: String,
}

fn simulation_inputs(opts: &SimulateOptions) -> Result<SimulationInputs, CliError> {
    match &opts.population {
        Population::Generated(base) => {
            let mut config = base.clone();
            if let Some(seed) = opts.seed {
                config.seed = seed;
            }
            if let Some(h) = opts.horizon {
                config.horizon = h;
            }
            if let Some(f) = &opts.fractions {
                config.processor_fractions = f.clone();
            }
            let template = simgen::generate_system(&config)?;
            let hash = config_hash(&config);
            Ok(SimulationInputs {
                machines: template.machines,
                horizon: template.horizon,
                sweep: template.sweep,
                seed: config.seed,
                hash,
            })
        }
        Population::Instance(file) => {
            let machines = file.build_machines()?;
            let horizon = opts.horizon.unwrap_or(file.horizon_days);
            let count = machines.len().max(1);
            let sweep = match &opts.fractions {
                Some(fs) => fs
                    .iter()
                    .map(|&f| (f, ((f * count as f64).round() as usize).max(1)))
                    .collect(),
                None => vec![(file.processors as f64 / count as f64, file.processors)],
            };
            let hash = config_hash(file);
            Ok(SimulationInputs {
                machines,
                horizon,
                sweep,
                seed: opts.seed.unwrap_or(0),
                hash,
            })
        }
    }
}

/// Horizon simulations over the processor sweep.
pub fn simulate(opts: &SimulateOptions) -> Result<SimulateOutput, CliError> {
    let started = Instant::now();
    let SimulationInputs {
        machines,
        horizon,
        sweep,
        seed,
        hash,
    } = simulation_inputs(opts)?;
    let mut rows = Vec::new();
    for &(fraction, q) in &sweep {
        for &flag in opts.urgency.flags() {
            let mut state = SystemState::new(machines.clone(), q, horizon)?;
            let report = run_horizon(&mut state, flag, opts.weights);
            rows.push(SweepRow {
                fraction,
                q,
                seed,
                report,
            });
        }
    }
    let csv = rows_to_csv(&rows);
    let report = RunReport {
        command: "simulate".into(),
        config_hash: hash,
        seed,
        results: rows.clone(),
        wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(SimulateOutput { rows, csv, report })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln(seconds)` against `ln(n)`.
    pub exponent: Option<f64>,
}

/// Sizes below this are timed but left out of the growth fit.
pub const BENCH_MIN_FIT_SIZE: usize = 2;

/// Times [`offline::schedule_ftr`] on random single-processor instances.
///
/// Each size keeps the fastest of `repetitions` runs.
pub fn bench(sizes: &[usize], seed: u64, repetitions: usize) -> BenchReport {
    let rows: Vec<BenchRow> = sizes
        .iter()
        .map(|&n| {
            let tasks = simgen::random_offline_tasks(n, seed ^ n as u64);
            let inst = OfflineInstance::single(tasks).expect("generated tasks are valid");
            let seconds = (0..repetitions.max(1))
                .map(|_| {
                    let t0 = Instant::now();
                    std::hint::black_box(offline::schedule_ftr(std::hint::black_box(&inst)));
                    t0.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min);
            BenchRow { n, seconds }
        })
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= BENCH_MIN_FIT_SIZE && r.seconds > 0.0)
        .map(|r| ((r.n as f64).ln(), r.seconds.ln()))
        .collect();
    BenchReport {
        exponent: loglog_slope(&points),
        rows,
    }
}

pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Instance file holding a generated population.
pub fn generate(config: &GenConfig, processors: usize) -> Result<InstanceFile, CliError> {
    let template = simgen::generate_system(config)?;
    Ok(InstanceFile::from_machines(
        &template.machines,
        processors,
        template.horizon,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        assert_eq!(parse_weights("1,1").unwrap(), CostWeights::UNIT);
        assert_eq!(parse_weights(" 2 , 0.5 ").unwrap(), CostWeights::new(2.0, 0.5).unwrap());
        assert!(parse_weights("1").is_err());
        assert!(parse_weights("-1,1").is_err());
        assert!(parse_weights("a,b").is_err());
    }

    #[test]
    fn fractions_parse() {
        assert_eq!(parse_fractions("0.02,0.1").unwrap(), vec![0.02, 0.1]);
        assert!(parse_fractions("0").is_err());
        assert!(parse_fractions("1.5").is_err());
    }

    #[test]
    fn slope_of_cubic() {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0]
            .iter()
            .map(|&n| (n.ln(), (2.0 * n.powi(3)).ln()))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn rounding() {
        assert_eq!(round6(7.0000000001), 7.0);
        assert_eq!(round6(-0.0000000001), 0.0);
        assert_eq!(round6(1.23456789), 1.234568);
    }

    #[test]
    fn urgency_mode() {
        assert_eq!("both".parse::<UrgencyMode>().unwrap().flags(), &[false, true]);
        assert!("maybe".parse::<UrgencyMode>().is_err());
    }
}
