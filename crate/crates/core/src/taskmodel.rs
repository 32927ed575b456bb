//! Machines, preventive tasks, schedules and their flow-time plus tardiness cost.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::reliability::{ReliabilityError, ReliabilityModel, Thresholds};

/// Slack allowed when comparing dates read back from rounded output.
pub const TIME_TOL: f64 = 1e-6;

/// Identifies the `seq`-th preventive task of machine `machine_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaskKey {
    pub machine_id: u32,
    pub seq: u32,
}

impl fmt::Display for TaskKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.machine_id, self.seq)
    }
}

/// One preventive maintenance task.
///
/// `index` orders tasks for tie-breaking: smaller wins. It is assigned at
/// creation (machine-major, then sequence number) and never changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaintTask {
    pub key: TaskKey,
    pub index: u64,
    pub release: f64,
    pub processing: f64,
    pub due: f64,
}

impl MaintTask {
    /// Free-standing task, keyed by its index.
    pub fn new(index: u64, release: f64, processing: f64, due: f64) -> Self {
        Self {
            key: TaskKey {
                machine_id: index as u32,
                seq: 1,
            },
            index,
            release,
            processing,
            due,
        }
    }
}

/// Weights of the flow-time and tardiness parts of the cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub flow: f64,
    pub tardy: f64,
}

impl CostWeights {
    pub const UNIT: CostWeights = CostWeights { flow: 1.0, tardy: 1.0 };

    pub fn new(flow: f64, tardy: f64) -> Option<Self> {
        (flow >= 0.0 && tardy >= 0.0 && flow.is_finite() && tardy.is_finite()).then_some(Self { flow, tardy })
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::UNIT
    }

    /// Cost of one task completing at `completion`.
    pub fn task_cost(&self, task: &MaintTask, completion: f64) -> f64 {
        self.flow * (completion - task.release) + self.tardy * (completion - task.due).max(0.0)
    }
}

impl Default for CostWeights {
    fn default() -> Self {
        Self::UNIT
    }
}

/// A machine together with the durations derived from its thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub id: u32,
    pub site: u32,
    pub index_in_site: u32,
    pub reliability: ReliabilityModel,
    pub thresholds: Thresholds,
    /// Time from renewal to the next release date.
    pub tau1: f64,
    /// Time from renewal to the next due date.
    pub tau2: f64,
    /// Processing time of one preventive task, `1 / mu`.
    pub mtp: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MachineError {
    #[error(transparent)]
    Reliability(#[from] ReliabilityError),
    #[error("machine {id}: tau2 = {tau2} must exceed tau1 = {tau1}")]
    DueBeforeRelease { id: u32, tau1: f64, tau2: f64 },
    #[error("machine {id}: epsilon must be positive, got {epsilon}")]
    BadEpsilon { id: u32, epsilon: f64 },
}

impl Machine {
    /// Both durations are inverted from the two thresholds.
    pub fn from_thresholds(
        id: u32,
        site: u32,
        reliability: ReliabilityModel,
        thresholds: Thresholds,
    ) -> Result<Self, MachineError> {
        let tau1 = reliability.threshold_duration(thresholds.alpha1())?;
        let tau2 = reliability.threshold_duration(thresholds.alpha2())?;
        if tau2 <= tau1 {
            return Err(MachineError::DueBeforeRelease { id, tau1, tau2 });
        }
        Ok(Self {
            id,
            site,
            index_in_site: 0,
            reliability,
            thresholds,
            tau1,
            tau2,
            mtp: 1.0 / reliability.repair_rate(),
        })
    }

    /// `tau2 = tau1 + mtp + epsilon * mtp`; the implied second threshold is
    /// the availability reached at `tau2`.
    pub fn from_epsilon(
        id: u32,
        site: u32,
        reliability: ReliabilityModel,
        alpha1: f64,
        epsilon: f64,
    ) -> Result<Self, MachineError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(MachineError::BadEpsilon { id, epsilon });
        }
        let tau1 = reliability.threshold_duration(alpha1)?;
        let mtp = 1.0 / reliability.repair_rate();
        let tau2 = tau1 + mtp + epsilon * mtp;
        let alpha2 = reliability.availability_after(tau2)?;
        let thresholds = Thresholds::new(alpha1, alpha2)?;
        Ok(Self {
            id,
            site,
            index_in_site: 0,
            reliability,
            thresholds,
            tau1,
            tau2,
            mtp,
        })
    }

    /// Task `seq` of this machine after a renewal at `prev_completion`.
    pub fn next_task(&self, prev_completion: f64, seq: u32, index: u64) -> MaintTask {
        MaintTask {
            key: TaskKey {
                machine_id: self.id,
                seq,
            },
            index,
            release: prev_completion + self.tau1,
            processing: self.mtp,
            due: prev_completion + self.tau2,
        }
    }
}

/// A task placed on a processor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub task: MaintTask,
    pub processor: usize,
    pub start: f64,
    pub completion: f64,
}

impl ScheduleEntry {
    pub fn new(task: MaintTask, processor: usize, start: f64) -> Self {
        Self {
            task,
            processor,
            start,
            completion: start + task.processing,
        }
    }

    pub fn flow_time(&self) -> f64 {
        self.completion - self.task.release
    }

    pub fn tardiness(&self) -> f64 {
        (self.completion - self.task.due).max(0.0)
    }
}

/// Ordered list of placed tasks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

impl Schedule {
    pub fn cost(&self, weights: CostWeights) -> f64 {
        total_cost(&self.entries, weights)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Task keys in the order they were placed.
    pub fn sequence(&self) -> Vec<TaskKey> {
        self.entries.iter().map(|e| e.task.key).collect()
    }
}

pub fn total_cost(entries: &[ScheduleEntry], weights: CostWeights) -> f64 {
    entries
        .iter()
        .map(|e| weights.flow * e.flow_time() + weights.tardy * e.tardiness())
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Overlap {
        processor: usize,
        first: TaskKey,
        second: TaskKey,
    },
    EarlyStart {
        task: TaskKey,
        start: f64,
        release: f64,
    },
    Preempted {
        task: TaskKey,
        start: f64,
        completion: f64,
        processing: f64,
    },
    Duplicate {
        task: TaskKey,
    },
    UnknownTask {
        task: TaskKey,
    },
    ProcessorOutOfRange {
        task: TaskKey,
        processor: usize,
        q: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap {
                processor,
                first,
                second,
            } => {
                write!(f, "tasks {first} and {second} overlap on processor {processor}")
            }
            Violation::EarlyStart { task, start, release } => {
                write!(f, "task {task} starts at {start:.6} before its release {release:.6}")
            }
            Violation::Preempted {
                task,
                start,
                completion,
                processing,
            } => write!(
                f,
                "task {task} runs {start:.6}..{completion:.6} but needs {processing:.6}"
            ),
            Violation::Duplicate { task } => write!(f, "task {task} is scheduled twice"),
            Violation::UnknownTask { task } => write!(f, "task {task} is not part of the instance"),
            Violation::ProcessorOutOfRange { task, processor, q } => {
                write!(f, "task {task} uses processor {processor} but only {q} exist")
            }
        }
    }
}

/// Checks a schedule against the task set it claims to schedule.
///
/// Tasks may be left unscheduled. Dates are compared with [`TIME_TOL`] slack.
pub fn validate_schedule(entries: &[ScheduleEntry], tasks: &[MaintTask], q: usize) -> Result<(), Violation> {
    let known: HashSet<TaskKey> = tasks.iter().map(|t| t.key).collect();
    let mut seen = HashSet::with_capacity(entries.len());
    for e in entries {
        let key = e.task.key;
        if !known.contains(&key) {
            return Err(Violation::UnknownTask { task: key });
        }
        if !seen.insert(key) {
            return Err(Violation::Duplicate { task: key });
        }
        if e.processor >= q {
            return Err(Violation::ProcessorOutOfRange {
                task: key,
                processor: e.processor,
                q,
            });
        }
        if e.start + TIME_TOL < e.task.release {
            return Err(Violation::EarlyStart {
                task: key,
                start: e.start,
                release: e.task.release,
            });
        }
        if ((e.completion - e.start) - e.task.processing).abs() > TIME_TOL {
            return Err(Violation::Preempted {
                task: key,
                start: e.start,
                completion: e.completion,
                processing: e.task.processing,
            });
        }
    }

    let mut by_processor: Vec<Vec<&ScheduleEntry>> = vec![Vec::new(); q];
    for e in entries {
        by_processor[e.processor].push(e);
    }
    for (processor, list) in by_processor.iter_mut().enumerate() {
        list.sort_by(|a, b| a.start.total_cmp(&b.start));
        for pair in list.windows(2) {
            if pair[1].start + TIME_TOL < pair[0].completion {
                return Err(Violation::Overlap {
                    processor,
                    first: pair[0].task.key,
                    second: pair[1].task.key,
                });
            }
        }
    }
    Ok(())
}
