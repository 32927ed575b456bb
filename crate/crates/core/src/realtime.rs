//! On-line dispatching of the preventive task stream over a finite horizon.
//!
//! Each machine exposes exactly one pending task at a time: its next
//! release and due date follow from the completion of the previous task, so
//! later tasks do not exist until the current one is placed. Whenever a
//! processor frees up, the dispatcher picks among the pending tasks with the
//! FTR/strength procedure, restricted to the already-released (urgent)
//! tasks when the urgency criterion is on and at least one is released.

use serde::Serialize;
use thiserror::Error;

use crate::ftr;
use crate::offline::earliest_free;
use crate::taskmodel::{CostWeights, Machine, MaintTask, ScheduleEntry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispatchError {
    #[error("earliest free processor time {t} is past the horizon {horizon}")]
    HorizonExhausted { t: f64, horizon: f64 },
    #[error("no pending task is released before the horizon {horizon}")]
    NoWorkInHorizon { horizon: f64 },
    #[error("invalid system: {0}")]
    Invalid(String),
}

/// One machine's renewal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineState {
    pub machine: Machine,
    /// Completion of the last placed task, 0 at the horizon start.
    pub last_completion: f64,
    pub completed: u32,
    pub pending: MaintTask,
}

fn task_index(position: usize, seq: u32) -> u64 {
    ((position as u64) << 32) | seq as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub clock: f64,
    pub horizon: f64,
    pub machines: Vec<MachineState>,
    /// Time each processor becomes free.
    pub processors: Vec<f64>,
    pub log: Vec<ScheduleEntry>,
}

impl SystemState {
    pub fn new(machines: Vec<Machine>, q: usize, horizon: f64) -> Result<Self, DispatchError> {
        if q == 0 {
            return Err(DispatchError::Invalid("at least one processor is required".into()));
        }
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(DispatchError::Invalid(format!("horizon = {horizon}")));
        }
        let machines = machines
            .into_iter()
            .enumerate()
            .map(|(pos, machine)| {
                let pending = machine.next_task(0.0, 1, task_index(pos, 1));
                MachineState {
                    machine,
                    last_completion: 0.0,
                    completed: 0,
                    pending,
                }
            })
            .collect();
        Ok(Self {
            clock: 0.0,
            horizon,
            machines,
            processors: vec![0.0; q],
            log: Vec::new(),
        })
    }

    pub fn q(&self) -> usize {
        self.processors.len()
    }
}

/// Machines whose pending task is released at the state's clock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UrgencySet {
    pub t: f64,
    pub members: Vec<u32>,
}

impl UrgencySet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

fn is_urgent(m: &MachineState, t: f64) -> bool {
    // pending.release == last_completion + tau1, so this is t - last_completion >= tau1
    m.pending.release <= t
}

pub fn urgency_set(state: &SystemState) -> UrgencySet {
    UrgencySet {
        t: state.clock,
        members: state
            .machines
            .iter()
            .filter(|m| is_urgent(m, state.clock))
            .map(|m| m.machine.id)
            .collect(),
    }
}

/// Places one task on the earliest-free processor.
///
/// Pending tasks released at or after the horizon are never candidates.
pub fn dispatch_step(
    state: &mut SystemState,
    use_urgency: bool,
    weights: CostWeights,
) -> Result<ScheduleEntry, DispatchError> {
    let processor = earliest_free(&state.processors);
    let t = state.processors[processor];
    if t >= state.horizon {
        return Err(DispatchError::HorizonExhausted {
            t,
            horizon: state.horizon,
        });
    }
    state.clock = t;

    let in_horizon: Vec<usize> = (0..state.machines.len())
        .filter(|&k| state.machines[k].pending.release < state.horizon)
        .collect();
    if in_horizon.is_empty() {
        return Err(DispatchError::NoWorkInHorizon { horizon: state.horizon });
    }
    let urgent: Vec<usize> = in_horizon
        .iter()
        .copied()
        .filter(|&k| is_urgent(&state.machines[k], t))
        .collect();
    let search = if use_urgency && !urgent.is_empty() {
        urgent
    } else {
        in_horizon
    };

    let candidates: Vec<MaintTask> = search.iter().map(|&k| state.machines[k].pending).collect();
    let pick = ftr::select(&candidates, t, weights).expect("search set is nonempty");
    let position = search[pick];

    let ms = &mut state.machines[position];
    let entry = ScheduleEntry::new(ms.pending, processor, t.max(ms.pending.release));
    ms.last_completion = entry.completion;
    ms.completed += 1;
    let seq = ms.pending.key.seq + 1;
    ms.pending = ms.machine.next_task(entry.completion, seq, task_index(position, seq));
    state.processors[processor] = entry.completion;
    state.log.push(entry);
    Ok(entry)
}

/// Horizon metrics of one dispatcher run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub urgency: bool,
    pub q: usize,
    pub horizon: f64,
    /// Placed tasks; those running past the horizon are included.
    pub processed: usize,
    /// Processed tasks plus tasks released inside the horizon but never placed.
    pub needed: usize,
    pub processed_cost: f64,
    pub unprocessed_cost: f64,
    /// Mean cost per processed task (0 when none).
    pub mc: f64,
    /// Mean cost per needed task (0 when none).
    pub mrc: f64,
    pub busy_time: Vec<f64>,
    pub mean_busy_time: f64,
}

/// Charges for tasks released before the horizon that were never placed.
///
/// After a machine's last placed task its chain is continued as if every
/// later task started at its release. Each such task costs its flow time and
/// tardiness truncated at the horizon end.
fn unprocessed_charges(state: &SystemState, weights: CostWeights) -> (usize, f64) {
    let h = state.horizon;
    let mut count = 0;
    let mut cost = 0.0;
    for ms in &state.machines {
        let mut task = ms.pending;
        while task.release < h {
            count += 1;
            cost += weights.task_cost(&task, h);
            let renewal = task.release + task.processing;
            task = ms.machine.next_task(renewal, task.key.seq + 1, task.index + 1);
        }
    }
    (count, cost)
}

pub fn summarize(state: &SystemState, use_urgency: bool, weights: CostWeights) -> SimReport {
    let processed = state.log.len();
    let processed_cost: f64 = state.log.iter().map(|e| weights.task_cost(&e.task, e.completion)).sum();
    let (missing, unprocessed_cost) = unprocessed_charges(state, weights);
    let needed = processed + missing;
    let mut busy_time = vec![0.0; state.q()];
    for e in &state.log {
        busy_time[e.processor] += e.task.processing;
    }
    let mean_busy_time = busy_time.iter().sum::<f64>() / state.q() as f64;
    SimReport {
        urgency: use_urgency,
        q: state.q(),
        horizon: state.horizon,
        processed,
        needed,
        processed_cost,
        unprocessed_cost,
        mc: if processed > 0 {
            processed_cost / processed as f64
        } else {
            0.0
        },
        mrc: if needed > 0 {
            (processed_cost + unprocessed_cost) / needed as f64
        } else {
            0.0
        },
        busy_time,
        mean_busy_time,
    }
}

/// Dispatches until no processor frees up before the horizon.
pub fn run_horizon(state: &mut SystemState, use_urgency: bool, weights: CostWeights) -> SimReport {
    while dispatch_step(state, use_urgency, weights).is_ok() {}
    summarize(state, use_urgency, weights)
}
