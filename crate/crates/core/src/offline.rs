//! Static scheduling of a fixed task set.
//!
//! [`schedule_ftr`] is the FTR/strength heuristic on `q` identical
//! processors, [`brute_force_optimal`] an exhaustive reference for small
//! instances, and [`lower_bound`] the preemptive SRPT bound with modified due
//! dates on one processor.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::ftr;
use crate::taskmodel::{total_cost, CostWeights, MaintTask, Schedule, ScheduleEntry};

/// Largest task count accepted by [`brute_force_optimal`].
pub const BRUTE_FORCE_MAX_TASKS: usize = 9;
/// Largest processor count accepted by [`brute_force_optimal`].
pub const BRUTE_FORCE_MAX_PROCESSORS: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OfflineError {
    #[error("instance too large for exhaustive search: {tasks} tasks on {processors} processors")]
    TooLarge { tasks: usize, processors: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfflineInstance {
    pub tasks: Vec<MaintTask>,
    pub q: usize,
    pub weights: CostWeights,
}

impl OfflineInstance {
    pub fn new(tasks: Vec<MaintTask>, q: usize, weights: CostWeights) -> Result<Self, OfflineError> {
        if q == 0 {
            return Err(OfflineError::Invalid("at least one processor is required".into()));
        }
        for t in &tasks {
            if !(t.processing > 0.0 && t.processing.is_finite()) {
                return Err(OfflineError::Invalid(format!(
                    "task {} has processing time {}",
                    t.key, t.processing
                )));
            }
            if !(t.release.is_finite() && t.due.is_finite()) {
                return Err(OfflineError::Invalid(format!("task {} has non-finite dates", t.key)));
            }
        }
        Ok(Self { tasks, q, weights })
    }

    pub fn single(tasks: Vec<MaintTask>) -> Result<Self, OfflineError> {
        Self::new(tasks, 1, CostWeights::UNIT)
    }
}

/// Processor that frees up first; the smallest index among equals.
pub(crate) fn earliest_free(free_at: &[f64]) -> usize {
    let mut best = 0;
    for (k, &t) in free_at.iter().enumerate().skip(1) {
        if t < free_at[best] {
            best = k;
        }
    }
    best
}

/// FTR/strength list scheduling from time 0.
///
/// At each decision the earliest-free processor takes the task chosen by
/// [`ftr::select`] among all unscheduled tasks, starting it at its release
/// date if that is later.
pub fn schedule_ftr(instance: &OfflineInstance) -> Schedule {
    let mut pending = instance.tasks.clone();
    pending.sort_by_key(|t| t.index);
    let mut free_at = vec![0.0; instance.q];
    let mut entries = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let processor = earliest_free(&free_at);
        let t = free_at[processor];
        let pick = ftr::select(&pending, t, instance.weights).expect("pending set is nonempty");
        let task = pending.remove(pick);
        let entry = ScheduleEntry::new(task, processor, t.max(task.release));
        free_at[processor] = entry.completion;
        entries.push(entry);
    }
    Schedule { entries }
}

/// Places `order` on one processor, each task as early as possible.
fn sequence_on(order: &[&MaintTask], processor: usize, entries: &mut Vec<ScheduleEntry>) {
    let mut free: f64 = 0.0;
    for task in order {
        let entry = ScheduleEntry::new(**task, processor, free.max(task.release));
        free = entry.completion;
        entries.push(entry);
    }
}

/// Best single-processor sequence of the tasks selected by `mask`.
fn best_sequence(tasks: &[MaintTask], mask: u32, weights: CostWeights) -> (f64, Vec<usize>) {
    let members: Vec<usize> = (0..tasks.len()).filter(|k| mask & (1 << k) != 0).collect();
    let mut best_cost = f64::INFINITY;
    let mut best_order = Vec::new();
    let count = members.len();
    // lexicographic over member positions; strict improvement keeps the first minimizer
    for order in members.iter().copied().permutations(count) {
        let mut free: f64 = 0.0;
        let mut cost = 0.0;
        for &k in &order {
            let task = &tasks[k];
            let completion = free.max(task.release) + task.processing;
            cost += weights.task_cost(task, completion);
            free = completion;
        }
        if cost < best_cost {
            best_cost = cost;
            best_order = order;
        }
    }
    if count == 0 {
        best_cost = 0.0;
    }
    (best_cost, best_order)
}

/// Exact optimum by enumeration.
///
/// One processor: every task order. Two processors: every split of the
/// tasks between the processors, each side sequenced optimally. Tasks are
/// first sorted by index so the lexicographic tie-break is stable.
pub fn brute_force_optimal(instance: &OfflineInstance) -> Result<(Schedule, f64), OfflineError> {
    let n = instance.tasks.len();
    if n > BRUTE_FORCE_MAX_TASKS || instance.q > BRUTE_FORCE_MAX_PROCESSORS {
        return Err(OfflineError::TooLarge {
            tasks: n,
            processors: instance.q,
        });
    }
    let mut tasks = instance.tasks.clone();
    tasks.sort_by_key(|t| t.index);
    let full: u32 = (1u32 << n) - 1;
    let w = instance.weights;

    let mut entries = Vec::with_capacity(n);
    if instance.q == 1 {
        let (cost, order) = best_sequence(&tasks, full, w);
        let refs: Vec<&MaintTask> = order.iter().map(|&k| &tasks[k]).collect();
        sequence_on(&refs, 0, &mut entries);
        return Ok((Schedule { entries }, cost));
    }

    let mut memo: Vec<Option<(f64, Vec<usize>)>> = vec![None; 1 << n];
    let mut best: Option<(f64, u32)> = None;
    for mask in 0..=full {
        // processor 0 takes the task with the smallest index, breaking the symmetry
        if n > 0 && mask & 1 == 0 {
            continue;
        }
        let rest = full & !mask;
        for m in [mask, rest] {
            if memo[m as usize].is_none() {
                memo[m as usize] = Some(best_sequence(&tasks, m, w));
            }
        }
        let cost = memo[mask as usize].as_ref().unwrap().0 + memo[rest as usize].as_ref().unwrap().0;
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, mask));
        }
    }
    let (cost, mask) = best.unwrap_or((0.0, 0));
    for (processor, m) in [mask, full & !mask].into_iter().enumerate() {
        let order = &memo[m as usize].as_ref().map(|(_, o)| o.clone()).unwrap_or_default();
        let refs: Vec<&MaintTask> = order.iter().map(|&k| &tasks[k]).collect();
        sequence_on(&refs, processor, &mut entries);
    }
    Ok((Schedule { entries }, cost))
}

/// Completion times of a preemptive SRPT schedule, in completion order.
///
/// Returns `(position in tasks, completion)` pairs. The running task changes
/// only at release and completion events; remaining work is tracked exactly.
pub fn srpt_completions(tasks: &[MaintTask]) -> Vec<(usize, f64)> {
    let mut by_release: Vec<usize> = (0..tasks.len()).collect();
    by_release.sort_by(|&a, &b| {
        tasks[a]
            .release
            .total_cmp(&tasks[b].release)
            .then(tasks[a].index.cmp(&tasks[b].index))
    });
    let mut remaining: Vec<f64> = tasks.iter().map(|t| t.processing).collect();
    let mut ready: Vec<usize> = Vec::new();
    let mut next = 0;
    let mut now = f64::NEG_INFINITY;
    let mut done = Vec::with_capacity(tasks.len());

    while done.len() < tasks.len() {
        if ready.is_empty() {
            now = now.max(tasks[by_release[next]].release);
        }
        while next < by_release.len() && tasks[by_release[next]].release <= now {
            ready.push(by_release[next]);
            next += 1;
        }
        let (slot, &job) = ready
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                remaining[a]
                    .total_cmp(&remaining[b])
                    .then(tasks[a].index.cmp(&tasks[b].index))
            })
            .expect("a released task is ready");
        let finish = now + remaining[job];
        let next_release = by_release.get(next).map(|&k| tasks[k].release);
        match next_release {
            Some(r) if r < finish => {
                remaining[job] -= r - now;
                now = r;
            }
            _ => {
                remaining[job] = 0.0;
                now = finish;
                ready.swap_remove(slot);
                done.push((job, finish));
            }
        }
    }
    done
}

/// SRPT flow time plus tardiness against the sorted due dates.
///
/// The `i`-th completion is charged against the `i`-th smallest due date,
/// whatever task it belongs to. Never exceeds the cost of a non-preemptive
/// single-processor schedule.
pub fn lower_bound(instance: &OfflineInstance) -> Result<f64, OfflineError> {
    if instance.q != 1 {
        return Err(OfflineError::Unsupported(format!(
            "the lower bound is defined for one processor, got {}",
            instance.q
        )));
    }
    if !instance.weights.is_unit() {
        return Err(OfflineError::Unsupported(
            "the lower bound is defined for unit weights".into(),
        ));
    }
    let tasks = &instance.tasks;
    let mut dues: Vec<f64> = tasks.iter().map(|t| t.due).collect();
    dues.sort_by(f64::total_cmp);
    let completions = srpt_completions(tasks);
    let flow: f64 = completions.iter().map(|&(k, c)| c - tasks[k].release).sum();
    let tardy: f64 = completions
        .iter()
        .zip(&dues)
        .map(|(&(_, c), &d)| (c - d).max(0.0))
        .sum();
    Ok(flow + tardy)
}

/// Heuristic cost next to the lower bound and, when small enough, the optimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub tasks: usize,
    pub ftr_cost: f64,
    pub lower_bound: Option<f64>,
    pub optimal: Option<f64>,
    pub ftr_minus_lb: Option<f64>,
    pub ftr_minus_opt: Option<f64>,
    pub opt_minus_lb: Option<f64>,
}

pub fn gap_report(instance: &OfflineInstance) -> Result<GapReport, OfflineError> {
    let ftr_cost = total_cost(&schedule_ftr(instance).entries, instance.weights);
    let lb = match lower_bound(instance) {
        Ok(v) => Some(v),
        Err(OfflineError::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let optimal = match brute_force_optimal(instance) {
        Ok((_, c)) => Some(c),
        Err(OfflineError::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(GapReport {
        tasks: instance.tasks.len(),
        ftr_cost,
        lower_bound: lb,
        optimal,
        ftr_minus_lb: lb.map(|l| ftr_cost - l),
        ftr_minus_opt: optimal.map(|o| ftr_cost - o),
        opt_minus_lb: optimal.zip(lb).map(|(o, l)| o - l),
    })
}
