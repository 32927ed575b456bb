//! The flow-time and tardiness rule (FTR).
//!
//! For two tasks `i`, `j` appended at time `t` to a partial schedule,
//! `ftr(i, j, t) - ftr(j, i, t)` equals the extra cost of running `i` first
//! rather than `j` first. A task dominates another when its FTR value is
//! not larger; exact ties go to the smaller task index, which makes the
//! relation a strict comparison for every pair (though not a transitive one).
//!
//! The dominance matrix over a candidate set and its row sums (strengths)
//! drive task selection: keep the tasks of maximal strength and repeat on
//! that subset until one remains.

use crate::taskmodel::{CostWeights, MaintTask};

/// Relative tolerance below which two FTR values are a tie.
pub const TIE_RTOL: f64 = 1e-12;

fn ready(task: &MaintTask, t: f64) -> f64 {
    task.release.max(t)
}

/// `2 * max(r, t) + p`
pub fn prtf(task: &MaintTask, t: f64) -> f64 {
    2.0 * ready(task, t) + task.processing
}

/// `max(r, t) + max(max(r, t) + p, d)`
pub fn prtt(task: &MaintTask, t: f64) -> f64 {
    let start = ready(task, t);
    start + (start + task.processing).max(task.due)
}

pub fn q1(i: &MaintTask, j: &MaintTask, t: f64) -> f64 {
    ready(i, t) + ready(j, t)
}

pub fn q2(i: &MaintTask, j: &MaintTask, t: f64) -> f64 {
    ready(i, t).max(i.due - i.processing) + ready(j, t).max(j.due - j.processing)
}

/// Priority of `i` over `j` at time `t`; smaller is better.
///
/// With unit weights this is the plain FTR, otherwise its weighted form.
pub fn ftr(i: &MaintTask, j: &MaintTask, t: f64, weights: CostWeights) -> f64 {
    weights.flow * prtf(i, t).max(q1(i, j, t)) + weights.tardy * prtt(i, t).max(q2(i, j, t))
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RTOL * a.abs().max(b.abs())
}

/// Whether `i` should run before `j` when both are appended at `t`.
pub fn dominates(i: &MaintTask, j: &MaintTask, t: f64, weights: CostWeights) -> bool {
    let a = ftr(i, j, t, weights);
    let b = ftr(j, i, t, weights);
    if tied(a, b) {
        i.index < j.index
    } else {
        a < b
    }
}

/// Cost of running `first` then `second` from time `t`, each as early as possible.
fn pair_cost(first: &MaintTask, second: &MaintTask, t: f64, weights: CostWeights) -> f64 {
    let c_first = first.release.max(t) + first.processing;
    let c_second = c_first.max(second.release.max(t)) + second.processing;
    weights.task_cost(first, c_first) + weights.task_cost(second, c_second)
}

/// Cost of `i` then `j` minus cost of `j` then `i`, both appended at `t`.
///
/// Computed by explicitly building both two-task sequences, so it shares no
/// code path with [`ftr`].
pub fn pairwise_cost_delta(i: &MaintTask, j: &MaintTask, t: f64, weights: CostWeights) -> f64 {
    pair_cost(i, j, t, weights) - pair_cost(j, i, t, weights)
}

/// Dominance matrix and strength vector over a candidate set at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceState {
    pub t: f64,
    pub task_indices: Vec<u64>,
    n: usize,
    omega: Vec<u8>,
    pub strength: Vec<usize>,
}

impl DominanceState {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `1` when candidate `row` dominates candidate `col`.
    pub fn omega(&self, row: usize, col: usize) -> u8 {
        self.omega[row * self.n + col]
    }

    pub fn max_strength(&self) -> Option<usize> {
        self.strength.iter().copied().max()
    }

    /// Positions (into the candidate list) holding the maximal strength.
    pub fn strongest(&self) -> Vec<usize> {
        match self.max_strength() {
            Some(best) => (0..self.n).filter(|&k| self.strength[k] == best).collect(),
            None => Vec::new(),
        }
    }
}

/// Fills the dominance matrix for every ordered pair of `candidates`.
pub fn build_dominance(candidates: &[MaintTask], t: f64, weights: CostWeights) -> DominanceState {
    let refs: Vec<&MaintTask> = candidates.iter().collect();
    build_dominance_refs(&refs, t, weights)
}

fn build_dominance_refs(candidates: &[&MaintTask], t: f64, weights: CostWeights) -> DominanceState {
    let n = candidates.len();
    let mut omega = vec![0u8; n * n];
    let mut strength = vec![0usize; n];
    for a in 0..n {
        for b in (a + 1)..n {
            // one evaluation per unordered pair; the relation is antisymmetric
            if dominates(candidates[a], candidates[b], t, weights) {
                omega[a * n + b] = 1;
                strength[a] += 1;
            } else {
                omega[b * n + a] = 1;
                strength[b] += 1;
            }
        }
    }
    DominanceState {
        t,
        task_indices: candidates.iter().map(|c| c.index).collect(),
        n,
        omega,
        strength,
    }
}

/// Picks one task by repeatedly keeping the maximal-strength subset.
///
/// Returns a position into `candidates`. When a round fails to shrink the
/// subset (a dominance cycle), the smallest task index in it wins.
pub fn select(candidates: &[MaintTask], t: f64, weights: CostWeights) -> Option<usize> {
    let mut pool: Vec<usize> = (0..candidates.len()).collect();
    pool.sort_by_key(|&k| candidates[k].index);
    loop {
        match pool.len() {
            0 => return None,
            1 => return Some(pool[0]),
            _ => {}
        }
        let refs: Vec<&MaintTask> = pool.iter().map(|&k| &candidates[k]).collect();
        let state = build_dominance_refs(&refs, t, weights);
        let next: Vec<usize> = state.strongest().into_iter().map(|pos| pool[pos]).collect();
        if next.len() == pool.len() {
            // pool is sorted by index
            return Some(pool[0]);
        }
        pool = next;
    }
}
