//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use ftr_maint::{CostWeights, MaintTask};

/// Cost of running `first` then `second` back to back from `t`, each as early as possible.
pub fn pair_sequence_cost(first: &MaintTask, second: &MaintTask, t: f64, w: CostWeights) -> f64 {
    let c1 = t.max(first.release) + first.processing;
    let c2 = c1.max(second.release) + second.processing;
    let cost = |task: &MaintTask, c: f64| w.flow * (c - task.release) + w.tardy * (c - task.due).max(0.0);
    cost(first, c1) + cost(second, c2)
}

/// Single-processor cost of a fixed order starting at 0.
pub fn sequence_cost(order: &[&MaintTask], w: CostWeights) -> f64 {
    let mut free = 0.0f64;
    let mut cost = 0.0;
    for task in order {
        let c = free.max(task.release) + task.processing;
        cost += w.flow * (c - task.release) + w.tardy * (c - task.due).max(0.0);
        free = c;
    }
    cost
}

/// Minimum single-processor cost over all orders (Heap's algorithm).
pub fn exhaustive_single(tasks: &[MaintTask], w: CostWeights) -> f64 {
    let mut perm: Vec<&MaintTask> = tasks.iter().collect();
    let n = perm.len();
    let mut best = sequence_cost(&perm, w);
    let mut counters = vec![0usize; n];
    let mut k = 0;
    while k < n {
        if counters[k] < k {
            if k % 2 == 0 {
                perm.swap(0, k);
            } else {
                perm.swap(counters[k], k);
            }
            best = best.min(sequence_cost(&perm, w));
            counters[k] += 1;
            k = 0;
        } else {
            counters[k] = 0;
            k += 1;
        }
    }
    best
}

/// Weibull availability from the unshifted closed form, composite trapezoid on `steps` panels.
///
/// Only usable while `exp(g(u))` stays finite.
pub fn weibull_trapezoid(gamma: f64, sigma: f64, beta: f64, mu: f64, t: f64, steps: usize) -> f64 {
    let u = (t - gamma) / sigma;
    if u == 0.0 {
        return 1.0;
    }
    let ms = mu * sigma;
    let g = |x: f64| ms * x + x.powf(beta);
    let h = u / steps as f64;
    let mut sum = 0.5 * (g(0.0).exp() + g(u).exp());
    for k in 1..steps {
        sum += g(k as f64 * h).exp();
    }
    (-g(u)).exp() * (1.0 + ms * sum * h)
}

/// Exponential availability `elapsed` after a renewal.
pub fn exponential_availability(lambda: f64, mu: f64, elapsed: f64) -> f64 {
    let s = lambda + mu;
    mu / s + lambda / s * (-s * elapsed).exp()
}
