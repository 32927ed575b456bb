mod common;

use ftr_maint::ftr::{build_dominance, dominates, ftr, pairwise_cost_delta, select};
use ftr_maint::offline::{brute_force_optimal, lower_bound, schedule_ftr, OfflineInstance};
use ftr_maint::realtime::{dispatch_step, summarize, SystemState};
use ftr_maint::reliability::{ExponentialModel, ReliabilityModel, Thresholds, WeibullModel};
use ftr_maint::taskmodel::{total_cost, validate_schedule, CostWeights, Machine, MaintTask, ScheduleEntry};
use proptest::prelude::*;

fn task_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..40.0f64, 0.1..10.0f64, -3.0..25.0f64).prop_map(|(r, p, slack)| (r, p, r + p + slack))
}

fn tasks_strategy(max: usize) -> impl Strategy<Value = Vec<MaintTask>> {
    prop::collection::vec(task_strategy(), 0..=max).prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(k, (r, p, d))| MaintTask::new(k as u64, r, p, d))
            .collect()
    })
}

fn weights_strategy() -> impl Strategy<Value = CostWeights> {
    (0.0..5.0f64, 0.0..5.0f64).prop_map(|(f, t)| CostWeights::new(f, t).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn ftr_difference_is_cost_difference(
        a in task_strategy(), b in task_strategy(), t in 0.0..60.0f64, w in weights_strategy()
    ) {
        let i = MaintTask::new(0, a.0, a.1, a.2);
        let j = MaintTask::new(1, b.0, b.1, b.2);
        let lhs = ftr(&i, &j, t, w) - ftr(&j, &i, t, w);
        let rhs = common::pair_sequence_cost(&i, &j, t, w) - common::pair_sequence_cost(&j, &i, t, w);
        prop_assert!(close(lhs, rhs, 1e-9), "{lhs} vs {rhs}");
        prop_assert!(close(pairwise_cost_delta(&i, &j, t, w), rhs, 1e-9));
    }

    #[test]
    fn dominance_is_antisymmetric(
        a in task_strategy(), b in task_strategy(), t in 0.0..60.0f64, w in weights_strategy()
    ) {
        let i = MaintTask::new(3, a.0, a.1, a.2);
        let j = MaintTask::new(8, b.0, b.1, b.2);
        prop_assert!(dominates(&i, &j, t, w) != dominates(&j, &i, t, w));
    }

    #[test]
    fn identical_tasks_tie_to_smaller_index(a in task_strategy(), t in 0.0..60.0f64) {
        let i = MaintTask::new(2, a.0, a.1, a.2);
        let j = MaintTask::new(5, a.0, a.1, a.2);
        prop_assert!(dominates(&i, &j, t, CostWeights::UNIT));
        prop_assert!(!dominates(&j, &i, t, CostWeights::UNIT));
    }

    #[test]
    fn strengths_count_every_pair_once(tasks in tasks_strategy(12), t in 0.0..60.0f64, w in weights_strategy()) {
        let n = tasks.len();
        let state = build_dominance(&tasks, t, w);
        let total: usize = (0..n).map(|r| (0..n).map(|c| state.omega(r, c) as usize).sum::<usize>()).sum();
        prop_assert_eq!(total, n * n.saturating_sub(1) / 2);
        for r in 0..n {
            prop_assert_eq!(state.omega(r, r), 0);
            for c in (r + 1)..n {
                prop_assert_eq!(state.omega(r, c) + state.omega(c, r), 1);
            }
        }
        if n > 0 {
            let pick = select(&tasks, t, w).unwrap();
            prop_assert!(state.strongest().contains(&pick));
        } else {
            prop_assert!(select(&tasks, t, w).is_none());
        }
    }

    #[test]
    fn same_machine_earlier_task_dominates(
        r1 in 0.0..40.0f64, dr in 0.0..20.0f64, p in 0.1..10.0f64,
        d1_slack in -3.0..20.0f64, dd in 0.0..20.0f64, t in 0.0..80.0f64,
        w in weights_strategy()
    ) {
        let first = MaintTask::new(0, r1, p, r1 + p + d1_slack);
        let second = MaintTask::new(1, r1 + dr, p, r1 + p + d1_slack + dd);
        prop_assert!(dominates(&first, &second, t, w));
    }

    #[test]
    fn moving_a_completion_later_never_lowers_cost(
        a in task_strategy(), c in 0.0..80.0f64, delay in 0.0..10.0f64, w in weights_strategy()
    ) {
        let task = MaintTask::new(0, a.0, a.1, a.2);
        prop_assert!(w.task_cost(&task, c + delay) >= w.task_cost(&task, c));
    }

    #[test]
    fn cost_is_linear_in_weights(tasks in tasks_strategy(8), w1 in weights_strategy(), w2 in weights_strategy()) {
        let inst = OfflineInstance::single(tasks).unwrap();
        let entries = schedule_ftr(&inst).entries;
        let sum = CostWeights::new(w1.flow + w2.flow, w1.tardy + w2.tardy).unwrap();
        let lhs = total_cost(&entries, sum);
        let rhs = total_cost(&entries, w1) + total_cost(&entries, w2);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn ftr_schedule_is_feasible_and_complete(tasks in tasks_strategy(15), q in 1usize..4, w in weights_strategy()) {
        let inst = OfflineInstance::new(tasks.clone(), q, w).unwrap();
        let schedule = schedule_ftr(&inst);
        prop_assert_eq!(schedule.len(), tasks.len());
        prop_assert!(validate_schedule(&schedule.entries, &tasks, q).is_ok());
        prop_assert_eq!(&schedule, &schedule_ftr(&inst));
    }

    #[test]
    fn input_order_does_not_matter(tasks in tasks_strategy(10), q in 1usize..3, rot in 0usize..10) {
        let inst = OfflineInstance::new(tasks.clone(), q, CostWeights::UNIT).unwrap();
        let mut shuffled = tasks.clone();
        shuffled.reverse();
        if !shuffled.is_empty() {
            let k = rot % shuffled.len();
            shuffled.rotate_left(k);
        }
        let other = OfflineInstance::new(shuffled, q, CostWeights::UNIT).unwrap();
        prop_assert_eq!(schedule_ftr(&inst), schedule_ftr(&other));
    }

    #[test]
    fn lower_bound_optimum_heuristic_sandwich(tasks in tasks_strategy(6)) {
        let inst = OfflineInstance::single(tasks.clone()).unwrap();
        let lb = lower_bound(&inst).unwrap();
        let (opt_schedule, opt) = brute_force_optimal(&inst).unwrap();
        let heuristic = schedule_ftr(&inst).cost(CostWeights::UNIT);
        let reference = common::exhaustive_single(&tasks, CostWeights::UNIT);
        prop_assert!(close(opt, reference, 1e-12), "{opt} vs {reference}");
        prop_assert!(close(opt_schedule.cost(CostWeights::UNIT), opt, 1e-12));
        prop_assert!(lb <= opt + 1e-9, "lb {lb} > opt {opt}");
        prop_assert!(opt <= heuristic + 1e-9, "opt {opt} > ftr {heuristic}");
    }

    #[test]
    fn two_processor_optimum_is_no_worse_than_ftr(tasks in tasks_strategy(6), w in weights_strategy()) {
        let inst = OfflineInstance::new(tasks.clone(), 2, w).unwrap();
        let (schedule, opt) = brute_force_optimal(&inst).unwrap();
        prop_assert!(validate_schedule(&schedule.entries, &tasks, 2).is_ok());
        prop_assert_eq!(schedule.len(), tasks.len());
        prop_assert!(opt <= schedule_ftr(&inst).cost(w) + 1e-9);
        let single = OfflineInstance::new(tasks, 1, w).unwrap();
        prop_assert!(opt <= brute_force_optimal(&single).unwrap().1 + 1e-9);
    }
}

fn test_machine(id: u32, tau1: f64, tau2: f64, mtp: f64) -> Machine {
    Machine {
        id,
        site: 1,
        index_in_site: id,
        reliability: ReliabilityModel::Exponential(ExponentialModel::new(0.01, 1.0 / mtp).unwrap()),
        thresholds: Thresholds::new(0.99, 0.98).unwrap(),
        tau1,
        tau2,
        mtp,
    }
}

fn machines_strategy() -> impl Strategy<Value = Vec<Machine>> {
    prop::collection::vec((1.0..20.0f64, 0.0..8.0f64, 0.2..4.0f64), 1..8).prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(k, (tau1, slack, mtp))| test_machine(k as u32 + 1, tau1, tau1 + mtp + slack, mtp))
            .collect()
    })
}

proptest! {
    #[test]
    fn dispatcher_respects_precedence_and_urgency(
        machines in machines_strategy(), q in 1usize..4, horizon in 10.0..80.0f64, urgency: bool
    ) {
        let mut state = SystemState::new(machines.clone(), q, horizon).unwrap();
        let mut steps = 0;
        loop {
            let t = state.processors.iter().copied().fold(f64::INFINITY, f64::min);
            let released_exists = state
                .machines
                .iter()
                .any(|m| m.pending.release <= t && m.pending.release < horizon);
            let entry: ScheduleEntry = match dispatch_step(&mut state, urgency, CostWeights::UNIT) {
                Ok(e) => e,
                Err(_) => break,
            };
            steps += 1;
            prop_assert!(entry.task.release < horizon);
            prop_assert!(entry.start >= t - 1e-12);
            if urgency && released_exists {
                prop_assert!(entry.task.release <= t, "urgent task skipped at {t}");
            }
            prop_assert!(steps < 10_000);
        }

        let log = state.log.clone();
        let tasks: Vec<MaintTask> = log.iter().map(|e| e.task).collect();
        prop_assert!(validate_schedule(&log, &tasks, q).is_ok());

        for m in &machines {
            let chain: Vec<&ScheduleEntry> = log.iter().filter(|e| e.task.key.machine_id == m.id).collect();
            let mut prev_completion = 0.0;
            for (k, e) in chain.iter().enumerate() {
                prop_assert_eq!(e.task.key.seq as usize, k + 1);
                prop_assert!((e.task.release - (prev_completion + m.tau1)).abs() < 1e-9);
                prop_assert!(e.start >= prev_completion + m.tau1 - 1e-9);
                prev_completion = e.completion;
            }
        }

        let report = summarize(&state, urgency, CostWeights::UNIT);
        let work: f64 = log.iter().map(|e| e.task.processing).sum();
        prop_assert!(close(report.busy_time.iter().sum::<f64>(), work, 1e-12));
        prop_assert!(close(report.mean_busy_time * q as f64, work, 1e-12));
        prop_assert!(report.processed <= report.needed);
        prop_assert!(report.unprocessed_cost >= 0.0);
        if report.processed == report.needed {
            prop_assert_eq!(report.unprocessed_cost, 0.0);
        }
    }

    #[test]
    fn exponential_threshold_round_trip(
        lambda in 1e-4..0.5f64, mu in 1e-3..2.0f64, u1 in 0.01..0.99f64, u2 in 0.01..0.99f64
    ) {
        let model = ExponentialModel::new(lambda, mu).unwrap();
        let floor = model.asymptotic_availability();
        let (hi, lo) = if u1 >= u2 { (u1, u2) } else { (u2, u1) };
        prop_assume!(hi - lo > 1e-6);
        let alpha1 = floor + hi * (1.0 - floor);
        let alpha2 = floor + lo * (1.0 - floor);
        let tau1 = model.threshold_duration(alpha1).unwrap();
        let tau2 = model.threshold_duration(alpha2).unwrap();
        prop_assert!(tau1 < tau2);
        prop_assert!((common::exponential_availability(lambda, mu, tau1) - alpha1).abs() < 1e-9);
        prop_assert!((model.availability(tau2) - alpha2).abs() < 1e-9);
        prop_assert!(model.threshold_duration(floor).is_err());
    }

    #[test]
    fn weibull_availability_never_increases(
        sigma in 5.0..200.0f64, beta in 1.0..4.0f64, mu in 0.01..2.0f64, gamma in 0.0..10.0f64
    ) {
        let model = WeibullModel::new(gamma, sigma, beta, mu).unwrap();
        prop_assert_eq!(model.availability(gamma).unwrap(), 1.0);
        let mut prev = 1.0;
        for k in 1..=40 {
            let a = model.availability(gamma + k as f64 * 3.0 * sigma / 40.0).unwrap();
            prop_assert!(a <= prev + 1e-12, "rise at step {k}: {prev} -> {a}");
            prop_assert!(a > 0.0 && a <= 1.0);
            prev = a;
        }
    }
}
