//! Step-by-step on-line dispatching of a small machine park.

use ftr_maint::realtime::{dispatch_step, summarize, urgency_set, SystemState};
use ftr_maint::simgen::{generate_machine, GenConfig};
use ftr_maint::taskmodel::CostWeights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GenConfig {
        machine_count: 6,
        horizon: 120.0,
        ..GenConfig::default()
    };
    let machines: Vec<_> = (0..config.machine_count)
        .map(|k| generate_machine(&config, k))
        .collect();
    for m in &machines {
        println!(
            "machine {}: tau1 {:.2}  tau2 {:.2}  mtp {:.2}",
            m.id, m.tau1, m.tau2, m.mtp
        );
    }
    let mut state = SystemState::new(machines, 1, config.horizon)?;
    while let Ok(entry) = dispatch_step(&mut state, true, CostWeights::UNIT) {
        println!(
            "t={:7.2}  urgent {:?}  -> machine {} task {} runs {:.2}..{:.2}",
            state.clock,
            urgency_set(&state).members,
            entry.task.key.machine_id,
            entry.task.key.seq,
            entry.start,
            entry.completion
        );
    }
    let report = summarize(&state, true, CostWeights::UNIT);
    println!(
        "processed {}/{}  MC {:.3}  MRC {:.3}  busy {:.2}",
        report.processed, report.needed, report.mc, report.mrc, report.mean_busy_time
    );
    Ok(())
}
