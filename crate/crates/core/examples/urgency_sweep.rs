//! Processor sweep with and without the urgency criterion.
//!
//! `cargo run --release --example urgency_sweep -- [machines] [seed]`

use ftr_maint::cli::{simulate, Population, SimulateOptions, UrgencyMode};
use ftr_maint::simgen::GenConfig;
use ftr_maint::taskmodel::CostWeights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let machines: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let config = GenConfig {
        machine_count: machines,
        seed,
        ..GenConfig::default()
    };
    let out = simulate(&SimulateOptions {
        population: Population::Generated(config),
        urgency: UrgencyMode::Both,
        weights: CostWeights::UNIT,
        fractions: None,
        seed: None,
        horizon: None,
    })?;
    println!(
        "{:>5} {:>4} | {:>9} {:>9} {:>11} | {:>9} {:>9} {:>11}",
        "frac", "q", "MRC off", "busy off", "done off", "MRC on", "busy on", "done on"
    );
    let mut rows = out.rows;
    rows.sort_by(|a, b| {
        a.fraction
            .total_cmp(&b.fraction)
            .then(a.report.urgency.cmp(&b.report.urgency))
    });
    for pair in rows.chunks(2) {
        let (off, on) = (&pair[0].report, &pair[1].report);
        println!(
            "{:>5.2} {:>4} | {:>9.3} {:>9.2} {:>5}/{:<5} | {:>9.3} {:>9.2} {:>5}/{:<5}",
            pair[0].fraction,
            pair[0].q,
            off.mrc,
            off.mean_busy_time,
            off.processed,
            off.needed,
            on.mrc,
            on.mean_busy_time,
            on.processed,
            on.needed
        );
    }
    Ok(())
}
