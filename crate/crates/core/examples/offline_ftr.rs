//! Offline FTR schedule against the exact optimum and the SRPT lower bound.

use ftr_maint::offline::{gap_report, schedule_ftr, OfflineInstance};
use ftr_maint::simgen::random_offline_tasks;
use ftr_maint::taskmodel::CostWeights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = OfflineInstance::single(random_offline_tasks(7, 42))?;
    let schedule = schedule_ftr(&inst);
    println!(
        "{:>4} {:>8} {:>8} {:>8} {:>8}",
        "task", "release", "start", "end", "due"
    );
    for e in &schedule.entries {
        println!(
            "{:>4} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            e.task.index, e.task.release, e.start, e.completion, e.task.due
        );
    }
    let report = gap_report(&inst)?;
    println!("FTR cost     {:.3}", report.ftr_cost);
    println!("optimum      {:.3}", report.optimal.unwrap_or(f64::NAN));
    println!("lower bound  {:.3}", report.lower_bound.unwrap_or(f64::NAN));

    let two = OfflineInstance::new(random_offline_tasks(7, 42), 2, CostWeights::UNIT)?;
    let report = gap_report(&two)?;
    println!(
        "two processors: FTR {:.3}, optimum {:.3}",
        report.ftr_cost,
        report.optimal.unwrap_or(f64::NAN)
    );
    Ok(())
}
