//! Pairwise FTR values, the dominance matrix and the strength-based pick.

use ftr_maint::ftr::{build_dominance, ftr, select};
use ftr_maint::taskmodel::{CostWeights, MaintTask};

fn main() {
    let tasks = [
        MaintTask::new(0, 0.0, 4.0, 6.0),
        MaintTask::new(1, 1.0, 1.0, 3.0),
        MaintTask::new(2, 2.0, 2.0, 9.0),
        MaintTask::new(3, 0.5, 3.0, 5.0),
    ];
    let t = 1.0;
    let w = CostWeights::UNIT;
    println!("FTR(i, j) at t = {t}:");
    for i in &tasks {
        let row: Vec<String> = tasks.iter().map(|j| format!("{:6.1}", ftr(i, j, t, w))).collect();
        println!("  {}", row.join(" "));
    }
    let state = build_dominance(&tasks, t, w);
    println!("dominance matrix and strengths:");
    for r in 0..state.len() {
        let row: Vec<String> = (0..state.len()).map(|c| state.omega(r, c).to_string()).collect();
        println!("  {}  f = {}", row.join(" "), state.strength[r]);
    }
    let pick = select(&tasks, t, w).expect("nonempty");
    println!("selected task index {}", tasks[pick].index);
}
