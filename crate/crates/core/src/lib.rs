//! Preventive maintenance scheduling: each task has a release date, a due
//! date and a processing time, and the cost is flow time plus tardiness.
//!
//! The crate covers the whole pipeline:
//!
//! - [`reliability`]: availability curves and their inversion into
//!   inter-maintenance durations,
//! - [`taskmodel`]: machines, task chains, schedules and their cost,
//! - [`ftr`]: the flow-time and tardiness priority rule, dominance matrix
//!   and strength-based selection,
//! - [`offline`]: static scheduling, exhaustive optimum and the SRPT lower
//!   bound,
//! - [`realtime`]: the on-line dispatcher with the urgency criterion,
//! - [`simgen`]: seeded random machine populations,
//! - [`instance`] and [`cli`]: file formats and the commands behind the
//!   `ftr-maint` binary.
//!
//! ```
//! use ftr_maint::offline::{schedule_ftr, OfflineInstance};
//! use ftr_maint::taskmodel::{CostWeights, MaintTask};
//!
//! let tasks = vec![MaintTask::new(0, 0.0, 2.0, 5.0), MaintTask::new(1, 1.0, 3.0, 4.0)];
//! let schedule = schedule_ftr(&OfflineInstance::single(tasks).unwrap());
//! assert_eq!(schedule.cost(CostWeights::UNIT), 7.0);
//! ```

pub mod cli;
pub mod ftr;
pub mod instance;
pub mod offline;
pub mod realtime;
pub mod reliability;
pub mod simgen;
pub mod taskmodel;

pub use ftr::{build_dominance, dominates, DominanceState};
pub use offline::{brute_force_optimal, lower_bound, schedule_ftr, OfflineInstance};
pub use realtime::{run_horizon, SimReport, SystemState};
pub use reliability::{ExponentialModel, ReliabilityModel, Thresholds, WeibullModel};
pub use simgen::GenConfig;
pub use taskmodel::{CostWeights, Machine, MaintTask, Schedule, ScheduleEntry};
