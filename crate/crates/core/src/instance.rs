//! JSON instance files.
//!
//! ```json
//! {
//!   "horizon_days": 365.0,
//!   "processors": 2,
//!   "machines": [
//!     { "id": 1, "site": 1,
//!       "model": { "type": "exp", "lambda": 0.01, "mu": 0.1 },
//!       "alpha1": 0.95,
//!       "tau2_rule": { "epsilon": 0.3 } }
//!   ],
//!   "tasks": [ { "release": 0.0, "processing": 2.0, "due": 5.0 } ]
//! }
//! ```
//!
//! `model.type` is `"exp"` (`lambda`, `mu`) or `"weibull"` (`gamma`,
//! `sigma`, `beta`, `mu`). `tau2_rule` is either `{"epsilon": e}`, giving
//! `tau2 = tau1 + (1 + e) * mtp`, or `{"alpha2": a}`, inverting the second
//! threshold. `tasks` lists free-standing tasks for the offline commands;
//! when it is empty those commands use the first task of every machine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reliability::{ExponentialModel, ReliabilityError, ReliabilityModel, Thresholds, WeibullModel};
use crate::taskmodel::{Machine, MachineError, MaintTask, TaskKey};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot parse instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("machine {id}: {source}")]
    Machine { id: u32, source: MachineError },
    #[error("task {position}: {reason}")]
    Task { position: usize, reason: String },
    #[error("duplicate machine id {0}")]
    DuplicateMachine(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ModelSpec {
    #[serde(rename = "exp")]
    Exponential { lambda: f64, mu: f64 },
    #[serde(rename = "weibull")]
    Weibull { gamma: f64, sigma: f64, beta: f64, mu: f64 },
}

impl ModelSpec {
    pub fn build(&self) -> Result<ReliabilityModel, ReliabilityError> {
        Ok(match *self {
            ModelSpec::Exponential { lambda, mu } => ReliabilityModel::Exponential(ExponentialModel::new(lambda, mu)?),
            ModelSpec::Weibull { gamma, sigma, beta, mu } => {
                ReliabilityModel::Weibull(WeibullModel::new(gamma, sigma, beta, mu)?)
            }
        })
    }
}

impl From<ReliabilityModel> for ModelSpec {
    fn from(model: ReliabilityModel) -> Self {
        match model {
            ReliabilityModel::Exponential(m) => ModelSpec::Exponential {
                lambda: m.lambda(),
                mu: m.mu(),
            },
            ReliabilityModel::Weibull(m) => ModelSpec::Weibull {
                gamma: m.gamma(),
                sigma: m.sigma(),
                beta: m.beta(),
                mu: m.mu(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Tau2Rule {
    Epsilon { epsilon: f64 },
    Alpha2 { alpha2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineSpec {
    pub id: u32,
    #[serde(default = "one")]
    pub site: u32,
    pub model: ModelSpec,
    pub alpha1: f64,
    pub tau2_rule: Tau2Rule,
}

fn one() -> u32 {
    1
}

impl MachineSpec {
    pub fn build(&self) -> Result<Machine, MachineError> {
        let model = self.model.build()?;
        match self.tau2_rule {
            Tau2Rule::Epsilon { epsilon } => Machine::from_epsilon(self.id, self.site, model, self.alpha1, epsilon),
            Tau2Rule::Alpha2 { alpha2 } => {
                Machine::from_thresholds(self.id, self.site, model, Thresholds::new(self.alpha1, alpha2)?)
            }
        }
    }

    /// Describes a machine through the epsilon rule.
    pub fn from_machine(machine: &Machine) -> Self {
        let epsilon = (machine.tau2 - machine.tau1 - machine.mtp) / machine.mtp;
        Self {
            id: machine.id,
            site: machine.site,
            model: machine.reliability.into(),
            alpha1: machine.thresholds.alpha1(),
            tau2_rule: Tau2Rule::Epsilon { epsilon },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub release: f64,
    pub processing: f64,
    pub due: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine_id: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_horizon")]
    pub horizon_days: f64,
    #[serde(default = "default_processors")]
    pub processors: usize,
    #[serde(default)]
    pub machines: Vec<MachineSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskSpec>,
}

fn default_horizon() -> f64 {
    365.0
}

fn default_processors() -> usize {
    1
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_machines(machines: &[Machine], processors: usize, horizon: f64) -> Self {
        Self {
            horizon_days: horizon,
            processors,
            machines: machines.iter().map(MachineSpec::from_machine).collect(),
            tasks: Vec::new(),
        }
    }

    pub fn build_machines(&self) -> Result<Vec<Machine>, InstanceError> {
        let mut seen = std::collections::HashSet::new();
        self.machines
            .iter()
            .enumerate()
            .map(|(pos, spec)| {
                if !seen.insert(spec.id) {
                    return Err(InstanceError::DuplicateMachine(spec.id));
                }
                let mut m = spec
                    .build()
                    .map_err(|source| InstanceError::Machine { id: spec.id, source })?;
                m.index_in_site = pos as u32 + 1;
                Ok(m)
            })
            .collect()
    }

    /// Offline task set: the listed tasks, or every machine's first task.
    ///
    /// Listed tasks get their list position as tie-break index; machine
    /// tasks are ordered by machine position.
    pub fn offline_tasks(&self) -> Result<Vec<MaintTask>, InstanceError> {
        if self.tasks.is_empty() {
            let machines = self.build_machines()?;
            return Ok(machines
                .iter()
                .enumerate()
                .map(|(pos, m)| m.next_task(0.0, 1, pos as u64))
                .collect());
        }
        let mut keys = std::collections::HashSet::new();
        self.tasks
            .iter()
            .enumerate()
            .map(|(pos, spec)| {
                let reason = |r: &str| InstanceError::Task {
                    position: pos,
                    reason: r.to_string(),
                };
                if !(spec.processing > 0.0 && spec.processing.is_finite()) {
                    return Err(reason("processing time must be positive"));
                }
                if !(spec.release.is_finite() && spec.due.is_finite()) {
                    return Err(reason("dates must be finite"));
                }
                let key = TaskKey {
                    machine_id: spec.machine_id.unwrap_or(pos as u32),
                    seq: spec.seq.unwrap_or(1),
                };
                if !keys.insert(key) {
                    return Err(reason("duplicate (machine_id, seq)"));
                }
                Ok(MaintTask {
                    key,
                    index: pos as u64,
                    release: spec.release,
                    processing: spec.processing,
                    due: spec.due,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = r#"{
          "horizon_days": 100.0,
          "processors": 2,
          "machines": [
            { "id": 1, "site": 1, "model": { "type": "exp", "lambda": 0.01, "mu": 0.1 },
              "alpha1": 0.95, "tau2_rule": { "epsilon": 0.3 } },
            { "id": 2, "model": { "type": "weibull", "gamma": 0.0, "sigma": 100.0, "beta": 2.0, "mu": 0.5 },
              "alpha1": 0.95, "tau2_rule": { "alpha2": 0.9 } }
          ],
          "tasks": [ { "release": 0.0, "processing": 2.0, "due": 5.0 } ]
        }"#;
        let inst = InstanceFile::parse(text).unwrap();
        let machines = inst.build_machines().unwrap();
        assert_eq!(machines.len(), 2);
        assert!((machines[0].tau1 - 7.259).abs() < 1e-3);
        assert!((machines[0].tau2 - machines[0].tau1 - 13.0).abs() < 1e-9);
        assert!(machines[1].tau2 > machines[1].tau1);
        assert_eq!(inst.offline_tasks().unwrap().len(), 1);
    }

    #[test]
    fn defaults_and_first_tasks() {
        let inst = InstanceFile::parse(
            r#"{"machines":[{"id":4,"model":{"type":"exp","lambda":0.01,"mu":0.1},"alpha1":0.95,"tau2_rule":{"epsilon":0.5}}]}"#,
        )
        .unwrap();
        assert_eq!(inst.horizon_days, 365.0);
        assert_eq!(inst.processors, 1);
        let tasks = inst.offline_tasks().unwrap();
        assert_eq!(tasks[0].key, TaskKey { machine_id: 4, seq: 1 });
        assert!((tasks[0].processing - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            InstanceFile::parse("{ not json"),
            Err(InstanceError::Parse(_))
        ));
        assert!(InstanceFile::parse(r#"{"bogus": 1}"#).is_err());
        let unreachable = InstanceFile::parse(
            r#"{"machines":[{"id":1,"model":{"type":"exp","lambda":0.01,"mu":0.1},"alpha1":0.5,"tau2_rule":{"epsilon":0.3}}]}"#,
        )
        .unwrap();
        assert!(matches!(
            unreachable.build_machines(),
            Err(InstanceError::Machine { id: 1, .. })
        ));
        let bad_task = InstanceFile::parse(r#"{"tasks":[{"release":0,"processing":0,"due":1}]}"#).unwrap();
        assert!(bad_task.offline_tasks().is_err());
    }

    #[test]
    fn machines_round_trip() {
        let inst = InstanceFile::parse(
            r#"{"machines":[{"id":1,"model":{"type":"exp","lambda":0.004,"mu":0.5},"alpha1":0.995,"tau2_rule":{"epsilon":0.25}}]}"#,
        )
        .unwrap();
        let machines = inst.build_machines().unwrap();
        let again = InstanceFile::parse(&InstanceFile::from_machines(&machines, 1, 365.0).to_json())
            .unwrap()
            .build_machines()
            .unwrap();
        assert!((again[0].tau2 - machines[0].tau2).abs() < 1e-9);
        assert_eq!(again[0].tau1, machines[0].tau1);
    }
}
