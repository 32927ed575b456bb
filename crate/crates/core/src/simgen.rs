//! Random machine populations and processor sweeps.
//!
//! Machine `k` of a population is drawn from its own ChaCha8 stream: the
//! generator is seeded with the configuration seed and then switched to
//! stream `k`. A machine therefore depends only on `(seed, k)`, which keeps
//! populations identical across platforms and lets them be built in any
//! order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::reliability::{ExponentialModel, ReliabilityModel};
use crate::taskmodel::{Machine, MaintTask};

/// Mean and standard deviation of a normal law truncated to positive values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalLaw {
    pub mean: f64,
    pub std: f64,
}

impl NormalLaw {
    pub const FLOOR: f64 = 1e-6;

    /// Redraws until the value exceeds [`Self::FLOOR`].
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.std == 0.0 {
            return self.mean.max(Self::FLOOR);
        }
        let law = Normal::new(self.mean, self.std).expect("std is finite and non-negative");
        loop {
            let x: f64 = law.sample(rng);
            if x > Self::FLOOR {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub machine_count: usize,
    /// Sites the machines are spread over, round-robin.
    pub sites: usize,
    pub horizon: f64,
    /// Failure rate per day.
    pub lambda_law: NormalLaw,
    /// Repair rate per day.
    pub mu_law: NormalLaw,
    /// `alpha1 = A_inf + u * (1 - A_inf)` with `u` uniform on this interval.
    pub alpha1_band: [f64; 2],
    pub epsilon_range: [f64; 2],
    /// Processor counts as fractions of `machine_count`.
    pub processor_fractions: Vec<f64>,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            machine_count: 500,
            sites: 1,
            horizon: 365.0,
            lambda_law: NormalLaw {
                mean: 0.004,
                std: 0.001,
            },
            mu_law: NormalLaw { mean: 0.5, std: 0.2 },
            alpha1_band: [2e-6, 2e-5],
            epsilon_range: [0.25, 0.5],
            processor_fractions: default_fractions(),
            seed: 1,
        }
    }
}

/// 2%, 4%, ..., 20%.
pub fn default_fractions() -> Vec<f64> {
    (1..=10).map(|k| k as f64 * 2.0 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid generator configuration: {0}")]
pub struct ConfigError(pub String);

impl GenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError(msg));
        if self.sites == 0 {
            return bad("sites must be at least 1".into());
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon = {}", self.horizon));
        }
        for (name, law) in [("lambda_law", self.lambda_law), ("mu_law", self.mu_law)] {
            if !(law.mean.is_finite() && law.std.is_finite() && law.std >= 0.0) {
                return bad(format!("{name} = {law:?}"));
            }
            if law.std == 0.0 && law.mean <= NormalLaw::FLOOR {
                return bad(format!("{name} has no positive support"));
            }
        }
        let [lo, hi] = self.alpha1_band;
        if !(0.0 < lo && lo <= hi && hi < 1.0) {
            return bad(format!("alpha1_band = {:?} must lie in (0, 1)", self.alpha1_band));
        }
        let [lo, hi] = self.epsilon_range;
        if !(0.0 < lo && lo <= hi && hi.is_finite()) {
            return bad(format!("epsilon_range = {:?} must be positive", self.epsilon_range));
        }
        if let Some(f) = self.processor_fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return bad(format!("processor fraction {f} is outside (0, 1]"));
        }
        Ok(())
    }

    /// `max(1, round(fraction * machine_count))`.
    pub fn processors_for(&self, fraction: f64) -> usize {
        ((fraction * self.machine_count as f64).round() as usize).max(1)
    }
}

fn machine_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Draws machine `index` of the population described by `config`.
pub fn generate_machine(config: &GenConfig, index: usize) -> Machine {
    let mut rng = machine_rng(config.seed, index);
    loop {
        let lambda = config.lambda_law.sample(&mut rng);
        let mu = config.mu_law.sample(&mut rng);
        let model = ExponentialModel::new(lambda, mu).expect("truncated draws are positive");
        let floor = model.asymptotic_availability();
        let alpha1 = floor + uniform(&mut rng, config.alpha1_band) * (1.0 - floor);
        let epsilon = uniform(&mut rng, config.epsilon_range);
        let id = index as u32 + 1;
        let site = (index % config.sites) as u32 + 1;
        match Machine::from_epsilon(id, site, ReliabilityModel::Exponential(model), alpha1, epsilon) {
            Ok(mut m) => {
                m.index_in_site = (index / config.sites) as u32 + 1;
                return m;
            }
            // alpha1 rounded onto the floor or onto 1; draw again
            Err(_) => continue,
        }
    }
}

/// A machine population with the processor counts of its sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemTemplate {
    pub machines: Vec<Machine>,
    pub horizon: f64,
    /// `(fraction, q)` per sweep point.
    pub sweep: Vec<(f64, usize)>,
}

pub fn generate_system(config: &GenConfig) -> Result<SystemTemplate, ConfigError> {
    config.validate()?;
    let machines = (0..config.machine_count).map(|k| generate_machine(config, k)).collect();
    let sweep = config
        .processor_fractions
        .iter()
        .map(|&f| (f, config.processors_for(f)))
        .collect();
    Ok(SystemTemplate {
        machines,
        horizon: config.horizon,
        sweep,
    })
}

/// Random precedence-free task set for offline experiments and timing.
///
/// Releases spread over half the total work so that tasks contend;
/// due dates add up to twice the processing time of slack.
pub fn random_offline_tasks(n: usize, seed: u64) -> Vec<MaintTask> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let processing: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..10.0)).collect();
    let span = 0.5 * processing.iter().sum::<f64>();
    processing
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            let release = if span > 0.0 { rng.random_range(0.0..span) } else { 0.0 };
            let slack = rng.random_range(0.0..2.0 * p);
            MaintTask::new(k as u64, release, p, release + p + slack)
        })
        .collect()
}
