//! Reading an instance file, solving it and validating the result.

use ftr_maint::cli::{solve, validate};
use ftr_maint::instance::InstanceFile;
use ftr_maint::taskmodel::CostWeights;

const INSTANCE: &str = r#"{
  "horizon_days": 90,
  "processors": 2,
  "machines": [
    {"id": 1, "model": {"type": "exp", "lambda": 0.01, "mu": 0.1}, "alpha1": 0.95, "tau2_rule": {"epsilon": 0.3}},
    {"id": 2, "model": {"type": "exp", "lambda": 0.004, "mu": 0.5}, "alpha1": 0.995, "tau2_rule": {"epsilon": 0.4}},
    {"id": 3, "model": {"type": "weibull", "gamma": 0, "sigma": 100, "beta": 2, "mu": 0.5}, "alpha1": 0.95, "tau2_rule": {"alpha2": 0.9}}
  ]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = InstanceFile::parse(INSTANCE)?;
    for m in inst.build_machines()? {
        println!(
            "machine {}: tau1 {:.3}, tau2 {:.3}, mtp {:.3}",
            m.id, m.tau1, m.tau2, m.mtp
        );
    }
    let schedule = solve(&inst, None, CostWeights::new(1.0, 2.0).ok_or("bad weights")?)?;
    println!("{}", serde_json::to_string_pretty(&schedule)?);
    println!("{}", validate(&inst, Some(&schedule))?);
    Ok(())
}
