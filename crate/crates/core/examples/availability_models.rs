//! Availability curves and the durations at which they cross two thresholds.

use ftr_maint::reliability::{ExponentialModel, ReliabilityModel, WeibullModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = [
        (
            "exponential",
            ReliabilityModel::Exponential(ExponentialModel::new(0.01, 0.1)?),
        ),
        (
            "weibull beta=2",
            ReliabilityModel::Weibull(WeibullModel::new(0.0, 100.0, 2.0, 0.5)?),
        ),
    ];
    for (name, model) in &models {
        println!("{name}: A(inf) ~ {:.6}", model.asymptotic_availability());
        for days in [0.0, 5.0, 10.0, 20.0, 40.0] {
            println!("  A({days:>4}) = {:.6}", model.availability_after(days)?);
        }
        for alpha in [0.99, 0.95] {
            match model.threshold_duration(alpha) {
                Ok(tau) => println!("  tau(alpha={alpha}) = {tau:.4} days"),
                Err(e) => println!("  tau(alpha={alpha}): {e}"),
            }
        }
    }
    Ok(())
}
