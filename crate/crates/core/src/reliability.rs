//! Machine availability under constant-rate and Weibull failure laws.
//!
//! Every model describes a machine renewed to as-new condition at the end of
//! each preventive task. The availability curves are non-increasing in the
//! time since renewal, so an availability threshold maps to a unique
//! inter-maintenance duration. That inversion is what turns reliability data
//! into release dates and due dates for the scheduler.
//!
//! All times are in days.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance of the adaptive quadrature behind [`WeibullModel::availability`].
pub const QUADRATURE_RTOL: f64 = 1e-10;

/// Margin added to the numerically estimated Weibull asymptote before a
/// threshold is considered reachable.
pub const ASYMPTOTE_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReliabilityError {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("availability threshold {alpha} is not above the asymptotic availability {floor}")]
    ThresholdUnreachable { alpha: f64, floor: f64 },
    #[error("time {t} precedes the Weibull time origin {gamma}")]
    DomainError { t: f64, gamma: f64 },
    #[error("Weibull shape {beta} < 1 gives no unique threshold crossing")]
    NonMonotone { beta: f64 },
}

/// Constant failure rate `lambda` and repair rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialModel {
    lambda: f64,
    mu: f64,
}

impl ExponentialModel {
    pub fn new(lambda: f64, mu: f64) -> Result<Self, ReliabilityError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("lambda = {lambda}")));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("mu = {mu}")));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `mu / (lambda + mu)`, the floor the availability decays towards.
    pub fn asymptotic_availability(&self) -> f64 {
        self.mu / (self.lambda + self.mu)
    }

    /// Availability `elapsed` days after a renewal.
    pub fn availability(&self, elapsed: f64) -> f64 {
        let floor = self.asymptotic_availability();
        floor + (1.0 - floor) * (-(self.lambda + self.mu) * elapsed).exp()
    }

    /// Time after renewal at which the availability falls to `alpha`.
    pub fn threshold_duration(&self, alpha: f64) -> Result<f64, ReliabilityError> {
        check_alpha(alpha)?;
        let floor = self.asymptotic_availability();
        if alpha <= floor {
            return Err(ReliabilityError::ThresholdUnreachable { alpha, floor });
        }
        let ratio = self.mu / self.lambda;
        let arg = alpha * (1.0 + ratio) - ratio;
        if arg <= 0.0 {
            // alpha sits within rounding of the floor
            return Err(ReliabilityError::ThresholdUnreachable { alpha, floor });
        }
        Ok((-arg.ln() / (self.lambda + self.mu)).max(0.0))
    }
}

/// Weibull failure law with time origin `gamma`, scale `sigma` and shape
/// `beta`, combined with a constant repair rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullModel {
    gamma: f64,
    sigma: f64,
    beta: f64,
    mu: f64,
}

impl WeibullModel {
    /// Shapes below 1 are accepted here and rejected by
    /// [`threshold_duration`](Self::threshold_duration).
    pub fn new(gamma: f64, sigma: f64, beta: f64, mu: f64) -> Result<Self, ReliabilityError> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("gamma = {gamma}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("sigma = {sigma}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("beta = {beta}")));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(ReliabilityError::InvalidParameter(format!("mu = {mu}")));
        }
        Ok(Self { gamma, sigma, beta, mu })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Availability at absolute time `t >= gamma`.
    ///
    /// With `u = (t - gamma) / sigma` and `g(x) = mu*sigma*x + x^beta` the
    /// closed form is `exp(-g(u)) * (1 + mu*sigma * ∫_0^u exp(g(x)) dx)`.
    /// Both factors overflow long before the product does, so the outer
    /// exponential is moved inside the integral and the integration variable
    /// is reflected to `s = u - x`:
    ///
    /// `A = exp(-g(u)) + mu*sigma * ∫_0^u exp(g(u - s) - g(u)) ds`
    ///
    /// The integrand is 1 at `s = 0` and decays monotonically, so the range
    /// is truncated once the exponent drops below `-60`.
    pub fn availability(&self, t: f64) -> Result<f64, ReliabilityError> {
        if t < self.gamma || t.is_nan() {
            return Err(ReliabilityError::DomainError { t, gamma: self.gamma });
        }
        Ok(self.availability_scaled((t - self.gamma) / self.sigma))
    }

    /// Availability `elapsed` days after `gamma`.
    pub fn availability_after(&self, elapsed: f64) -> Result<f64, ReliabilityError> {
        self.availability(self.gamma + elapsed)
    }

    fn exponent(&self, x: f64) -> f64 {
        self.mu * self.sigma * x + x.powf(self.beta)
    }

    /// `g(u) - g(u - s)` without cancelling two large terms.
    fn exponent_drop(&self, u: f64, s: f64) -> f64 {
        let power_drop = -u.powf(self.beta) * (self.beta * (-s / u).ln_1p()).exp_m1();
        self.mu * self.sigma * s + power_drop
    }

    fn availability_scaled(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 1.0;
        }
        let ms = self.mu * self.sigma;
        let gu = self.exponent(u);
        let integrand = |s: f64| (-self.exponent_drop(u, s)).exp();
        let cutoff = self.decay_cutoff(u, gu);
        let integral = adaptive_simpson(integrand, 0.0, cutoff, QUADRATURE_RTOL);
        ((-gu).exp() + ms * integral).min(1.0)
    }

    /// Smallest reflected offset `s <= u` with `g(u) - g(u - s) >= 60`, or `u`.
    fn decay_cutoff(&self, u: f64, gu: f64) -> f64 {
        const DEPTH: f64 = 60.0;
        if gu < DEPTH {
            return u;
        }
        let (mut lo, mut hi) = (0.0, u);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.exponent_drop(u, mid) >= DEPTH {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-12 * u {
                break;
            }
        }
        hi
    }

    /// Numerical estimate of the limit of the availability as `t -> inf`.
    ///
    /// The curve is sampled at doubling horizons until two successive values
    /// agree within `1e-10`; the last value is returned. Because the curve is
    /// non-increasing for `beta >= 1` the estimate is never below the limit.
    pub fn asymptotic_availability(&self) -> f64 {
        let mut u = 1.0;
        let mut prev = self.availability_scaled(u);
        for _ in 0..80 {
            u *= 2.0;
            let next = self.availability_scaled(u);
            if (prev - next).abs() < 1e-10 {
                return next;
            }
            prev = next;
        }
        prev
    }

    /// Duration after `gamma` at which the availability falls to `alpha`.
    pub fn threshold_duration(&self, alpha: f64) -> Result<f64, ReliabilityError> {
        if self.beta < 1.0 {
            return Err(ReliabilityError::NonMonotone { beta: self.beta });
        }
        check_alpha(alpha)?;
        if alpha == 1.0 {
            return Ok(0.0);
        }
        let floor = self.asymptotic_availability();
        if alpha <= floor + ASYMPTOTE_MARGIN {
            return Err(ReliabilityError::ThresholdUnreachable { alpha, floor });
        }
        let f = |tau: f64| self.availability_scaled(tau / self.sigma) - alpha;

        let mut lo = 0.0;
        let mut hi = self.sigma / 10.0;
        let mut expansions = 0;
        while f(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            expansions += 1;
            if expansions > 200 || !hi.is_finite() {
                return Err(ReliabilityError::ThresholdUnreachable { alpha, floor });
            }
        }
        Ok(bisect(f, lo, hi, 1e-9))
    }
}

/// Bisection on a non-increasing `f` with `f(lo) > 0 >= f(hi)`.
///
/// Stops once the bracket is narrower than `xtol` and the residual is below
/// `1e-12`, or when the bracket can no longer be split in floating point.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let value = f(mid);
        if value == 0.0 || (hi - lo <= xtol && value.abs() < 1e-12) {
            return mid;
        }
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // absolute target derived from a coarse magnitude estimate
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(&f, a, b, fa, fm, fb, whole, rtol * scale, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn check_alpha(alpha: f64) -> Result<(), ReliabilityError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ReliabilityError::InvalidParameter(format!("alpha = {alpha}")));
    }
    Ok(())
}

/// Either supported failure law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReliabilityModel {
    Exponential(ExponentialModel),
    Weibull(WeibullModel),
}

impl ReliabilityModel {
    /// Availability `elapsed` days after a renewal.
    pub fn availability_after(&self, elapsed: f64) -> Result<f64, ReliabilityError> {
        match self {
            Self::Exponential(m) => {
                if elapsed < 0.0 {
                    return Err(ReliabilityError::DomainError { t: elapsed, gamma: 0.0 });
                }
                Ok(m.availability(elapsed))
            }
            Self::Weibull(m) => m.availability_after(elapsed),
        }
    }

    pub fn threshold_duration(&self, alpha: f64) -> Result<f64, ReliabilityError> {
        match self {
            Self::Exponential(m) => m.threshold_duration(alpha),
            Self::Weibull(m) => m.threshold_duration(alpha),
        }
    }

    pub fn asymptotic_availability(&self) -> f64 {
        match self {
            Self::Exponential(m) => m.asymptotic_availability(),
            Self::Weibull(m) => m.asymptotic_availability(),
        }
    }

    /// Repair rate; one preventive task lasts `1 / mu` days.
    pub fn repair_rate(&self) -> f64 {
        match self {
            Self::Exponential(m) => m.mu(),
            Self::Weibull(m) => m.mu(),
        }
    }
}

/// The two availability thresholds of a machine, `0 < alpha2 < alpha1 < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    alpha1: f64,
    alpha2: f64,
}

impl Thresholds {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, ReliabilityError> {
        if !(0.0 < alpha2 && alpha2 < alpha1 && alpha1 < 1.0) {
            return Err(ReliabilityError::InvalidParameter(format!(
                "thresholds must satisfy 0 < alpha2 < alpha1 < 1, got alpha1 = {alpha1}, alpha2 = {alpha2}"
            )));
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ExponentialModel {
        ExponentialModel::new(0.01, 0.1).unwrap()
    }

    #[test]
    fn exponential_renewal_and_floor() {
        let m = reference();
        assert_eq!(m.availability(0.0), 1.0);
        assert!((m.availability(1e6) - 10.0 / 11.0).abs() < 1e-12);
        assert!((m.availability(7.2590) - 0.95).abs() < 1e-4);
    }

    #[test]
    fn exponential_threshold_examples() {
        let m = reference();
        assert_eq!(m.threshold_duration(1.0).unwrap(), 0.0);
        let tau = m.threshold_duration(0.95).unwrap();
        assert!((tau - 7.2590).abs() < 1e-3, "tau = {tau}");
        assert!((m.availability(tau) - 0.95).abs() < 1e-9);
        assert!(matches!(
            m.threshold_duration(0.90),
            Err(ReliabilityError::ThresholdUnreachable { .. })
        ));
    }

    #[test]
    fn exponential_threshold_matches_bisection() {
        // independent route: bisect the availability curve directly
        let m = reference();
        let tau = bisect(|x| m.availability(x) - 0.95, 0.0, 100.0, 1e-12);
        assert!((tau - m.threshold_duration(0.95).unwrap()).abs() < 1e-9);
        assert!((tau - 7.2590).abs() < 1e-3);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(ExponentialModel::new(0.0, 1.0).is_err());
        assert!(ExponentialModel::new(1.0, -1.0).is_err());
        assert!(WeibullModel::new(0.0, 0.0, 2.0, 1.0).is_err());
        assert!(Thresholds::new(0.9, 0.95).is_err());
        assert!(Thresholds::new(0.95, 0.9).is_ok());
        assert!(reference().threshold_duration(1.5).is_err());
    }

    #[test]
    fn weibull_is_one_at_origin() {
        let m = WeibullModel::new(3.0, 100.0, 2.0, 0.5).unwrap();
        assert_eq!(m.availability(3.0).unwrap(), 1.0);
        assert!(matches!(m.availability(2.0), Err(ReliabilityError::DomainError { .. })));
    }

    #[test]
    fn weibull_decreases() {
        let m = WeibullModel::new(0.0, 100.0, 2.0, 0.5).unwrap();
        assert!(m.availability(10.0).unwrap() > m.availability(20.0).unwrap());
    }

    #[test]
    fn weibull_shape_one_is_exponential() {
        // beta = 1 reduces to the constant-rate law with lambda = 1/sigma
        let w = WeibullModel::new(0.0, 50.0, 1.0, 0.2).unwrap();
        let e = ExponentialModel::new(0.02, 0.2).unwrap();
        for t in [0.5, 3.0, 30.0, 120.0, 2000.0] {
            let diff = (w.availability(t).unwrap() - e.availability(t)).abs();
            assert!(diff < 1e-9, "t = {t}, diff = {diff}");
        }
        assert!((w.asymptotic_availability() - e.asymptotic_availability()).abs() < 1e-8);
    }

    #[test]
    fn weibull_threshold_inverts() {
        let m = WeibullModel::new(0.0, 100.0, 2.0, 0.5).unwrap();
        assert_eq!(m.threshold_duration(1.0).unwrap(), 0.0);
        let tau = m.threshold_duration(0.95).unwrap();
        assert!((m.availability(tau).unwrap() - 0.95).abs() < 1e-9);
    }

    #[test]
    fn weibull_rejects_small_shape() {
        let m = WeibullModel::new(0.0, 100.0, 0.8, 0.5).unwrap();
        assert!(matches!(
            m.threshold_duration(0.9),
            Err(ReliabilityError::NonMonotone { .. })
        ));
    }

    #[test]
    fn weibull_unreachable_below_floor() {
        let m = WeibullModel::new(0.0, 50.0, 1.0, 0.2).unwrap();
        assert!(matches!(
            m.threshold_duration(0.9),
            Err(ReliabilityError::ThresholdUnreachable { .. })
        ));
    }

    #[test]
    fn simpson_integrates_polynomial() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }
}
