//! Measurability and gate-count sweeps over register size.

use alloc::vec::Vec;

use crate::budget::{plane_force, pseudo_pure_factor, BridgeMechanics, GateBudget};
use crate::config::DeviceConfig;
use crate::error::{ensure, Error, Result};
use crate::math::{exp, log};

/// Bisection stops once the polarization bracket is narrower than this.
pub const POLARIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct FeasibilityOptions {
    /// Measurement bandwidth for the force-noise threshold, Hz.
    pub bandwidth: f64,
    /// Force noise in N/√Hz to use instead of the beam model.
    pub force_noise_override: Option<f64>,
    /// Upper limit for `max_qubits`.
    pub qubit_cap: usize,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        Self { bandwidth: 1.0, force_noise_override: None, qubit_cap: 1_000_000 }
    }
}

/// Signal and threshold for one device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurability {
    /// Force of a fully polarized plane, N.
    pub plane_force: f64,
    /// Minimum detectable force, N.
    pub threshold: f64,
    pub qubit_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MaxQubits {
    pub n: usize,
    /// The cap was reached, so the true limit may be larger.
    pub capped: bool,
}

impl Measurability {
    pub fn new(config: &DeviceConfig, options: &FeasibilityOptions) -> Result<Self> {
        config.validate()?;
        ensure(options.bandwidth > 0.0, "bandwidth", "must be > 0")?;
        ensure(options.qubit_cap >= 1, "qubit_cap", "must be >= 1")?;
        let threshold = match options.force_noise_override {
            Some(f) => {
                ensure(f > 0.0, "force_noise_override", "must be > 0")?;
                f * libm::sqrt(options.bandwidth)
            }
            None => BridgeMechanics::beam(config)?.thermal_force_noise(&config.constants, options.bandwidth)?,
        };
        Ok(Self { plane_force: plane_force(config), threshold, qubit_cap: options.qubit_cap })
    }

    pub fn is_measurable(&self, p: f64, n: usize) -> bool {
        self.plane_force * pseudo_pure_factor(p, n) >= self.threshold
    }

    /// Smallest polarization whose signal reaches the threshold.
    pub fn min_polarization(&self, n: usize) -> Result<f64> {
        ensure(n >= 1, "n", "must be >= 1")?;
        if !self.is_measurable(1.0, n) {
            return Err(Error::NotMeasurable);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > POLARIZATION_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if self.is_measurable(mid, n) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Largest register measurable at polarization `p`; 0 if none is.
    pub fn max_qubits(&self, p: f64) -> Result<MaxQubits> {
        ensure(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]")?;
        let cap = self.qubit_cap;
        if !self.is_measurable(p, 1) {
            return Ok(MaxQubits { n: 0, capped: false });
        }
        // Exponential bracketing: `lo` measurable, `hi` not (or past the cap).
        let mut lo = 1usize;
        let mut hi = 2usize;
        while hi <= cap && self.is_measurable(p, hi) {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        if hi > cap {
            if self.is_measurable(p, cap) {
                return Ok(MaxQubits { n: cap, capped: true });
            }
            hi = cap;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.is_measurable(p, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(MaxQubits { n: lo, capped: false })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScalabilityPoint {
    pub n: usize,
    /// `None` when the register is not measurable at any polarization.
    pub p_min: Option<f64>,
    /// One entry per requested T₂⁰, in request order.
    pub gates_times_l: Vec<f64>,
    pub l_star: Vec<usize>,
}

/// Roughly log-spaced integer register sizes from `lo` to `hi`, deduplicated.
pub fn log_spaced_counts(lo: usize, hi: usize, points: usize) -> Result<Vec<usize>> {
    ensure(lo >= 1 && hi >= lo, "range", "need 1 <= lo <= hi")?;
    ensure(points >= 2, "points", "need at least two points")?;
    let (a, b) = (log(lo as f64), log(hi as f64));
    let mut out: Vec<usize> = (0..points)
        .map(|k| libm::round(exp(a + (b - a) * k as f64 / (points - 1) as f64)) as usize)
        .collect();
    out.dedup();
    Ok(out)
}

/// One sweep point. `budget` caches gate errors across calls.
pub fn scalability_point(
    measurability: &Measurability,
    budget: &mut GateBudget,
    n: usize,
    t2_others: &[f64],
) -> Result<ScalabilityPoint> {
    if t2_others.is_empty() {
        return Err(Error::Empty("T2_0 list"));
    }
    let p_min = match measurability.min_polarization(n) {
        Ok(p) => Some(p),
        Err(Error::NotMeasurable) => None,
        Err(e) => return Err(e),
    };
    let mut gates_times_l = Vec::with_capacity(t2_others.len());
    let mut l_star = Vec::with_capacity(t2_others.len());
    for &t2 in t2_others {
        let best = budget.optimize_l(n, t2)?;
        gates_times_l.push(best.gates_times_l);
        l_star.push(best.l);
    }
    Ok(ScalabilityPoint { n, p_min, gates_times_l, l_star })
}

/// Sequential sweep, sorted by `n`.
pub fn scalability_report(
    measurability: &Measurability,
    budget: &mut GateBudget,
    counts: &[usize],
    t2_others: &[f64],
) -> Result<Vec<ScalabilityPoint>> {
    let mut counts = counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    counts.iter().map(|&n| scalability_point(measurability, budget, n, t2_others)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_threshold() -> Measurability {
        let opts = FeasibilityOptions { force_noise_override: Some(1.2e-17), ..Default::default() };
        Measurability::new(&DeviceConfig::default(), &opts).unwrap()
    }

    #[test]
    fn single_qubit_is_linear() {
        let m = reference_threshold();
        let p = m.min_polarization(1).unwrap();
        assert_relative_eq!(p, m.threshold / m.plane_force, max_relative = 1e-7);
        assert!((p - 0.0306).abs() < 0.001);
    }

    #[test]
    fn unreachable_threshold() {
        let m = Measurability { plane_force: 1.0, threshold: 2.0, qubit_cap: 10 };
        assert_eq!(m.min_polarization(1), Err(Error::NotMeasurable));
        assert_eq!(m.max_qubits(0.5).unwrap(), MaxQubits { n: 0, capped: false });
    }

    #[test]
    fn cap_is_flagged() {
        let m = Measurability { qubit_cap: 1000, ..reference_threshold() };
        assert_eq!(m.max_qubits(1.0).unwrap(), MaxQubits { n: 1000, capped: true });
        assert!(!m.max_qubits(0.9).unwrap().capped);
    }

    #[test]
    fn counts_are_deduplicated() {
        let c = log_spaced_counts(1, 10_000, 50).unwrap();
        assert_eq!(c[0], 1);
        assert_eq!(*c.last().unwrap(), 10_000);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }
}
