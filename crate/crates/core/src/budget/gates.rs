//! Truncated decoupling and the resulting gate count.
//!
//! Decoupling only within blocks of `l` qubits leaves couplings to qubits
//! beyond the block unrefocused, giving `T₂ₗᵗ·δω = l³/√(1 + F(l)²)`. The
//! total `T₂ = (1/T₂⁰ + 1/T₂ₗᵗ)⁻¹` is spent in cycles of
//! `t_c = L·min(n, l)²/Δω`, so `gates·L = T₂·Δω/min(n, l)²`.

use crate::budget::lattice::GateErrorTable;
use crate::error::{ensure, Result};
use crate::math::{fabs, sqrt};

/// `T₂ₗᵗ = l³/(δω·√(1 + F²))`.
pub fn t2_truncation(l: usize, nearest_coupling: f64, gate_error: f64) -> Result<f64> {
    ensure(l >= 1, "l", "set size must be >= 1")?;
    ensure(nearest_coupling != 0.0, "nearest_coupling", "must be non-zero")?;
    let l3 = (l as f64) * (l as f64) * (l as f64);
    Ok(l3 / (fabs(nearest_coupling) * sqrt(1.0 + gate_error * gate_error)))
}

/// `(1/T₂⁰ + 1/T₂ₗᵗ)⁻¹`; `None` means no truncation term.
pub fn t2_total(t2_other: f64, t2_truncation: Option<f64>) -> Result<f64> {
    ensure(t2_other > 0.0, "t2_other", "must be > 0")?;
    Ok(match t2_truncation {
        Some(t) => {
            ensure(t > 0.0, "t2_truncation", "must be > 0")?;
            1.0 / (1.0 / t2_other + 1.0 / t)
        }
        None => t2_other,
    })
}

/// Gate-count calculator for one chain and one cross-chain lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GateBudget {
    /// Qubit spacing Δω, rad/s.
    pub delta_omega: f64,
    /// Nearest-neighbour coupling δω, rad/s.
    pub nearest_coupling: f64,
    errors: GateErrorTable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GateCount {
    pub l: usize,
    /// `None` when the whole register is decoupled (`l = n`).
    pub t2_truncation: Option<f64>,
    pub t2_total: f64,
    /// Cycle time in units of `L`: `min(n, l)²/Δω`.
    pub clock_per_l: f64,
    pub gates_times_l: f64,
}

impl GateBudget {
    pub fn new(delta_omega: f64, nearest_coupling: f64, errors: GateErrorTable) -> Result<Self> {
        ensure(delta_omega > 0.0, "delta_omega", "must be > 0")?;
        ensure(nearest_coupling != 0.0, "nearest_coupling", "must be non-zero")?;
        Ok(Self { delta_omega, nearest_coupling, errors })
    }

    pub fn gate_error(&mut self, l: usize) -> Result<f64> {
        self.errors.get(l)
    }

    pub fn errors(&self) -> &GateErrorTable {
        &self.errors
    }

    pub fn t2_truncation(&mut self, l: usize) -> Result<f64> {
        let f = self.errors.get(l)?;
        t2_truncation(l, self.nearest_coupling, f)
    }

    /// Gate count times `L` for `n` qubits decoupled in blocks of `l`.
    pub fn gates(&mut self, n: usize, l: usize, t2_other: f64) -> Result<GateCount> {
        ensure(n >= 1, "n", "must be >= 1")?;
        ensure(l >= 1 && l <= n, "l", "must lie in 1..=n")?;
        let t2_trunc = if l < n { Some(self.t2_truncation(l)?) } else { None };
        let t2 = t2_total(t2_other, t2_trunc)?;
        let block = l as f64;
        let clock_per_l = block * block / self.delta_omega;
        Ok(GateCount { l, t2_truncation: t2_trunc, t2_total: t2, clock_per_l, gates_times_l: t2 / clock_per_l })
    }

    /// Best block size by exhaustive scan of `1..=n`. Since
    /// `gates·L ≤ T₂⁰·Δω/l²`, the scan stops once that bound cannot beat
    /// the best value found.
    pub fn optimize_l(&mut self, n: usize, t2_other: f64) -> Result<GateCount> {
        ensure(n >= 1, "n", "must be >= 1")?;
        ensure(t2_other > 0.0, "t2_other", "must be > 0")?;
        let mut best = self.gates(n, 1, t2_other)?;
        for l in 2..=n {
            let bound = t2_other * self.delta_omega / ((l as f64) * (l as f64));
            if bound <= best.gates_times_l {
                break;
            }
            let g = self.gates(n, l, t2_other)?;
            if g.gates_times_l > best.gates_times_l {
                best = g;
            }
        }
        Ok(best)
    }
}

/// Continuous optimum of `l²/T₂⁰ + δω/l`: `(δω·T₂⁰/2)^{1/3}`.
pub fn continuous_optimum(nearest_coupling: f64, t2_other: f64) -> f64 {
    libm::cbrt(fabs(nearest_coupling) * t2_other / 2.0)
}
