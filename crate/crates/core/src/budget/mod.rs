//! Signal, noise and decoherence budget.

pub mod gates;
pub mod lattice;
pub mod mechanics;
pub mod readout;

pub use gates::{continuous_optimum, t2_total, t2_truncation, GateBudget, GateCount};
pub use lattice::{t2_recouple, ChainLattice, GateErrorTable, Jitter};
pub use mechanics::BridgeMechanics;
pub use readout::{simulate_readout, PlaneReadout, PlaneSignal, ReadoutDrive, ReadoutResult, ReadoutSetup};

use crate::config::DeviceConfig;
use crate::constants::PhysicalConstants;
use crate::error::{ensure, Result};
use crate::math::{cube, pow, sq, TAU};

/// Qubit spacing `Δω = γ·G·a` implied by the configured gradient, rad/s.
pub fn qubit_spacing(config: &DeviceConfig) -> f64 {
    config.constants.gyromagnetic_ratio * config.field_gradient * config.lattice_step
}

/// Force of one fully polarized qubit plane, `(ħΔω/2a)·N`, N.
pub fn plane_force(config: &DeviceConfig) -> f64 {
    config.constants.hbar * qubit_spacing(config) / (2.0 * config.lattice_step) * config.chain_count
}

/// Pseudo-pure-state signal factor `((1+p)/2)ⁿ − ((1−p)/2)ⁿ`.
pub fn pseudo_pure_factor(p: f64, n: usize) -> f64 {
    let n = n as f64;
    pow((1.0 + p) / 2.0, n) - pow((1.0 - p) / 2.0, n)
}

/// Force from the pseudo-pure subensemble of `n` qubits at polarization `p`.
pub fn signal_force(config: &DeviceConfig, p: f64, n: usize) -> Result<f64> {
    ensure((0.0..=1.0).contains(&p), "p", "must lie in [0, 1]")?;
    ensure(n >= 1, "n", "must be >= 1")?;
    Ok(plane_force(config) * pseudo_pure_factor(p, n))
}

/// Dephasing from thermal motion of the bridge in the gradient,
/// `T₂ᶜ = k·ω_c·Q·a²/(Δω²·k_B·T)`.
pub fn t2_bridge(mech: &BridgeMechanics, delta_omega: f64, lattice_step: f64, constants: &PhysicalConstants) -> Result<f64> {
    mech.validate()?;
    ensure(delta_omega > 0.0, "delta_omega", "must be > 0")?;
    ensure(lattice_step > 0.0, "lattice_step", "must be > 0")?;
    Ok(mech.spring_constant * mech.resonance * mech.quality_factor * sq(lattice_step)
        / (sq(delta_omega) * constants.k_b * mech.temperature))
}

/// In-plane flip-flop limit from neighbouring chains,
/// `T₂ʰ = 4π·D³/(γ²·ħ·μ₀)`.
pub fn t2_interchain(chain_spacing: f64, constants: &PhysicalConstants) -> Result<f64> {
    ensure(chain_spacing > 0.0, "chain_spacing", "must be > 0")?;
    let g = constants.gyromagnetic_ratio;
    Ok(2.0 * TAU * cube(chain_spacing) / (g * g * constants.hbar * constants.mu0))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DecoherenceBudget {
    pub t2_bridge: f64,
    pub t2_interchain: f64,
    /// Plane separation used for the recoupling terms.
    pub recouple_distance: usize,
    pub t2_recouple: f64,
    pub gate_error: f64,
    pub block_size: usize,
    pub t2_truncation: Option<f64>,
    pub t2_other: f64,
    pub t2_total: f64,
    /// Cycle time divided by the pulse-length factor L, s.
    pub clock_per_l: f64,
    pub gates_times_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetRequest {
    pub qubits: usize,
    pub t2_other: f64,
    pub recouple_distance: usize,
    /// Fixed block size; `None` optimizes it.
    pub block_size: Option<usize>,
}

/// Assembles every T₂ contribution for one register size.
pub fn decoherence_budget(
    config: &DeviceConfig,
    mech: &BridgeMechanics,
    nearest_coupling: f64,
    lattice: ChainLattice,
    request: &BudgetRequest,
) -> Result<DecoherenceBudget> {
    config.validate()?;
    let delta_omega = qubit_spacing(config);
    let mut t2c = t2_bridge(mech, delta_omega, config.lattice_step, &config.constants)?;
    if config.feedback {
        t2c *= config.feedback_factor;
    }
    let mut gates = GateBudget::new(delta_omega, nearest_coupling, GateErrorTable::new(lattice))?;
    let count = match request.block_size {
        Some(l) => gates.gates(request.qubits, l, request.t2_other)?,
        None => gates.optimize_l(request.qubits, request.t2_other)?,
    };
    let m = request.recouple_distance;
    let f = gates.gate_error(m)?;
    Ok(DecoherenceBudget {
        t2_bridge: t2c,
        t2_interchain: t2_interchain(config.chain_spacing, &config.constants)?,
        recouple_distance: m,
        t2_recouple: t2_recouple(m, nearest_coupling, f)?,
        gate_error: f,
        block_size: count.l,
        t2_truncation: count.t2_truncation,
        t2_other: request.t2_other,
        t2_total: count.t2_total,
        clock_per_l: count.clock_per_l,
        gates_times_l: count.gates_times_l,
    })
}
