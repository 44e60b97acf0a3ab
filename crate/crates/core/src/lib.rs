//! Physics and control models for an all-silicon nuclear-spin quantum computer.
//!
//! Qubits are ²⁹Si nuclei in zig-zag atomic chains, addressed by a strong
//! micromagnet field gradient and read out by magnetic resonance force
//! microscopy on a vibrating silicon bridge. The crate covers the whole
//! quantitative chain from device geometry to scalability curves:
//!
//! - [`chain`]: Larmor ladder and secular dipolar coupling matrix of one chain.
//! - [`magnet`]: closed-form stray field of the rectangular micromagnet.
//! - [`schedule`]: Hadamard decoupling / selective recoupling pulse schedules.
//! - [`dynamics`]: dense density-matrix simulator for small chains.
//! - [`cooling`]: majority-vote algorithmic cooling, exact and bias-tracking.
//! - [`budget`]: bridge mechanics, force noise, T₂ contributions, gate counts,
//!   and the multiplexed readout model.
//! - [`feasibility`]: minimum polarization and gate-count sweeps.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel sweeps live in the companion `siqc` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod budget;
pub mod chain;
pub mod config;
pub mod constants;
pub mod cooling;
pub mod dynamics;
pub mod error;
pub mod feasibility;
pub mod magnet;
pub mod schedule;

mod math;

pub use chain::SpinChainModel;
pub use config::DeviceConfig;
pub use constants::PhysicalConstants;
pub use error::{Error, Result};

/// A point or vector in SI metres.
pub type Vec3 = [f64; 3];

/// Warnings raised when a model is used outside its comfortable regime.
///
/// Operations never fail for these; callers decide whether to log them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Warning {
    /// Drive nutation rate is a sizeable fraction of the qubit spacing.
    WeakSelectivity { nutation_rate: f64, delta_omega: f64 },
    /// Readout frequency excursion approaches the qubit spacing.
    LargeExcursion { excursion: f64, delta_omega: f64 },
    /// `Ω·ω_m / (γB₁)²` is not small, so inversion is not fully adiabatic.
    NonAdiabatic { ratio: f64 },
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Warning::WeakSelectivity { nutation_rate, delta_omega } => write!(
                f,
                "nutation rate {nutation_rate:.4e} rad/s exceeds Δω/5 (Δω = {delta_omega:.4e} rad/s); pulses are poorly selective"
            ),
            Warning::LargeExcursion { excursion, delta_omega } => write!(
                f,
                "frequency excursion {excursion:.4e} rad/s exceeds Δω/5 (Δω = {delta_omega:.4e} rad/s)"
            ),
            Warning::NonAdiabatic { ratio } => {
                write!(f, "adiabaticity ratio Ω·ω_m/(γB₁)² = {ratio:.3} exceeds 0.1")
            }
        }
    }
}
