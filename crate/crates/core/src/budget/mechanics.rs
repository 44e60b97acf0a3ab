//! Lumped harmonic-oscillator model of the doubly clamped silicon bridge.

use num_complex::Complex64;

use crate::config::DeviceConfig;
use crate::constants::PhysicalConstants;
use crate::error::{ensure, Result};
use crate::math::{cube, sq, sqrt, TAU};

/// Mode-shape constant of the fundamental clamped-clamped flexural mode,
/// `ω_c = 2π·C·(t/l²)·√(E/ρ)`.
pub const CLAMPED_MODE_CONSTANT: f64 = 1.03;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BridgeMechanics {
    /// Spring constant k, N/m.
    pub spring_constant: f64,
    /// Resonance ω_c, rad/s.
    pub resonance: f64,
    pub quality_factor: f64,
    /// Effective temperature, K.
    pub temperature: f64,
}

impl BridgeMechanics {
    pub fn new(spring_constant: f64, resonance: f64, quality_factor: f64, temperature: f64) -> Result<Self> {
        let m = Self { spring_constant, resonance, quality_factor, temperature };
        m.validate()?;
        Ok(m)
    }

    /// Nominal bridge: k = 0.0042 N/m, ω_c/2π = 23 kHz, Q = 10⁴ at 4 K.
    pub fn nominal() -> Self {
        Self { spring_constant: 0.0042, resonance: TAU * 23e3, quality_factor: 1e4, temperature: 4.0 }
    }

    /// Euler-Bernoulli beam with both ends clamped: centre-load stiffness
    /// `16·E·w·t³/l³` and the fundamental flexural resonance.
    pub fn beam(config: &DeviceConfig) -> Result<Self> {
        config.validate()?;
        let (l, w, t) = (config.bridge_length, config.bridge_width, config.bridge_thickness);
        let e = config.youngs_modulus;
        Self::new(
            16.0 * e * w * cube(t) / cube(l),
            TAU * CLAMPED_MODE_CONSTANT * t / sq(l) * sqrt(e / config.density),
            config.quality_factor,
            config.temperature,
        )
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.spring_constant > 0.0, "spring_constant", "must be > 0")?;
        ensure(self.resonance > 0.0, "resonance", "must be > 0")?;
        ensure(self.quality_factor > 0.0, "quality_factor", "must be > 0")?;
        ensure(self.temperature > 0.0, "temperature", "must be > 0")
    }

    /// Effective mass `k/ω_c²`, kg.
    pub fn modal_mass(&self) -> f64 {
        self.spring_constant / sq(self.resonance)
    }

    /// Energy ring-down time `2Q/ω_c` of the amplitude envelope, s.
    pub fn ring_down_time(&self) -> f64 {
        2.0 * self.quality_factor / self.resonance
    }

    /// Resonance frequency in Hz.
    pub fn resonance_hz(&self) -> f64 {
        self.resonance / TAU
    }

    /// One-sided thermal force spectral density `4·k_B·T·k/(ω_c·Q)`, N²/Hz.
    pub fn force_spectral_density(&self, constants: &PhysicalConstants) -> f64 {
        4.0 * constants.k_b * self.temperature * self.spring_constant / (self.resonance * self.quality_factor)
    }

    /// Minimum detectable force `√(S_F·Δν)` in N for bandwidth `Δν` in Hz.
    pub fn thermal_force_noise(&self, constants: &PhysicalConstants, bandwidth: f64) -> Result<f64> {
        ensure(bandwidth > 0.0, "bandwidth", "must be > 0")?;
        Ok(sqrt(self.force_spectral_density(constants) * bandwidth))
    }

    /// Displacement per unit force at angular frequency `omega`, for
    /// `x(t) = Re[H·F·e^{iωt}]`.
    pub fn transfer(&self, omega: f64) -> Complex64 {
        let r = omega / self.resonance;
        Complex64::new(1.0 - r * r, r / self.quality_factor).inv() / self.spring_constant
    }
}
