use crate::error::{ensure, Result};
use crate::math::TAU;

/// Physical constants entering the dipolar, noise and decoherence formulas.
///
/// `gyromagnetic_ratio` is the magnitude of the ²⁹Si value; every formula
/// that uses it does so through γ² or |γ|.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PhysicalConstants {
    /// rad·s⁻¹·T⁻¹
    pub gyromagnetic_ratio: f64,
    /// T·m/A
    pub mu0: f64,
    /// J·s
    pub hbar: f64,
    /// J/K
    pub k_b: f64,
}

impl PhysicalConstants {
    /// |γ|/2π for ²⁹Si in Hz/T.
    pub const SI29_GAMMA_HZ_PER_T: f64 = 8.465e6;

    pub fn validate(&self) -> Result<()> {
        ensure(self.gyromagnetic_ratio > 0.0, "gyromagnetic_ratio", "must be > 0")?;
        ensure(self.mu0 > 0.0, "mu0", "must be > 0")?;
        ensure(self.hbar > 0.0, "hbar", "must be > 0")?;
        ensure(self.k_b > 0.0, "k_b", "must be > 0")
    }

    /// μ₀/4π
    pub fn mu0_over_4pi(&self) -> f64 {
        self.mu0 / (2.0 * TAU)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gyromagnetic_ratio: TAU * Self::SI29_GAMMA_HZ_PER_T,
            mu0: 1.256_637_062_12e-6,
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
        }
    }
}
