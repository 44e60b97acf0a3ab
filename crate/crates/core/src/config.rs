//! Device parameters.
//!
//! Coordinates used throughout: `x` runs along the bridge and magnet length,
//! `y` along the magnet height (bridge width), `z` along the applied field,
//! the magnetization, and the spin chains. The bridge thickness lies along
//! `z`, so every chain threads the bridge from face to face.

use crate::constants::PhysicalConstants;
use crate::error::{ensure, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DeviceConfig {
    pub constants: PhysicalConstants,

    pub bridge_length: f64,
    pub bridge_width: f64,
    pub bridge_thickness: f64,

    pub magnet_length: f64,
    pub magnet_width: f64,
    pub magnet_height: f64,
    /// Gap between the magnet face and the near face of the bridge.
    pub magnet_separation: f64,
    /// μ₀M of the micromagnet in tesla.
    pub magnet_remanence: f64,

    /// Uniform solenoid field in tesla.
    pub b0: f64,
    /// ∂B^z/∂z used to build the Larmor ladder, T/m.
    pub field_gradient: f64,

    pub temperature: f64,
    pub quality_factor: f64,
    pub youngs_modulus: f64,
    pub density: f64,

    /// Axial distance between neighbouring ²⁹Si nuclei in a chain.
    pub lattice_step: f64,
    /// Number of chains (ensemble copies of every qubit).
    pub chain_count: f64,
    /// Lateral spacing of the square chain array.
    pub chain_spacing: f64,
    pub active_region_length: f64,
    pub active_region_width: f64,

    /// Dark nuclear T₁, informational only.
    pub dark_t1: Option<f64>,

    /// Apply the active-feedback multiplier to the bridge-drift T₂.
    pub feedback: bool,
    pub feedback_factor: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            bridge_length: 300e-6,
            bridge_width: 4e-6,
            bridge_thickness: 0.25e-6,
            magnet_length: 400e-6,
            magnet_width: 4e-6,
            magnet_height: 10e-6,
            magnet_separation: 2.1e-6,
            magnet_remanence: 3.0,
            b0: 7.0,
            field_gradient: 1.4e6,
            temperature: 4.0,
            quality_factor: 1e4,
            youngs_modulus: 130e9,
            density: 2330.0,
            lattice_step: 1.9e-10,
            chain_count: 1e5,
            chain_spacing: 15e-9,
            active_region_length: 100e-6,
            active_region_width: 0.2e-6,
            dark_t1: Some(200.0 * 3600.0),
            feedback: false,
            feedback_factor: 1e4,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        let lengths: [(&'static str, f64); 11] = [
            ("bridge_length", self.bridge_length),
            ("bridge_width", self.bridge_width),
            ("bridge_thickness", self.bridge_thickness),
            ("magnet_length", self.magnet_length),
            ("magnet_width", self.magnet_width),
            ("magnet_height", self.magnet_height),
            ("magnet_separation", self.magnet_separation),
            ("lattice_step", self.lattice_step),
            ("chain_spacing", self.chain_spacing),
            ("active_region_length", self.active_region_length),
            ("active_region_width", self.active_region_width),
        ];
        for (name, value) in lengths {
            ensure(value > 0.0 && value.is_finite(), name, "length must be finite and > 0")?;
        }
        ensure(self.magnet_remanence > 0.0, "magnet_remanence", "must be > 0")?;
        ensure(self.b0 >= 0.0, "b0", "must be >= 0")?;
        ensure(self.field_gradient > 0.0, "field_gradient", "must be > 0")?;
        ensure(self.temperature > 0.0, "temperature", "must be > 0")?;
        ensure(self.quality_factor >= 1.0, "quality_factor", "must be >= 1")?;
        ensure(self.youngs_modulus > 0.0, "youngs_modulus", "must be > 0")?;
        ensure(self.density > 0.0, "density", "must be > 0")?;
        ensure(self.chain_count >= 1.0, "chain_count", "must be >= 1")?;
        ensure(
            self.lattice_step < self.chain_spacing,
            "lattice_step",
            "must be smaller than chain_spacing",
        )?;
        if let Some(t1) = self.dark_t1 {
            ensure(t1 > 0.0, "dark_t1", "must be > 0")?;
        }
        ensure(self.feedback_factor >= 1.0, "feedback_factor", "must be >= 1")
    }

    /// Depth of the active region along `z` from the magnet centre.
    pub fn active_region_offset(&self) -> f64 {
        0.5 * self.magnet_width + self.magnet_separation + 0.5 * self.bridge_thickness
    }
}
