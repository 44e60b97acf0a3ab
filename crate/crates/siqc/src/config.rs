//! JSON configuration: device parameters plus analysis settings.

use std::path::Path;

use serde::{Deserialize, Serialize};
use siqc_core::budget::BridgeMechanics;
use siqc_core::dynamics::{PulseModel, QubitState};
use siqc_core::feasibility::FeasibilityOptions;
use siqc_core::DeviceConfig;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub device: DeviceConfig,
    pub analysis: AnalysisConfig,
}

/// Which bridge parameters feed the noise and T₂ᶜ estimates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MechanicsModel {
    /// Euler-Bernoulli beam from the configured geometry and material.
    #[default]
    Beam,
    /// k = 0.0042 N/m and ω_c/2π = 23 kHz, with Q and T from the device.
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub mechanics: MechanicsModel,
    pub feasibility: FeasibilityOptions,
    /// T₂⁰ values for the gate-count curves, s.
    pub t2_other: Vec<f64>,
    pub sweep: SweepConfig,
    /// Random chain displacement as a fraction of the spacing; seeded by `--seed`.
    pub lattice_jitter: Option<f64>,
    pub design: DesignConfig,
    pub budget: BudgetConfig,
    pub schedule: ScheduleConfig,
    pub dynamics: ScenarioConfig,
    pub readout: ReadoutConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            mechanics: MechanicsModel::Beam,
            feasibility: FeasibilityOptions::default(),
            t2_other: vec![25.0, 100.0, 1e4],
            sweep: SweepConfig::default(),
            lattice_jitter: None,
            design: DesignConfig::default(),
            budget: BudgetConfig::default(),
            schedule: ScheduleConfig::default(),
            dynamics: ScenarioConfig::default(),
            readout: ReadoutConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { min_qubits: 1, max_qubits: 10_000, points: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignConfig {
    /// Sample counts along x, y, z over the active region.
    pub grid: [usize; 3],
    /// Chain length used for the coupling summary.
    pub chain_qubits: usize,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self { grid: [41, 5, 1], chain_qubits: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    pub qubits: usize,
    pub t2_other: f64,
    pub recouple_distance: usize,
    /// Fixed decoupling block size; omitted means optimize.
    pub block_size: Option<usize>,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self { qubits: 100, t2_other: 25.0, recouple_distance: 1, block_size: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub qubits: usize,
    pub set_size: usize,
    /// Pulse-length factor L: each π pulse gets `L/Δω`.
    pub pulse_length: f64,
    pub recouple: Option<[usize; 2]>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self { qubits: 8, set_size: 8, pulse_length: 1.0, recouple: None }
    }
}

/// Initial state and run length for `simulate-dynamics`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// One entry per qubit.
    pub initial: Vec<QubitState>,
    pub cycles: usize,
    pub pulse_model: PulseModel,
    /// Rotating-frame angular frequency; omitted means the mean Larmor frequency.
    pub frame: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let mut initial = vec![QubitState::Up; 8];
        initial[0] = QubitState::Plus;
        Self { initial, cycles: 4, pulse_model: PulseModel::Ideal, frame: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadoutConfig {
    /// Frequency excursion Ω/2π, Hz.
    pub excursion_hz: f64,
    /// Nutation rate γB₁/2π, Hz.
    pub nutation_hz: f64,
    /// Modulation frequencies as multiples of the bridge resonance.
    pub modulation_ratios: Vec<f64>,
    pub signs: Vec<f64>,
    /// Plane polarization scaling the full-polarization force.
    pub polarization: f64,
    pub window_s: f64,
    pub settle_s: Option<f64>,
    pub steps_per_period: usize,
    pub trace_stride: usize,
    pub thermal_noise: bool,
}

impl Default for ReadoutConfig {
    fn default() -> Self {
        Self {
            excursion_hz: 300.0,
            nutation_hz: 100.0,
            modulation_ratios: vec![0.98, 1.0, 1.02],
            signs: vec![1.0, -1.0, 1.0],
            polarization: 1.0,
            window_s: 1.0,
            settle_s: None,
            steps_per_period: 128,
            trace_stride: 1024,
            thermal_noise: true,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidConfig(msg.into())
}

impl AppConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: AppConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.device.validate().map_err(|e| invalid(e.to_string()))?;
        let a = &self.analysis;
        if a.t2_other.is_empty() || a.t2_other.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(invalid("analysis.t2_other must be a non-empty list of positive times"));
        }
        if a.sweep.min_qubits < 1 || a.sweep.max_qubits < a.sweep.min_qubits || a.sweep.points < 2 {
            return Err(invalid("analysis.sweep needs 1 <= min_qubits <= max_qubits and points >= 2"));
        }
        if let Some(j) = a.lattice_jitter {
            if !(0.0..0.5).contains(&j) {
                return Err(invalid("analysis.lattice_jitter must lie in [0, 0.5)"));
            }
        }
        if a.design.grid.contains(&0) || a.design.chain_qubits < 2 {
            return Err(invalid("analysis.design needs a non-empty grid and at least two chain qubits"));
        }
        let b = &a.budget;
        if b.qubits < 1 || b.recouple_distance < 1 || !(b.t2_other > 0.0) {
            return Err(invalid("analysis.budget needs qubits >= 1, recouple_distance >= 1 and t2_other > 0"));
        }
        if let Some(l) = b.block_size {
            if l < 1 || l > b.qubits {
                return Err(invalid("analysis.budget.block_size must lie in 1..=qubits"));
            }
        }
        let s = &a.schedule;
        if s.qubits < 1 || s.set_size < 1 || s.set_size > s.qubits || !(s.pulse_length > 0.0) {
            return Err(invalid("analysis.schedule needs 1 <= set_size <= qubits and pulse_length > 0"));
        }
        let r = &a.readout;
        if r.modulation_ratios.is_empty() || r.modulation_ratios.len() != r.signs.len() {
            return Err(invalid("analysis.readout needs one sign per modulation ratio"));
        }
        if !(r.excursion_hz > 0.0 && r.nutation_hz > 0.0 && r.window_s > 0.0) {
            return Err(invalid("analysis.readout excursion, nutation and window must be > 0"));
        }
        if !(0.0..=1.0).contains(&r.polarization) {
            return Err(invalid("analysis.readout.polarization must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn mechanics(&self) -> Result<BridgeMechanics, CliError> {
        let d = &self.device;
        match self.analysis.mechanics {
            MechanicsModel::Beam => BridgeMechanics::beam(d).map_err(CliError::from),
            MechanicsModel::Nominal => {
                let n = BridgeMechanics::nominal();
                BridgeMechanics::new(n.spring_constant, n.resonance, d.quality_factor, d.temperature)
                    .map_err(CliError::from)
            }
        }
    }
}
