//! One function per subcommand; each returns a serializable report.

use rayon::prelude::*;
use serde::Serialize;
use siqc_core::budget::{
    self, decoherence_budget, plane_force, qubit_spacing, simulate_readout, t2_bridge, t2_interchain, t2_recouple,
    BudgetRequest, ChainLattice, DecoherenceBudget, GateBudget, GateErrorTable, Jitter, PlaneSignal, ReadoutDrive,
    ReadoutResult, ReadoutSetup,
};
use siqc_core::chain::{build_chain, next_nearest_ratio, plane_bandwidth};
use siqc_core::cooling::{cool, entropy_limit, CoolingPolicy};
use siqc_core::dynamics::{DensityState, Simulator};
use siqc_core::feasibility::{log_spaced_counts, scalability_point, Measurability, ScalabilityPoint};
use siqc_core::magnet::{uniformity_report, PrismMagnet, Region};
use siqc_core::schedule::{decoupling_schedule, PulseSchedule};
use siqc_core::Warning;

use crate::config::{AppConfig, MechanicsModel, ScenarioConfig};
use crate::CliError;

const TAU: f64 = std::f64::consts::TAU;

fn report_warnings(warnings: &[Warning]) {
    for w in warnings {
        log::warn!("{w}");
    }
}

/// Chain lattice with the optional seeded jitter applied.
pub fn lattice(cfg: &AppConfig, seed: u64) -> Result<ChainLattice, CliError> {
    let base = ChainLattice::from_config(&cfg.device)?;
    Ok(match cfg.analysis.lattice_jitter {
        Some(amplitude) if amplitude > 0.0 => base.with_jitter(Jitter { seed, amplitude })?,
        _ => base,
    })
}

fn nearest_coupling(cfg: &AppConfig) -> Result<f64, CliError> {
    Ok(build_chain(&cfg.device, 2, cfg.device.field_gradient)?.nearest_coupling())
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSummary {
    pub delta_omega_hz: f64,
    pub nearest_coupling_hz: f64,
    pub next_nearest_ratio: f64,
    pub first_larmor_hz: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MagnetSummary {
    pub polarization_t: f64,
    pub field_t: f64,
    pub gradient_t_per_um: f64,
    /// Gradient assumed for the Larmor ladder.
    pub configured_gradient_t_per_um: f64,
    pub field_relative_spread: f64,
    pub gradient_relative_spread: f64,
    pub plane_bandwidth_hz: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MechanicsSummary {
    pub model: MechanicsModel,
    pub spring_constant_n_per_m: f64,
    pub resonance_hz: f64,
    pub quality_factor: f64,
    pub temperature_k: f64,
    pub force_noise_n_per_rthz: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecoherenceSummary {
    pub t2_bridge_s: f64,
    pub t2_interchain_s: f64,
    pub gate_error_m1: f64,
    pub t2_recouple_m1_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignalSummary {
    pub plane_force_n: f64,
    pub threshold_n: f64,
    pub p_min_one_qubit: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub chain: ChainSummary,
    pub magnet: MagnetSummary,
    pub mechanics: MechanicsSummary,
    pub decoherence: DecoherenceSummary,
    pub signal: SignalSummary,
}

pub fn design_report(cfg: &AppConfig, seed: u64) -> Result<DesignReport, CliError> {
    let d = &cfg.device;
    let chain = build_chain(d, cfg.analysis.design.chain_qubits, d.field_gradient)?;
    let magnet = PrismMagnet::from_config(d)?;
    let field = magnet.field_at([0.0; 3])?;
    let gradient = magnet.gradient_at([0.0; 3])?;
    let uniform = uniformity_report(&magnet, &Region::active(d), cfg.analysis.design.grid)?;
    let mech = cfg.mechanics()?;
    let k = &d.constants;
    let lat = lattice(cfg, seed)?;
    let f1 = lat.gate_error(1)?;
    let meas = Measurability::new(d, &cfg.analysis.feasibility)?;
    let p_min = match meas.min_polarization(1) {
        Ok(p) => Some(p),
        Err(siqc_core::Error::NotMeasurable) => None,
        Err(e) => return Err(e.into()),
    };
    let mut t2c = t2_bridge(&mech, chain.delta_omega(), d.lattice_step, k)?;
    if d.feedback {
        t2c *= d.feedback_factor;
    }
    Ok(DesignReport {
        chain: ChainSummary {
            delta_omega_hz: chain.delta_omega() / TAU,
            nearest_coupling_hz: chain.nearest_coupling() / TAU,
            next_nearest_ratio: next_nearest_ratio(),
            first_larmor_hz: chain.larmor()[0] / TAU,
        },
        magnet: MagnetSummary {
            polarization_t: magnet.polarization,
            field_t: field,
            gradient_t_per_um: gradient * 1e-6,
            configured_gradient_t_per_um: d.field_gradient * 1e-6,
            field_relative_spread: uniform.bz_relative_spread,
            gradient_relative_spread: uniform.gradient_relative_spread,
            plane_bandwidth_hz: plane_bandwidth(d, &uniform.field_map())? / TAU,
        },
        mechanics: MechanicsSummary {
            model: cfg.analysis.mechanics,
            spring_constant_n_per_m: mech.spring_constant,
            resonance_hz: mech.resonance_hz(),
            quality_factor: mech.quality_factor,
            temperature_k: mech.temperature,
            force_noise_n_per_rthz: mech.thermal_force_noise(k, 1.0)?,
        },
        decoherence: DecoherenceSummary {
            t2_bridge_s: t2c,
            t2_interchain_s: t2_interchain(d.chain_spacing, k)?,
            gate_error_m1: f1,
            t2_recouple_m1_s: t2_recouple(1, chain.nearest_coupling(), f1)?,
        },
        signal: SignalSummary { plane_force_n: meas.plane_force, threshold_n: meas.threshold, p_min_one_qubit: p_min },
    })
}

/// Gate-count budget with the gate-error table filled in parallel up to
/// the block sizes the sweep will visit.
fn prepared_budget(cfg: &AppConfig, seed: u64, max_n: usize) -> Result<GateBudget, CliError> {
    let lat = lattice(cfg, seed)?;
    let dw = qubit_spacing(&cfg.device);
    let nn = nearest_coupling(cfg)?;
    let t2_max = cfg.analysis.t2_other.iter().cloned().fold(0.0, f64::max);
    let l_guess = 2.0 * budget::continuous_optimum(nn, t2_max) + 4.0;
    let l_max = (l_guess.ceil() as usize).min(max_n).max(1);
    let values = (1..=l_max).into_par_iter().map(|m| lat.gate_error(m)).collect::<Result<Vec<_>, _>>()?;
    Ok(GateBudget::new(dw, nn, GateErrorTable::from_values(lat, values)?)?)
}

pub fn scalability_curve(cfg: &AppConfig, seed: u64) -> Result<Vec<ScalabilityPoint>, CliError> {
    let sweep = cfg.analysis.sweep;
    let counts = log_spaced_counts(sweep.min_qubits, sweep.max_qubits, sweep.points)?;
    let meas = Measurability::new(&cfg.device, &cfg.analysis.feasibility)?;
    let budget = prepared_budget(cfg, seed, sweep.max_qubits)?;
    let t2 = &cfg.analysis.t2_other;
    let points = counts
        .par_iter()
        .map_with(budget, |b, &n| scalability_point(&meas, b, n, t2))
        .collect::<Result<Vec<_>, _>>()?;
    if points.iter().all(|p| p.p_min.is_none()) {
        return Err(CliError::NotMeasurable("no register size in the sweep reaches the force threshold".into()));
    }
    Ok(points)
}

pub fn schedule(cfg: &AppConfig) -> Result<PulseSchedule, CliError> {
    let s = &cfg.analysis.schedule;
    let chain = build_chain(&cfg.device, s.qubits, cfg.device.field_gradient)?;
    Ok(decoupling_schedule(&chain, s.set_size, s.pulse_length, s.recouple.map(|[i, j]| (i, j)))?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsRow {
    pub t_s: f64,
    pub magnetization: Vec<f64>,
    pub coherence: Vec<f64>,
}

/// Stroboscopic per-qubit ⟨I^z⟩ and |coherence| after each cycle.
pub fn simulate_dynamics(
    cfg: &AppConfig,
    schedule: &PulseSchedule,
    scenario: &ScenarioConfig,
) -> Result<Vec<DynamicsRow>, CliError> {
    let n = scenario.initial.len();
    if n == 0 {
        return Err(CliError::InvalidConfig("scenario.initial must list at least one qubit".into()));
    }
    if schedule.qubit_count() != n {
        return Err(CliError::InvalidConfig(format!(
            "schedule covers {} qubits but the scenario has {n}",
            schedule.qubit_count()
        )));
    }
    let chain = build_chain(&cfg.device, n, cfg.device.field_gradient)?;
    let sim = match scenario.frame {
        Some(f) => Simulator::new(&chain, f)?,
        None => Simulator::centered(&chain)?,
    };
    let initial = DensityState::product(&scenario.initial)?;
    let row = |t: f64, st: &DensityState| -> Result<DynamicsRow, CliError> {
        Ok(DynamicsRow {
            t_s: t,
            magnetization: (0..n).map(|q| st.plane_magnetization(q)).collect::<Result<_, _>>()?,
            coherence: (0..n).map(|q| st.coherence(q).map(|c| c.norm())).collect::<Result<_, _>>()?,
        })
    };
    let mut rows = vec![row(0.0, &initial)?];
    for c in 1..=scenario.cycles {
        let t = c as f64 * schedule.cycle_time;
        let st = sim.evolve(&initial, schedule, t, scenario.pulse_model)?;
        rows.push(row(t, &st)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoolingReport {
    pub cold_bits: usize,
    pub bias: f64,
    pub steps: usize,
    pub rounds: usize,
    pub entropy_bound_exact: f64,
    /// Small-bias form `n0·p0²/(2 ln 2)`.
    pub entropy_bound_approx: f64,
    pub approximation_error: Option<f64>,
}

pub fn cooling(n0: usize, p0: f64, policy: CoolingPolicy) -> Result<CoolingReport, CliError> {
    let out = cool(n0, p0, policy)?;
    let bound = entropy_limit(n0, p0)?;
    Ok(CoolingReport {
        cold_bits: out.cold_bits,
        bias: out.bias,
        steps: out.steps,
        rounds: out.rounds,
        entropy_bound_exact: bound.exact,
        entropy_bound_approx: bound.small_bias,
        approximation_error: out.approximation_error,
    })
}

pub fn budget(cfg: &AppConfig, seed: u64) -> Result<DecoherenceBudget, CliError> {
    let b = &cfg.analysis.budget;
    let request = BudgetRequest {
        qubits: b.qubits,
        t2_other: b.t2_other,
        recouple_distance: b.recouple_distance,
        block_size: b.block_size,
    };
    let mech = cfg.mechanics()?;
    Ok(decoherence_budget(&cfg.device, &mech, nearest_coupling(cfg)?, lattice(cfg, seed)?, &request)?)
}

pub fn readout(cfg: &AppConfig, seed: u64) -> Result<ReadoutResult, CliError> {
    let r = &cfg.analysis.readout;
    let mech = cfg.mechanics()?;
    let planes = r
        .modulation_ratios
        .iter()
        .zip(&r.signs)
        .map(|(&ratio, &sign)| PlaneSignal { sign, modulation: ratio * mech.resonance })
        .collect();
    let drive = ReadoutDrive { excursion: TAU * r.excursion_hz, nutation_rate: TAU * r.nutation_hz };
    let mut setup = ReadoutSetup::new(
        drive,
        planes,
        plane_force(&cfg.device) * r.polarization,
        qubit_spacing(&cfg.device),
    );
    setup.steps_per_period = r.steps_per_period;
    setup.settle_time = r.settle_s;
    setup.window = r.window_s;
    setup.thermal_noise = r.thermal_noise;
    setup.seed = seed;
    setup.trace_stride = r.trace_stride;
    let result = simulate_readout(&setup, &mech, &cfg.device.constants)?;
    report_warnings(&result.warnings);
    Ok(result)
}
