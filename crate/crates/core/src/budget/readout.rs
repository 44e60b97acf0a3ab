//! Multiplexed readout by cyclic adiabatic inversion.
//!
//! Each qubit plane is swept through resonance by a frequency-modulated RF
//! field with its own modulation frequency `ω_m`. Following the effective
//! field quasi-statically, the plane pushes on the bridge with
//! `F(t) = F₀·s·Δ(t)/√(Δ(t)² + (γB₁)²)`, `Δ(t) = Ω·sin(ω_m t)`, where `s` is
//! the sign of its magnetization. The bridge is integrated as a damped
//! oscillator with white thermal force noise, and lock-in demodulation at
//! each `ω_m` recovers the sign of each plane.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::budget::mechanics::BridgeMechanics;
use crate::constants::PhysicalConstants;
use crate::error::{ensure, Error, Result};
use crate::math::{atan2, cos, fabs, sin, sqrt, TAU};
use crate::Warning;

/// Lock-in windows are whole multiples of this many bridge periods.
pub const WINDOW_GRANULE_PERIODS: usize = 50;

/// Quadrature points for the fundamental Fourier coefficient of the force.
const FOURIER_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReadoutDrive {
    /// Frequency excursion Ω, rad/s.
    pub excursion: f64,
    /// Nutation rate γB₁, rad/s.
    pub nutation_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlaneSignal {
    /// Magnetization sign, or any signed weight in [−1, 1].
    pub sign: f64,
    /// Modulation frequency ω_m, rad/s.
    pub modulation: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReadoutSetup {
    pub drive: ReadoutDrive,
    pub planes: Vec<PlaneSignal>,
    /// Full-polarization plane force F₀, N.
    pub force_amplitude: f64,
    /// Qubit spacing Δω used for the excursion check, rad/s.
    pub delta_omega: f64,
    pub steps_per_period: usize,
    /// Time before the lock-in window opens; `None` means ten ring-down times.
    pub settle_time: Option<f64>,
    /// Requested lock-in window, rounded up to whole granules, s.
    pub window: f64,
    pub thermal_noise: bool,
    pub seed: u64,
    /// Keep every n-th integration step in the trace; 0 keeps none.
    pub trace_stride: usize,
}

impl ReadoutSetup {
    pub fn new(drive: ReadoutDrive, planes: Vec<PlaneSignal>, force_amplitude: f64, delta_omega: f64) -> Self {
        Self {
            drive,
            planes,
            force_amplitude,
            delta_omega,
            steps_per_period: 128,
            settle_time: None,
            window: 1.0,
            thermal_noise: true,
            seed: 0,
            trace_stride: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PlaneReadout {
    pub modulation: f64,
    /// Lock-in output against `cos(ω_m t)`, m.
    pub in_phase: f64,
    /// Lock-in output against `sin(ω_m t)`, m.
    pub quadrature: f64,
    pub amplitude: f64,
    pub phase: f64,
    /// Noise-free response of a `+1` plane.
    pub expected_amplitude: f64,
    pub expected_phase: f64,
    /// Sign of the projection onto the expected response direction.
    pub recovered_sign: i8,
    /// Analytic standard deviation of either lock-in output from thermal noise.
    pub noise_sigma: f64,
}

impl PlaneReadout {
    /// Projection of the lock-in output onto the expected direction, in
    /// units of `noise_sigma`.
    pub fn snr(&self) -> f64 {
        let proj = self.in_phase * sin(self.expected_phase) + self.quadrature * cos(self.expected_phase);
        proj / self.noise_sigma
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TracePoint {
    pub time: f64,
    pub displacement: f64,
    /// Running lock-in outputs per plane as `(I, Q)`; zero before the
    /// window opens.
    pub lockin: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReadoutResult {
    pub planes: Vec<PlaneReadout>,
    pub settle_time: f64,
    pub window: f64,
    pub time_step: f64,
    pub trace: Vec<TracePoint>,
    pub warnings: Vec<Warning>,
}

/// Quasi-static inversion force shape for unit `F₀` and `s = +1`.
#[inline]
pub fn inversion_force(drive: &ReadoutDrive, phase: f64) -> f64 {
    let d = drive.excursion * sin(phase);
    d / sqrt(d * d + drive.nutation_rate * drive.nutation_rate)
}

/// Coefficient `b₁` of `sin(ω_m t)` in the unit force waveform.
pub fn fundamental_coefficient(drive: &ReadoutDrive) -> f64 {
    // Midpoint rule is spectrally accurate for smooth periodic integrands.
    let n = FOURIER_POINTS;
    let sum: f64 = (0..n)
        .map(|k| {
            let ph = TAU * (k as f64 + 0.5) / n as f64;
            inversion_force(drive, ph) * sin(ph)
        })
        .sum();
    2.0 * sum / n as f64
}

fn check(setup: &ReadoutSetup, mech: &BridgeMechanics) -> Result<Vec<Warning>> {
    mech.validate()?;
    if setup.planes.is_empty() {
        return Err(Error::Empty("readout planes"));
    }
    let d = &setup.drive;
    ensure(d.excursion > 0.0, "excursion", "must be > 0")?;
    ensure(d.nutation_rate > 0.0, "nutation_rate", "must be > 0")?;
    ensure(setup.force_amplitude >= 0.0, "force_amplitude", "must be >= 0")?;
    ensure(setup.steps_per_period >= 8, "steps_per_period", "must be >= 8")?;
    ensure(setup.window > 0.0, "window", "must be > 0")?;
    if let Some(s) = setup.settle_time {
        ensure(s >= 0.0, "settle_time", "must be >= 0")?;
    }
    let linewidth = mech.resonance / mech.quality_factor;
    for (i, a) in setup.planes.iter().enumerate() {
        ensure(a.modulation > 0.0, "modulation", "must be > 0")?;
        ensure((-1.0..=1.0).contains(&a.sign), "sign", "must lie in [-1, 1]")?;
        for b in &setup.planes[i + 1..] {
            if fabs(a.modulation - b.modulation) <= linewidth {
                return Err(Error::CollidingModulation { a: a.modulation, b: b.modulation });
            }
        }
    }
    let mut warnings = Vec::new();
    if setup.delta_omega > 0.0 && d.excursion > setup.delta_omega / 5.0 {
        warnings.push(Warning::LargeExcursion { excursion: d.excursion, delta_omega: setup.delta_omega });
    }
    let fastest = setup.planes.iter().map(|p| p.modulation).fold(0.0, f64::max);
    let ratio = d.excursion * fastest / (d.nutation_rate * d.nutation_rate);
    if ratio > 0.1 {
        warnings.push(Warning::NonAdiabatic { ratio });
    }
    Ok(warnings)
}

/// Time-domain simulation of the bridge and lock-in demodulation.
pub fn simulate_readout(
    setup: &ReadoutSetup,
    mech: &BridgeMechanics,
    constants: &PhysicalConstants,
) -> Result<ReadoutResult> {
    let warnings = check(setup, mech)?;
    let wc = mech.resonance;
    let period = TAU / wc;
    let dt = period / setup.steps_per_period as f64;
    let granule = WINDOW_GRANULE_PERIODS as f64 * period;
    let window_granules = libm::ceil(setup.window / granule - 1e-9).max(1.0);
    let window = window_granules * granule;
    let settle = setup.settle_time.unwrap_or(10.0 * mech.ring_down_time());
    let settle_steps = libm::ceil(settle / dt) as usize;
    let window_steps = window_granules as usize * WINDOW_GRANULE_PERIODS * setup.steps_per_period;
    let settle = settle_steps as f64 * dt;

    let mass = mech.modal_mass();
    let gamma = wc / mech.quality_factor;
    let sf = mech.force_spectral_density(constants);
    let mut noise = if setup.thermal_noise {
        let sigma = sqrt(sf / (2.0 * dt));
        let dist = Normal::new(0.0, sigma).map_err(|_| Error::InvalidParameter {
            name: "noise",
            reason: "invalid noise standard deviation",
        })?;
        Some((ChaCha8Rng::seed_from_u64(setup.seed), dist))
    } else {
        None
    };

    let drive = setup.drive;
    let f0 = setup.force_amplitude;
    let planes = &setup.planes;
    let force = |t: f64| -> f64 { planes.iter().map(|p| p.sign * inversion_force(&drive, p.modulation * t)).sum::<f64>() * f0 };

    // State (x, v); x'' = F/m − γ v − ω_c² x.
    let accel = |x: f64, v: f64, f: f64| f / mass - gamma * v - wc * wc * x;
    let (mut x, mut v) = (0.0f64, 0.0f64);
    let mut sums = alloc::vec![(0.0f64, 0.0f64); planes.len()];
    let mut trace = Vec::new();
    let total = settle_steps + window_steps;
    for step in 0..total {
        let t = step as f64 * dt;
        if step >= settle_steps {
            // Left-endpoint sums are exact over whole periods of the
            // sampled sinusoids.
            for (acc, p) in sums.iter_mut().zip(planes) {
                let ph = p.modulation * t;
                acc.0 += x * cos(ph);
                acc.1 += x * sin(ph);
            }
        }
        if setup.trace_stride > 0 && step % setup.trace_stride == 0 {
            let taken = (step + 1).saturating_sub(settle_steps);
            let norm = if taken == 0 { 0.0 } else { 2.0 / taken as f64 };
            let lockin = sums.iter().map(|&(c, s)| (c * norm, s * norm)).collect();
            trace.push(TracePoint { time: t, displacement: x, lockin });
        }
        let fn_ = match noise.as_mut() {
            Some((rng, dist)) => dist.sample(rng),
            None => 0.0,
        };
        let (f1, f2, f3) = (force(t) + fn_, force(t + dt / 2.0) + fn_, force(t + dt) + fn_);
        let k1x = v;
        let k1v = accel(x, v, f1);
        let k2x = v + 0.5 * dt * k1v;
        let k2v = accel(x + 0.5 * dt * k1x, k2x, f2);
        let k3x = v + 0.5 * dt * k2v;
        let k3v = accel(x + 0.5 * dt * k2x, k3x, f2);
        let k4x = v + dt * k3v;
        let k4v = accel(x + dt * k3x, k4x, f3);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }

    let b1 = fundamental_coefficient(&drive);
    let scale = 2.0 / window_steps as f64;
    let out = planes
        .iter()
        .zip(&sums)
        .map(|(p, &(c, s))| {
            let (i, q) = (c * scale, s * scale);
            let h: Complex64 = mech.transfer(p.modulation);
            let expected_phase = h.arg();
            let proj = i * sin(expected_phase) + q * cos(expected_phase);
            PlaneReadout {
                modulation: p.modulation,
                in_phase: i,
                quadrature: q,
                amplitude: sqrt(i * i + q * q),
                phase: atan2(i, q),
                expected_amplitude: h.norm() * b1 * f0,
                expected_phase,
                recovered_sign: if proj >= 0.0 { 1 } else { -1 },
                noise_sigma: h.norm() * sqrt(sf / window),
            }
        })
        .collect();
    Ok(ReadoutResult { planes: out, settle_time: settle, window, time_step: dt, trace, warnings })
}
