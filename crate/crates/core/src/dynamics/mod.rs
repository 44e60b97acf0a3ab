//! Density-matrix dynamics under the secular chain Hamiltonian
//!
//! `H/ħ = Σ_i (ω_i − ω_f) I^z_i − Σ_{i<j} δω_ij I^z_i I^z_j`
//!
//! in a frame rotating at `ω_f`. The Hamiltonian is diagonal, so free
//! evolution is a phase per matrix element. Ideal π pulses are
//! instantaneous x rotations; finite pulses drive every spin with the same
//! RF field at the addressed qubit's frequency and are integrated exactly
//! in that qubit's rotating frame. Nonsecular dipolar terms are neglected.

mod matrix;
mod state;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use matrix::CMatrix;
pub use state::{DensityState, QubitState, MAX_QUBITS};

use crate::chain::SpinChainModel;
use crate::error::{ensure, Error, Result};
use crate::math::{fabs, TAU};
use crate::schedule::PulseSchedule;
use crate::Warning;

/// Truncation tolerance for matrix exponentials.
pub const EXPM_TOLERANCE: f64 = 1e-12;

/// Time samples used to find the worst spectator excursion during a pulse.
const SPECTATOR_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DriveParams {
    /// γB₁ in rad/s.
    pub nutation_rate: f64,
    pub carrier: usize,
    /// Pulse length in seconds; zero means a π pulse, `π/γB₁`.
    pub duration: f64,
    pub ideal: bool,
}

impl DriveParams {
    pub fn ideal(carrier: usize) -> Self {
        Self { nutation_rate: 0.0, carrier, duration: 0.0, ideal: true }
    }

    pub fn finite(carrier: usize, nutation_rate: f64) -> Self {
        Self { nutation_rate, carrier, duration: 0.0, ideal: false }
    }

    fn pulse_duration(&self) -> f64 {
        if self.duration > 0.0 {
            self.duration
        } else {
            core::f64::consts::PI / self.nutation_rate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PulseModel {
    Ideal,
    Finite { nutation_rate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveReport {
    /// Worst flip probability of any spectator during the pulse, averaged
    /// over computational-basis inputs. Zero for ideal pulses.
    pub spectator_error: f64,
    pub warnings: Vec<Warning>,
}

/// Unitary of the form `U|b⟩ = phase[b] |perm[b]⟩`; closed under diagonal
/// evolution and ideal x flips.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialUnitary {
    pub perm: Vec<usize>,
    pub phase: Vec<Complex64>,
}

impl MonomialUnitary {
    pub fn identity(dim: usize) -> Self {
        Self { perm: (0..dim).collect(), phase: vec![Complex64::new(1.0, 0.0); dim] }
    }

    fn then_diagonal(&mut self, diag: &[Complex64]) {
        for (p, ph) in self.perm.iter().zip(self.phase.iter_mut()) {
            *ph *= diag[*p];
        }
    }

    /// Follows with `exp(−iπ I^x_q) = −i σx_q`.
    fn then_flip(&mut self, qubit: usize) {
        let mask = 1usize << qubit;
        for (p, ph) in self.perm.iter_mut().zip(self.phase.iter_mut()) {
            *p ^= mask;
            *ph *= Complex64::new(0.0, -1.0);
        }
    }

    pub fn compose(&self, first: &MonomialUnitary) -> MonomialUnitary {
        let perm = first.perm.iter().map(|&p| self.perm[p]).collect();
        let phase = first.perm.iter().zip(&first.phase).map(|(&p, &ph)| ph * self.phase[p]).collect();
        MonomialUnitary { perm, phase }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.perm.len());
        for (b, (&p, &ph)) in self.perm.iter().zip(&self.phase).enumerate() {
            m[(p, b)] = ph;
        }
        m
    }

    pub fn apply(&self, state: &mut DensityState) {
        let d = self.perm.len();
        let src = state.matrix().clone();
        let dst = state.matrix_mut();
        for a in 0..d {
            for b in 0..d {
                dst[(self.perm[a], self.perm[b])] = self.phase[a] * src[(a, b)] * self.phase[b].conj();
            }
        }
    }
}

/// Simulator bound to one chain and one rotating frame.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    chain: &'a SpinChainModel,
    frame: f64,
    energies: Vec<f64>,
}

impl<'a> Simulator<'a> {
    /// `frame` is the rotating-frame angular frequency; zero is the lab frame.
    pub fn new(chain: &'a SpinChainModel, frame: f64) -> Result<Self> {
        let n = chain.n();
        ensure(n <= MAX_QUBITS, "chain", "dense simulator supports at most 12 qubits")?;
        let dim = 1usize << n;
        let spin = |b: usize, q: usize| if (b >> q) & 1 == 0 { 0.5 } else { -0.5 };
        let energies = (0..dim)
            .map(|b| {
                let mut e = 0.0;
                for i in 0..n {
                    e += (chain.larmor()[i] - frame) * spin(b, i);
                    for j in (i + 1)..n {
                        e -= chain.coupling(i, j) * spin(b, i) * spin(b, j);
                    }
                }
                e
            })
            .collect();
        Ok(Self { chain, frame, energies })
    }

    /// Frame centred on the chain's mean Larmor frequency.
    pub fn centered(chain: &'a SpinChainModel) -> Result<Self> {
        let mean = chain.larmor().iter().sum::<f64>() / chain.n() as f64;
        Self::new(chain, mean)
    }

    pub fn chain(&self) -> &SpinChainModel {
        self.chain
    }

    pub fn frame(&self) -> f64 {
        self.frame
    }

    /// Eigenvalues of `H/ħ` on the computational basis, rad/s.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, state: &DensityState) -> f64 {
        (0..state.dim()).map(|b| state.matrix()[(b, b)].re * self.energies[b]).sum()
    }

    fn check_state(&self, state: &DensityState) -> Result<()> {
        if state.n() != self.chain.n() {
            return Err(Error::ShapeMismatch("state and chain qubit counts differ"));
        }
        Ok(())
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.energies.iter().map(|&e| Complex64::from_polar(1.0, -e * t)).collect()
    }

    pub fn free_evolve(&self, state: &mut DensityState, t: f64) -> Result<()> {
        self.check_state(state)?;
        let ph = self.phases(t);
        let d = state.dim();
        let rho = state.matrix_mut();
        for a in 0..d {
            for b in 0..d {
                rho[(a, b)] *= ph[a] * ph[b].conj();
            }
        }
        Ok(())
    }

    /// One schedule cycle with instantaneous pulses. Serialized pulses of a
    /// boundary collapse onto the boundary instant.
    pub fn ideal_cycle(&self, schedule: &PulseSchedule) -> Result<MonomialUnitary> {
        self.check_schedule(schedule)?;
        let slot = self.phases(schedule.slot_duration);
        let groups = schedule.boundary_groups();
        let mut u = MonomialUnitary::identity(1 << self.chain.n());
        for k in 0..schedule.slots {
            if let Some(group) = groups.get(&k) {
                for p in group {
                    u.then_flip(p.qubit);
                }
            }
            u.then_diagonal(&slot);
        }
        if let Some(group) = groups.get(&schedule.slots) {
            for p in group {
                u.then_flip(p.qubit);
            }
        }
        Ok(u)
    }

    fn check_schedule(&self, schedule: &PulseSchedule) -> Result<()> {
        let n = self.chain.n();
        if let Some(p) = schedule.pulses.iter().find(|p| p.qubit >= n) {
            return Err(Error::QubitOutOfRange { index: p.qubit, n });
        }
        ensure(schedule.slots >= 1, "schedule", "needs at least one slot")?;
        ensure(schedule.cycle_time > 0.0, "schedule", "cycle time must be > 0")
    }

    fn cycles_in(&self, schedule: &PulseSchedule, duration: f64) -> Result<usize> {
        let ratio = duration / schedule.cycle_time;
        let cycles = libm::round(ratio);
        if cycles < 1.0 || fabs(ratio - cycles) > 1e-9 * cycles.max(1.0) {
            return Err(Error::NonIntegerCycles { duration, cycle: schedule.cycle_time });
        }
        Ok(cycles as usize)
    }

    /// Stroboscopic evolution over `duration`, which must be a whole number
    /// of cycles.
    ///
    /// With finite pulses each pulse starts at its serialized time and the
    /// closing pulses of a cycle run into the first slot of the next one, so
    /// the returned state is taken after the last closing pulse.
    pub fn evolve(
        &self,
        state: &DensityState,
        schedule: &PulseSchedule,
        duration: f64,
        model: PulseModel,
    ) -> Result<DensityState> {
        self.check_state(state)?;
        self.check_schedule(schedule)?;
        let cycles = self.cycles_in(schedule, duration)?;
        let mut out = state.clone();
        match model {
            PulseModel::Ideal => {
                let u = self.ideal_cycle(schedule)?;
                for _ in 0..cycles {
                    u.apply(&mut out);
                }
            }
            PulseModel::Finite { nutation_rate } => {
                ensure(nutation_rate > 0.0, "nutation_rate", "must be > 0")?;
                let tau = core::f64::consts::PI / nutation_rate;
                if tau > schedule.pulse_time * (1.0 + 1e-12) {
                    return Err(Error::PulseOverlap { pulse: tau, window: schedule.pulse_time });
                }
                let mut cache: BTreeMap<usize, CMatrix> = BTreeMap::new();
                let mut events: Vec<(f64, usize)> = Vec::new();
                for c in 0..cycles {
                    let offset = c as f64 * schedule.cycle_time;
                    events.extend(schedule.pulses.iter().map(|p| (offset + p.time, p.qubit)));
                }
                events.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut now = 0.0;
                for (start, qubit) in events {
                    if start < now - 1e-12 * schedule.cycle_time {
                        // Parallel pulses on separate blocks are outside the
                        // single-carrier pulse model.
                        return Err(Error::PulseOverlap { pulse: now - start, window: 0.0 });
                    }
                    if start > now {
                        self.free_evolve(&mut out, start - now)?;
                    }
                    if let alloc::collections::btree_map::Entry::Vacant(e) = cache.entry(qubit) {
                        let drive = DriveParams::finite(qubit, nutation_rate);
                        e.insert(self.finite_pulse(&drive, false)?.0);
                    }
                    let rho = out.matrix().conjugate_by(&cache[&qubit]);
                    *out.matrix_mut() = rho;
                    now = start + tau;
                }
                let end = cycles as f64 * schedule.cycle_time;
                if end > now {
                    self.free_evolve(&mut out, end - now)?;
                }
            }
        }
        Ok(out)
    }

    fn drive_hamiltonian(&self, drive: &DriveParams) -> CMatrix {
        let n = self.chain.n();
        let dim = 1usize << n;
        let carrier = self.chain.larmor()[drive.carrier];
        let mut h = CMatrix::zeros(dim);
        // Energies relative to the carrier frame: shift Larmor terms by (ω_f − ω_q).
        let shift = self.frame - carrier;
        for b in 0..dim {
            let mut e = self.energies[b];
            for q in 0..n {
                e += shift * if (b >> q) & 1 == 0 { 0.5 } else { -0.5 };
            }
            h[(b, b)] = Complex64::new(e, 0.0);
            for q in 0..n {
                h[(b ^ (1 << q), b)] = Complex64::new(0.5 * drive.nutation_rate, 0.0);
            }
        }
        h
    }

    /// Pulse propagator in the simulation frame, plus the worst spectator
    /// flip probability when `track_spectators` is set.
    fn finite_pulse(&self, drive: &DriveParams, track_spectators: bool) -> Result<(CMatrix, f64)> {
        let n = self.chain.n();
        let dim = 1usize << n;
        let tau = drive.pulse_duration();
        let h = self.drive_hamiltonian(drive);

        let mut w;
        let mut worst = 0.0f64;
        if track_spectators && n > 1 {
            let step = CMatrix::expm_neg_i(&h, tau / SPECTATOR_SAMPLES as f64, EXPM_TOLERANCE);
            w = CMatrix::identity(dim);
            for _ in 0..SPECTATOR_SAMPLES {
                w = step.matmul(&w);
                for j in (0..n).filter(|&j| j != drive.carrier) {
                    let mask = 1usize << j;
                    let mut p = 0.0;
                    for b in 0..dim {
                        for bp in 0..dim {
                            if (b ^ bp) & mask != 0 {
                                p += w[(bp, b)].norm_sqr();
                            }
                        }
                    }
                    worst = worst.max(p / dim as f64);
                }
            }
        } else {
            w = CMatrix::expm_neg_i(&h, tau, EXPM_TOLERANCE);
        }

        // Back to the simulation frame with the drive axis along x at the
        // pulse centre: P = E·W·E, E = exp(−i(ω_q − ω_f)(τ/2) Σ I^z).
        let detuning = self.chain.larmor()[drive.carrier] - self.frame;
        let e: Vec<Complex64> = (0..dim)
            .map(|b| {
                let m: f64 = (0..n).map(|q| if (b >> q) & 1 == 0 { 0.5 } else { -0.5 }).sum();
                Complex64::from_polar(1.0, -detuning * 0.5 * tau * m)
            })
            .collect();
        let mut p = w;
        for a in 0..dim {
            for b in 0..dim {
                p[(a, b)] *= e[a] * e[b];
            }
        }
        Ok((p, worst))
    }

    /// Selective rotation of the carrier qubit about x; a π rotation unless
    /// `drive.duration` says otherwise.
    pub fn selective_pi(&self, state: &DensityState, drive: &DriveParams) -> Result<(DensityState, SelectiveReport)> {
        self.check_state(state)?;
        let n = self.chain.n();
        if drive.carrier >= n {
            return Err(Error::QubitOutOfRange { index: drive.carrier, n });
        }
        let mut out = state.clone();
        if drive.ideal {
            let mut u = MonomialUnitary::identity(1 << n);
            u.then_flip(drive.carrier);
            u.apply(&mut out);
            return Ok((out, SelectiveReport { spectator_error: 0.0, warnings: Vec::new() }));
        }
        ensure(drive.nutation_rate > 0.0, "nutation_rate", "must be > 0 for a finite drive")?;
        let mut warnings = Vec::new();
        let dw = self.chain.delta_omega();
        if drive.nutation_rate > dw / 5.0 {
            warnings.push(Warning::WeakSelectivity { nutation_rate: drive.nutation_rate, delta_omega: dw });
        }
        let (p, spectator_error) = self.finite_pulse(drive, true)?;
        let rho = out.matrix().conjugate_by(&p);
        *out.matrix_mut() = rho;
        Ok((out, SelectiveReport { spectator_error, warnings }))
    }
}

/// Two-level Rabi flip probability for detuning `detuning` after time `t`.
pub fn rabi_flip_probability(nutation_rate: f64, detuning: f64, t: f64) -> f64 {
    let w2 = nutation_rate * nutation_rate + detuning * detuning;
    let s = libm::sin(libm::sqrt(w2) * t / 2.0);
    nutation_rate * nutation_rate / w2 * s * s
}

/// Recoupling time giving a controlled-Z-equivalent gate: the Ising phase
/// `δω t/4` on `σz⊗σz` must reach π/4, so `t = π/δω`.
pub fn cz_gate_time(coupling: f64) -> f64 {
    TAU / 2.0 / fabs(coupling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_chain;
    use crate::config::DeviceConfig;
    use crate::schedule::decoupling_schedule;
    use approx::assert_relative_eq;

    fn chain(n: usize) -> SpinChainModel {
        build_chain(&DeviceConfig::default(), n, 1.4e6).unwrap()
    }

    #[test]
    fn free_precession_phase() {
        let c = chain(1);
        let sim = Simulator::new(&c, 0.0).unwrap();
        let mut st = DensityState::product(&[QubitState::Plus]).unwrap();
        let t = 3.3e-7;
        sim.free_evolve(&mut st, t).unwrap();
        let coh = st.coherence(0).unwrap();
        let expect = Complex64::from_polar(1.0, c.larmor()[0] * t);
        assert!((coh - expect).norm() < 1e-9, "{coh} vs {expect}");
    }

    #[test]
    fn free_precession_through_evolve() {
        let c = chain(1);
        let sim = Simulator::new(&c, 0.0).unwrap();
        let s = decoupling_schedule(&c, 1, 0.01, None).unwrap();
        assert!(s.pulses.is_empty());
        let st = DensityState::product(&[QubitState::Plus]).unwrap();
        let out = sim.evolve(&st, &s, 3.0 * s.cycle_time, PulseModel::Ideal).unwrap();
        let expect = Complex64::from_polar(1.0, c.larmor()[0] * 3.0 * s.cycle_time);
        assert!((out.coherence(0).unwrap() - expect).norm() < 1e-8);
        assert!(sim.evolve(&st, &s, 2.5 * s.cycle_time, PulseModel::Ideal).is_err());
    }

    #[test]
    fn magnetization_cases() {
        let st = DensityState::product(&[QubitState::Up, QubitState::Plus, QubitState::Thermal { bias: 0.3 }]).unwrap();
        assert_eq!(st.plane_magnetization(0).unwrap(), 0.5);
        assert!(st.plane_magnetization(1).unwrap().abs() < 1e-15);
        assert_relative_eq!(st.plane_magnetization(2).unwrap(), 0.15, max_relative = 1e-14);
        assert!(st.plane_magnetization(3).is_err());
    }

    #[test]
    fn ideal_pi_twice_is_identity() {
        let c = chain(3);
        let sim = Simulator::centered(&c).unwrap();
        let st = DensityState::product(&[QubitState::Bloch { x: 0.6, y: 0.0, z: 0.8 }, QubitState::Plus, QubitState::Down]).unwrap();
        let drive = DriveParams::ideal(1);
        let (once, _) = sim.selective_pi(&st, &drive).unwrap();
        assert!((once.plane_magnetization(2).unwrap() + 0.5).abs() < 1e-15);
        let (twice, rep) = sim.selective_pi(&once, &drive).unwrap();
        assert_eq!(rep.spectator_error, 0.0);
        for a in 0..8 {
            for b in 0..8 {
                assert!((twice.matrix()[(a, b)] - st.matrix()[(a, b)]).norm() < 1e-12);
            }
        }
        assert!(sim.selective_pi(&st, &DriveParams::ideal(3)).is_err());
    }

    #[test]
    fn ideal_pi_flips_addressed_qubit() {
        let c = chain(2);
        let sim = Simulator::centered(&c).unwrap();
        let st = DensityState::product(&[QubitState::Up, QubitState::Up]).unwrap();
        let (out, _) = sim.selective_pi(&st, &DriveParams::ideal(0)).unwrap();
        assert_eq!(out.plane_magnetization(0).unwrap(), -0.5);
        assert_eq!(out.plane_magnetization(1).unwrap(), 0.5);
    }

    #[test]
    fn finite_pulse_flips_carrier_and_warns_when_fast() {
        let c1 = chain(1);
        let sim1 = Simulator::centered(&c1).unwrap();
        let up = DensityState::product(&[QubitState::Up]).unwrap();
        let (out, _) = sim1.selective_pi(&up, &DriveParams::finite(0, 100.0)).unwrap();
        assert!((out.plane_magnetization(0).unwrap() + 0.5).abs() < 1e-10);

        let c = chain(2);
        let sim = Simulator::centered(&c).unwrap();
        let st = DensityState::product(&[QubitState::Up, QubitState::Up]).unwrap();
        let dw = c.delta_omega();
        let (out, rep) = sim.selective_pi(&st, &DriveParams::finite(0, dw / 10.0)).unwrap();
        assert!(rep.warnings.is_empty());
        assert!(out.is_physical());
        let (_, rep) = sim.selective_pi(&st, &DriveParams::finite(0, dw / 2.0)).unwrap();
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn finite_pulse_limit_matches_ideal() {
        let c = chain(2);
        let sim = Simulator::centered(&c).unwrap();
        let st = DensityState::product(&[QubitState::Plus, QubitState::Up]).unwrap();
        let dw = c.delta_omega();
        let (ideal, _) = sim.selective_pi(&st, &DriveParams::ideal(0)).unwrap();
        // Very strong drive on a single-qubit chain reproduces -iX exactly.
        let c1 = chain(1);
        let sim1 = Simulator::centered(&c1).unwrap();
        let st1 = DensityState::product(&[QubitState::Bloch { x: 0.6, y: 0.0, z: 0.8 }]).unwrap();
        let (a, _) = sim1.selective_pi(&st1, &DriveParams::finite(0, dw * 1e3)).unwrap();
        let (b, _) = sim1.selective_pi(&st1, &DriveParams::ideal(0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.matrix()[(i, j)] - b.matrix()[(i, j)]).norm() < 1e-9);
            }
        }
        assert!(ideal.is_physical());
    }

    #[test]
    fn cz_time_is_half_the_full_period() {
        assert_relative_eq!(cz_gate_time(2.0), core::f64::consts::PI / 2.0);
    }
}
