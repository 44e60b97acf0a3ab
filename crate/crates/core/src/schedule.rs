//! Hadamard decoupling and selective-recoupling pulse schedules.
//!
//! Each qubit in a block is assigned a row of a Sylvester Hadamard matrix as
//! its toggling-frame sign sequence over `K` slots. Selective π pulses flip
//! the sign at slot boundaries; orthogonal rows average every in-block Ising
//! coupling to zero, identical rows leave it intact. Pulses sharing a
//! boundary are serialized on one RF channel, each lasting `L_pulse/Δω`,
//! so one slot lasts `n_block · L_pulse / Δω`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::chain::SpinChainModel;
use crate::error::{ensure, Error, Result};

/// Largest Sylvester order [`hadamard`] will produce.
pub const DEFAULT_HADAMARD_CAP: usize = 1 << 20;

/// Sylvester Hadamard matrix of order `2^k`, with entries computed on demand:
/// `H[r][c] = (−1)^{popcount(r & c)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignMatrix {
    order: usize,
}

impl SignMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> i8 {
        if (row & col).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn row(&self, row: usize) -> Vec<i8> {
        (0..self.order).map(|c| self.entry(row, c)).collect()
    }
}

pub fn hadamard(order_request: usize) -> Result<SignMatrix> {
    hadamard_with_cap(order_request, DEFAULT_HADAMARD_CAP)
}

pub fn hadamard_with_cap(order_request: usize, cap: usize) -> Result<SignMatrix> {
    ensure(order_request >= 1, "order_request", "must be >= 1")?;
    let order = order_request
        .checked_next_power_of_two()
        .filter(|&o| o <= cap)
        .ok_or(Error::HadamardTooLarge { requested: order_request, cap })?;
    Ok(SignMatrix { order })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    /// Start of the pulse's serialized window, seconds from cycle start.
    pub time: f64,
    pub qubit: usize,
    /// Rotation angle about x, radians.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    pub slot_duration: f64,
    pub pulse_time: f64,
    pub slots: usize,
    /// Pulses ordered by boundary, then qubit; pulses of one block share a
    /// serialized window sequence, separate blocks run in parallel.
    pub pulses: Vec<Pulse>,
    /// Toggling-frame sign of each qubit in each slot.
    pub toggling: BTreeMap<usize, Vec<i8>>,
    pub recoupled_pair: Option<(usize, usize)>,
    pub cycle_time: f64,
}

impl PulseSchedule {
    pub fn qubit_count(&self) -> usize {
        self.toggling.keys().next_back().map_or(0, |&q| q + 1)
    }

    /// Boundary index (0..=slots) at which a pulse starting at `time` fires.
    pub fn boundary_of(&self, time: f64) -> usize {
        let idx = libm::floor(time / self.slot_duration + 1e-9);
        if idx < 0.0 {
            0
        } else {
            idx as usize
        }
    }

    /// Rebuilds the toggling signs purely from the pulse list.
    pub fn reconstruct_toggling(&self) -> BTreeMap<usize, Vec<i8>> {
        let mut flips: BTreeMap<usize, Vec<bool>> = self
            .toggling
            .keys()
            .map(|&q| (q, vec![false; self.slots + 1]))
            .collect();
        for p in &self.pulses {
            if let Some(f) = flips.get_mut(&p.qubit) {
                let b = self.boundary_of(p.time);
                if b <= self.slots {
                    f[b] ^= true;
                }
            }
        }
        flips
            .into_iter()
            .map(|(q, f)| {
                let mut sign = 1i8;
                let signs = (0..self.slots)
                    .map(|k| {
                        if f[k] {
                            sign = -sign;
                        }
                        sign
                    })
                    .collect();
                (q, signs)
            })
            .collect()
    }

    /// Pulses grouped by boundary index, preserving serialization order.
    pub fn boundary_groups(&self) -> BTreeMap<usize, Vec<Pulse>> {
        let mut groups: BTreeMap<usize, Vec<Pulse>> = BTreeMap::new();
        for p in &self.pulses {
            groups.entry(self.boundary_of(p.time)).or_default().push(*p);
        }
        groups
    }

    /// (1/K) Σ_k s_i(k) s_j(k) as an exact integer numerator over K.
    pub fn sign_overlap(&self, i: usize, j: usize) -> Option<i64> {
        let si = self.toggling.get(&i)?;
        let sj = self.toggling.get(&j)?;
        Some(si.iter().zip(sj).map(|(&a, &b)| (a as i64) * (b as i64)).sum())
    }
}

/// Builds the per-block Hadamard schedule for the whole chain.
///
/// Qubits are split into contiguous blocks of `set_size`; every block reuses
/// rows `0, 1, …` of the same Sylvester matrix, so inter-block pairs are
/// only refocused when their rows happen to differ. A recoupled pair shares
/// one row that no other qubit of its block uses.
pub fn decoupling_schedule(
    chain: &SpinChainModel,
    set_size: usize,
    pulse_length_factor: f64,
    recouple: Option<(usize, usize)>,
) -> Result<PulseSchedule> {
    let n = chain.n();
    ensure(set_size >= 1 && set_size <= n, "set_size", "must be in 1..=n")?;
    ensure(pulse_length_factor > 0.0, "pulse_length_factor", "must be > 0")?;
    ensure(chain.delta_omega() > 0.0, "delta_omega", "chain spacing must be > 0")?;

    if let Some((i, j)) = recouple {
        if i == j {
            return Err(Error::InvalidRecoupling { i, j, reason: "indices must differ" });
        }
        if i >= n || j >= n {
            return Err(Error::QubitOutOfRange { index: i.max(j), n });
        }
        if i / set_size != j / set_size {
            return Err(Error::InvalidRecoupling {
                i,
                j,
                reason: "pair spans two truncation blocks; use swaps to bring the qubits together",
            });
        }
    }

    let matrix = hadamard(set_size)?;
    let k = matrix.order();
    let pulse_time = pulse_length_factor / chain.delta_omega();
    let slot_duration = set_size as f64 * pulse_time;

    let mut rows = vec![0usize; n];
    for block_start in (0..n).step_by(set_size) {
        let block_end = (block_start + set_size).min(n);
        let mut next = 0usize;
        for q in block_start..block_end {
            match recouple {
                Some((i, j)) if q == i.max(j) => rows[q] = rows[i.min(j)],
                _ => {
                    rows[q] = next;
                    next += 1;
                }
            }
        }
    }

    let toggling: BTreeMap<usize, Vec<i8>> = (0..n).map(|q| (q, matrix.row(rows[q]))).collect();

    // Flips at boundary b: sign changes between slots b-1 and b, plus a
    // closing flip at b = K for rows that end negative.
    let mut pulses = Vec::new();
    for b in 1..=k {
        let mut serial = 0usize;
        for q in 0..n {
            // Blocks sit at distinct frequencies and are pulsed in parallel.
            if q % set_size == 0 {
                serial = 0;
            }
            let signs = &toggling[&q];
            let flip = if b < k { signs[b] != signs[b - 1] } else { signs[k - 1] < 0 };
            if flip {
                pulses.push(Pulse {
                    time: b as f64 * slot_duration + serial as f64 * pulse_time,
                    qubit: q,
                    angle: core::f64::consts::PI,
                });
                serial += 1;
            }
        }
    }

    Ok(PulseSchedule {
        slot_duration,
        pulse_time,
        slots: k,
        pulses,
        toggling,
        recoupled_pair: recouple.map(|(i, j)| (i.min(j), i.max(j))),
        cycle_time: k as f64 * slot_duration,
    })
}

/// Zeroth-order average couplings δω_ij · (1/K) Σ_k s_i(k) s_j(k), row-major.
pub fn average_couplings(schedule: &PulseSchedule, chain: &SpinChainModel) -> Result<Vec<f64>> {
    let n = chain.n();
    if schedule.toggling.len() != n || schedule.qubit_count() != n {
        return Err(Error::ShapeMismatch("schedule must cover every qubit of the chain"));
    }
    if schedule.toggling.values().any(|s| s.len() != schedule.slots) {
        return Err(Error::ShapeMismatch("toggling rows must have one sign per slot"));
    }
    let k = schedule.slots as f64;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let overlap = schedule.sign_overlap(i, j).unwrap_or(0);
            let v = if overlap == 0 { 0.0 } else { chain.coupling(i, j) * overlap as f64 / k };
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    Ok(out)
}

/// Cycle time `L · n² / Δω` of a schedule decoupling `n_block` qubits.
pub fn clock_time(n_block: usize, pulse_length_factor: f64, delta_omega: f64) -> Result<f64> {
    ensure(n_block >= 1, "n_block", "must be >= 1")?;
    ensure(delta_omega > 0.0, "delta_omega", "must be > 0")?;
    let n = n_block as f64;
    Ok(pulse_length_factor * n * n / delta_omega)
}
