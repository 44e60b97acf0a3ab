//! Spin-chain model: zig-zag geometry, Larmor ladder and secular couplings.
//!
//! Successive nuclei step by `a` along `z` and alternate a lateral offset
//! `b = a/√2` along `x`, so nearest-neighbour bonds satisfy `cos²θ = 2/3`
//! with the field while next-nearest pairs are axial at distance `2a`.
//! Only relative geometry enters the couplings, so the choice of `x` for
//! the offset is a convention.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::DeviceConfig;
use crate::error::{ensure, Error, Result};
use crate::math::{cube, sq, sqrt};
use crate::Vec3;

/// Larmor frequencies and all-pairs coupling matrix of one chain.
///
/// Sign convention: the secular pair Hamiltonian is `−ħ δω_ij I^z_i I^z_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinChainModel {
    n: usize,
    positions: Vec<Vec3>,
    larmor: Vec<f64>,
    delta_omega: f64,
    coupling: Vec<f64>,
    gradient: f64,
}

impl SpinChainModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    /// Angular Larmor frequencies ω_i in rad/s.
    pub fn larmor(&self) -> &[f64] {
        &self.larmor
    }

    /// Inter-qubit Larmor spacing Δω in rad/s.
    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn gradient(&self) -> f64 {
        self.gradient
    }

    /// δω_ij in rad/s.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.coupling[i * self.n + j]
    }

    /// Nearest-neighbour coupling δω ≡ δω_{i,i+1}; zero for a single qubit.
    pub fn nearest_coupling(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.coupling(0, 1)
        }
    }

    /// Row-major n×n coupling matrix.
    pub fn coupling_matrix(&self) -> &[f64] {
        &self.coupling
    }

    /// Same chain with Larmor frequencies replaced; used by tests and
    /// scenarios that need a synthetic ladder.
    pub fn with_larmor(mut self, larmor: Vec<f64>) -> Result<Self> {
        if larmor.len() != self.n {
            return Err(Error::ShapeMismatch("larmor length must equal qubit count"));
        }
        self.larmor = larmor;
        Ok(self)
    }
}

/// Position of nucleus `i` relative to the first one.
pub fn zigzag_position(i: usize, a: f64) -> Vec3 {
    let b = a / core::f64::consts::SQRT_2;
    let x = if i % 2 == 1 { b } else { 0.0 };
    [x, 0.0, i as f64 * a]
}

/// Secular dipolar coupling δω for a pair separated by `r`, with the field
/// along `z`: `(μ₀/4π) γ² ħ (3cos²θ − 1) / r³`.
pub fn dipolar_coupling(config: &DeviceConfig, r: Vec3) -> f64 {
    let c = &config.constants;
    let r2 = sq(r[0]) + sq(r[1]) + sq(r[2]);
    let cos2 = sq(r[2]) / r2;
    let r3 = r2 * sqrt(r2);
    c.mu0_over_4pi() * sq(c.gyromagnetic_ratio) * c.hbar * (3.0 * cos2 - 1.0) / r3
}

pub fn build_chain(config: &DeviceConfig, n: usize, gradient: f64) -> Result<SpinChainModel> {
    ensure(n >= 1, "n", "chain needs at least one qubit")?;
    ensure(gradient > 0.0 && gradient.is_finite(), "gradient", "must be finite and > 0")?;
    config.validate()?;

    let a = config.lattice_step;
    let gamma = config.constants.gyromagnetic_ratio;
    let positions: Vec<Vec3> = (0..n).map(|i| zigzag_position(i, a)).collect();
    let delta_omega = a * gamma * gradient;
    let larmor = positions
        .iter()
        .map(|p| gamma * (config.b0 + gradient * p[2]))
        .collect();

    let mut coupling = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (pi, pj) = (positions[i], positions[j]);
            let d = dipolar_coupling(config, [pj[0] - pi[0], pj[1] - pi[1], pj[2] - pi[2]]);
            coupling[i * n + j] = d;
            coupling[j * n + i] = d;
        }
    }

    Ok(SpinChainModel { n, positions, larmor, delta_omega, coupling, gradient })
}

/// Spread (max − min) of Larmor frequencies across one qubit plane, in rad/s,
/// given B^z samples over the active region.
pub fn plane_bandwidth(config: &DeviceConfig, field_map: &[f64]) -> Result<f64> {
    let first = *field_map.first().ok_or(Error::Empty("field map"))?;
    let (lo, hi) = field_map
        .iter()
        .fold((first, first), |(lo, hi), &b| (lo.min(b), hi.max(b)));
    Ok(config.constants.gyromagnetic_ratio * (hi - lo))
}

/// Ratio |δω_{i,i+2} / δω_{i,i+1}| fixed by the zig-zag: `2 (3/2)^{3/2} / 8`.
pub fn next_nearest_ratio() -> f64 {
    2.0 * cube(sqrt(1.5)) / 8.0
}
