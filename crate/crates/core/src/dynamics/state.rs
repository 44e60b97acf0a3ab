use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{ensure, Error, Result};
use crate::math::sqrt;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

/// Initial state of one qubit, as a Bloch vector.
///
/// Basis index bit `q` holds qubit `q`; bit value 0 is spin up (I^z = +½).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum QubitState {
    Up,
    Down,
    Plus,
    Minus,
    PlusI,
    MinusI,
    /// Diagonal mixed state with ⟨σz⟩ = bias.
    Thermal { bias: f64 },
    Bloch { x: f64, y: f64, z: f64 },
}

impl QubitState {
    pub fn bloch(&self) -> [f64; 3] {
        match *self {
            QubitState::Up => [0.0, 0.0, 1.0],
            QubitState::Down => [0.0, 0.0, -1.0],
            QubitState::Plus => [1.0, 0.0, 0.0],
            QubitState::Minus => [-1.0, 0.0, 0.0],
            QubitState::PlusI => [0.0, 1.0, 0.0],
            QubitState::MinusI => [0.0, -1.0, 0.0],
            QubitState::Thermal { bias } => [0.0, 0.0, bias],
            QubitState::Bloch { x, y, z } => [x, y, z],
        }
    }

    /// 2×2 density matrix `(I + r·σ)/2`.
    pub fn density(&self) -> Result<[[Complex64; 2]; 2]> {
        let [x, y, z] = self.bloch();
        ensure(
            x.is_finite() && y.is_finite() && z.is_finite() && x * x + y * y + z * z <= 1.0 + 1e-12,
            "qubit state",
            "Bloch vector must have length <= 1",
        )?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Ok([[c(0.5 * (1.0 + z), 0.0), c(0.5 * x, -0.5 * y)], [c(0.5 * x, 0.5 * y), c(0.5 * (1.0 - z), 0.0)]])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    n: usize,
    rho: CMatrix,
}

impl DensityState {
    pub fn product(qubits: &[QubitState]) -> Result<Self> {
        let n = qubits.len();
        ensure(n >= 1, "qubits", "need at least one qubit")?;
        if n > MAX_QUBITS {
            return Err(Error::InvalidParameter { name: "qubits", reason: "dense simulator supports at most 12 qubits" });
        }
        let locals = qubits.iter().map(|q| q.density()).collect::<Result<Vec<_>>>()?;
        let dim = 1usize << n;
        let mut rho = CMatrix::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut v = Complex64::new(1.0, 0.0);
                for (q, local) in locals.iter().enumerate() {
                    v *= local[(a >> q) & 1][(b >> q) & 1];
                }
                rho[(a, b)] = v;
            }
        }
        Ok(Self { n, rho })
    }

    pub fn from_matrix(n: usize, rho: CMatrix) -> Result<Self> {
        ensure((1..=MAX_QUBITS).contains(&n), "n", "must be in 1..=12")?;
        if rho.dim() != 1 << n {
            return Err(Error::ShapeMismatch("density matrix dimension must be 2^n"));
        }
        Ok(Self { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for a in 0..d {
            for b in 0..d {
                s += self.rho[(a, b)].norm_sqr();
            }
        }
        s
    }

    /// Largest |ρ − ρ†| entry relative to the largest |ρ| entry.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for a in 0..d {
            for b in 0..d {
                worst = worst.max((self.rho[(a, b)] - self.rho[(b, a)].conj()).norm());
                scale = scale.max(self.rho[(a, b)].norm());
            }
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// True when `ρ + shift·I` admits a Cholesky factorization, i.e. the
    /// smallest eigenvalue exceeds `−shift`.
    pub fn is_positive(&self, shift: f64) -> bool {
        let d = self.dim();
        let mut l = CMatrix::zeros(d);
        for j in 0..d {
            let mut diag = self.rho[(j, j)].re + shift;
            for k in 0..j {
                diag -= l[(j, k)].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = sqrt(diag);
            l[(j, j)] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..d {
                let mut s = self.rho[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        true
    }

    /// Checks Hermiticity and unit trace to 10⁻¹² and eigenvalues ≥ −10⁻¹⁰.
    pub fn is_physical(&self) -> bool {
        self.hermiticity_error() <= 1e-12 && (self.trace() - 1.0).abs() <= 1e-12 && self.is_positive(1e-10)
    }

    /// ⟨I^z_q⟩ ∈ [−½, ½].
    pub fn plane_magnetization(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { index: qubit, n: self.n });
        }
        let mut m = 0.0;
        for b in 0..self.dim() {
            let sign = if (b >> qubit) & 1 == 0 { 0.5 } else { -0.5 };
            m += sign * self.rho[(b, b)].re;
        }
        Ok(m)
    }

    /// Transverse coherence ⟨σx⟩ + i⟨σy⟩ of one qubit.
    pub fn coherence(&self, qubit: usize) -> Result<Complex64> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { index: qubit, n: self.n });
        }
        let mask = 1usize << qubit;
        let mut c = Complex64::new(0.0, 0.0);
        for a in 0..self.dim() {
            if a & mask == 0 {
                c += self.rho[(a | mask, a)];
            }
        }
        Ok(c * 2.0)
    }

    /// Reduced Bloch vector of one qubit.
    pub fn bloch_vector(&self, qubit: usize) -> Result<[f64; 3]> {
        let c = self.coherence(qubit)?;
        Ok([c.re, c.im, 2.0 * self.plane_magnetization(qubit)?])
    }

    /// ⟨ψ|ρ|ψ⟩ for a pure product state given by unit Bloch vectors.
    pub fn fidelity_with_product(&self, bloch: &[[f64; 3]]) -> Result<f64> {
        if bloch.len() != self.n {
            return Err(Error::ShapeMismatch("one Bloch vector per qubit"));
        }
        let amps: Vec<[Complex64; 2]> = bloch
            .iter()
            .map(|&[x, y, z]| {
                let theta = libm::acos(z.clamp(-1.0, 1.0));
                let phi = libm::atan2(y, x);
                [
                    Complex64::new(libm::cos(theta / 2.0), 0.0),
                    Complex64::from_polar(libm::sin(theta / 2.0), phi),
                ]
            })
            .collect();
        let d = self.dim();
        let psi: Vec<Complex64> = (0..d)
            .map(|b| amps.iter().enumerate().map(|(q, a)| a[(b >> q) & 1]).product())
            .collect();
        let mut f = Complex64::new(0.0, 0.0);
        for a in 0..d {
            for b in 0..d {
                f += psi[a].conj() * self.rho[(a, b)] * psi[b];
            }
        }
        Ok(f.re)
    }
}
