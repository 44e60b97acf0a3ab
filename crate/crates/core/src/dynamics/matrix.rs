//! Dense complex square matrices, just enough for small-register dynamics.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data length");
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `U ρ U†`
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, rhs.dim);
        let d = n * m;
        let mut out = CMatrix::zeros(d);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * d + j * m + l] = a * rhs.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// `exp(−i H t)` for Hermitian `H` by scaling and squaring of a Taylor
    /// series, truncated once a term drops below `tol` in the ∞-norm.
    pub fn expm_neg_i(h: &CMatrix, t: f64, tol: f64) -> CMatrix {
        let a = h.scale(Complex64::new(0.0, -t));
        let norm = a.norm_inf();
        let mut squarings = 0u32;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let a = a.scale(Complex64::new(scale, 0.0));
        let mut result = CMatrix::identity(h.dim);
        let mut term = CMatrix::identity(h.dim);
        for k in 1..=60 {
            term = term.matmul(&a).scale(Complex64::new(1.0 / k as f64, 0.0));
            result.add_assign(&term);
            if term.norm_inf() < tol * 1e-4 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_pauli_x() {
        // exp(−i θ σx/2) = cos(θ/2) I − i sin(θ/2) σx
        let mut h = CMatrix::zeros(2);
        h[(0, 1)] = Complex64::new(0.5, 0.0);
        h[(1, 0)] = Complex64::new(0.5, 0.0);
        let theta = 2.3_f64;
        let u = CMatrix::expm_neg_i(&h, theta, 1e-12);
        assert!((u[(0, 0)] - Complex64::new(libm::cos(theta / 2.0), 0.0)).norm() < 1e-13);
        assert!((u[(0, 1)] - Complex64::new(0.0, -libm::sin(theta / 2.0))).norm() < 1e-13);
    }

    #[test]
    fn expm_with_large_norm_is_unitary() {
        let mut h = CMatrix::zeros(4);
        for i in 0..4 {
            h[(i, i)] = Complex64::new(100.0 * i as f64, 0.0);
        }
        h[(0, 3)] = Complex64::new(40.0, 7.0);
        h[(3, 0)] = Complex64::new(40.0, -7.0);
        let u = CMatrix::expm_neg_i(&h, 1.7, 1e-12);
        let should_be_identity = u.matmul(&u.adjoint());
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((should_be_identity[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }
}
