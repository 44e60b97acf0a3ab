//! Cross-chain dipolar broadening during recoupling.
//!
//! Chains form a square array of spacing D, with lateral distances measured
//! in units of the in-chain step `a` (`λ = distance / a`). Recoupling two
//! qubits `m` planes apart also couples each spin to the partner plane of
//! every neighbouring chain, with a second moment
//!
//! `(1/T₂ᵣ)² = (1/16)·(δω/m³)²·Σ (λ²/m² − 2)²/(λ²/m² + 1)⁵`.
//!
//! The gate error is `F(m) = (m³/δω)/T₂ᵣ`, which depends on the lattice only.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

use crate::config::DeviceConfig;
use crate::error::{ensure, Error, Result};
use crate::math::{fabs, sq, sqrt};

/// Ring sums stop once the largest term of a ring falls below this fraction
/// of the running sum (and the ring lies past the peak of the summand).
pub const RING_TOLERANCE: f64 = 1e-12;

/// Hard limit on the number of rings, far beyond what convergence needs.
const MAX_RINGS: i64 = 1 << 16;

/// Summand of the second moment for one neighbour at `u = λ²/m²`.
#[inline]
pub fn moment_term(u: f64) -> f64 {
    sq(u - 2.0) / powi5(u + 1.0)
}

#[inline]
fn powi5(x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 * x
}

/// Random lateral displacement of every chain, as a fraction of the spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Jitter {
    pub seed: u64,
    /// Each coordinate is displaced uniformly in `[−amplitude, amplitude]·D`.
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainLattice {
    /// Chain spacing in units of the in-chain step, `D/a`.
    pub spacing: f64,
    pub jitter: Option<Jitter>,
}

impl ChainLattice {
    pub fn new(spacing: f64) -> Result<Self> {
        ensure(spacing > 0.0 && spacing.is_finite(), "spacing", "must be finite and > 0")?;
        Ok(Self { spacing, jitter: None })
    }

    pub fn from_config(config: &DeviceConfig) -> Result<Self> {
        Self::new(config.chain_spacing / config.lattice_step)
    }

    pub fn with_jitter(mut self, jitter: Jitter) -> Result<Self> {
        ensure((0.0..0.5).contains(&jitter.amplitude), "jitter.amplitude", "must lie in [0, 0.5)")?;
        self.jitter = Some(jitter);
        Ok(self)
    }

    /// Position of chain `(i, j)` relative to the chain at the origin, in
    /// units of `a`.
    fn site(&self, i: i64, j: i64) -> (f64, f64) {
        let (mut x, mut y) = (i as f64, j as f64);
        if let Some(jit) = self.jitter {
            if jit.amplitude > 0.0 {
                let offset = |i: i64, j: i64| -> (f64, f64) {
                    let mut rng = ChaCha8Rng::seed_from_u64(jit.seed);
                    rng.set_stream(((i as u64) << 32) ^ (j as u32 as u64));
                    let dist = Uniform::new_inclusive(-jit.amplitude, jit.amplitude).expect("valid range");
                    (dist.sample(&mut rng), dist.sample(&mut rng))
                };
                let (dx, dy) = offset(i, j);
                let (ox, oy) = offset(0, 0);
                x += dx - ox;
                y += dy - oy;
            }
        }
        (x * self.spacing, y * self.spacing)
    }

    /// `Σ (λ²/m² − 2)²/(λ²/m² + 1)⁵` over all other chains, summed ring by
    /// ring of Chebyshev radius until converged.
    pub fn moment_sum(&self, m: usize) -> Result<f64> {
        self.moment_sum_rings(m, None)
    }

    /// As [`moment_sum`](Self::moment_sum), but with a fixed number of rings
    /// when `rings` is given.
    pub fn moment_sum_rings(&self, m: usize, rings: Option<usize>) -> Result<f64> {
        ensure(m >= 1, "m", "plane separation must be >= 1")?;
        let m2 = sq(m as f64);
        // Summand peaks at u = 4; rings closer than that cannot end the sum.
        let peak = 2.0 * m as f64;
        let limit = rings.map_or(MAX_RINGS, |r| r as i64);
        ensure(limit >= 1, "rings", "need at least one ring")?;
        let mut total = 0.0;
        for r in 1..=limit {
            let mut ring_max = 0.0f64;
            let mut ring_sum = 0.0;
            let mut visit = |i: i64, j: i64| {
                let (x, y) = self.site(i, j);
                let t = moment_term((x * x + y * y) / m2);
                ring_max = ring_max.max(t);
                ring_sum += t;
            };
            for k in -r..r {
                visit(k, -r);
                visit(r, k);
                visit(-k, r);
                visit(-r, -k);
            }
            total += ring_sum;
            let inner = (r as f64 - 1.0) * self.spacing;
            if rings.is_none() && inner > peak && ring_max < RING_TOLERANCE * total {
                return Ok(total);
            }
        }
        if rings.is_none() {
            return Err(Error::InvalidParameter { name: "lattice", reason: "second-moment sum did not converge" });
        }
        Ok(total)
    }

    /// Gate error `F(m) = √S/4`.
    pub fn gate_error(&self, m: usize) -> Result<f64> {
        Ok(sqrt(self.moment_sum(m)?) / 4.0)
    }
}

/// The same sum over an explicit neighbour list of `λ` values.
pub fn moment_sum_over(lambdas: &[f64], m: usize) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::Empty("neighbour list"));
    }
    ensure(m >= 1, "m", "plane separation must be >= 1")?;
    let m2 = sq(m as f64);
    Ok(lambdas.iter().map(|&l| moment_term(l * l / m2)).sum())
}

/// `T₂ᵣ` from the gate error: `m³/(δω·F(m))`.
pub fn t2_recouple(m: usize, nearest_coupling: f64, gate_error: f64) -> Result<f64> {
    ensure(nearest_coupling != 0.0, "nearest_coupling", "must be non-zero")?;
    ensure(gate_error > 0.0, "gate_error", "must be > 0")?;
    let m3 = (m as f64) * (m as f64) * (m as f64);
    Ok(m3 / (fabs(nearest_coupling) * gate_error))
}

/// Gate errors F(1..=l_max), computed once for repeated gate-count scans.
#[derive(Debug, Clone, PartialEq)]
pub struct GateErrorTable {
    lattice: ChainLattice,
    values: Vec<f64>,
}

impl GateErrorTable {
    pub fn new(lattice: ChainLattice) -> Self {
        Self { lattice, values: Vec::new() }
    }

    /// Table from precomputed values `F(1), F(2), …` of this lattice.
    pub fn from_values(lattice: ChainLattice, values: Vec<f64>) -> Result<Self> {
        ensure(values.iter().all(|v| v.is_finite() && *v >= 0.0), "values", "gate errors must be finite and >= 0")?;
        Ok(Self { lattice, values })
    }

    pub fn lattice(&self) -> &ChainLattice {
        &self.lattice
    }

    /// Fills the table up to `l_max`.
    pub fn extend_to(&mut self, l_max: usize) -> Result<()> {
        while self.values.len() < l_max {
            let m = self.values.len() + 1;
            self.values.push(self.lattice.gate_error(m)?);
        }
        Ok(())
    }

    pub fn get(&mut self, m: usize) -> Result<f64> {
        ensure(m >= 1, "m", "plane separation must be >= 1")?;
        self.extend_to(m)?;
        Ok(self.values[m - 1])
    }

    /// Already computed values, `F(1)` first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
