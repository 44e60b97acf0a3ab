//! Reversible entropy compression of a polarized bit register.
//!
//! A bit with bias `p` reads 0 with probability `(1 + p)/2`. The basic step
//! is the 3-bit majority compression, which swaps the joint states `011` and
//! `100` (target bit written first) so that the target ends up holding the
//! majority of the three inputs. The recursive policy groups the surviving
//! bits into disjoint triples, compresses each into its first bit and drops
//! the two support bits and any leftover bits.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::math::{binary_entropy, fabs, log};

/// Largest register the exact joint table accepts.
pub const MAX_EXACT_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoolingMode {
    Exact,
    Approximate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoolingStep {
    Compress { bits: [usize; 3], target: usize },
    /// Keeps the listed bits, in order, and forgets the rest.
    Discard { kept: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Exact { bits: usize, table: Vec<f64> },
    Approximate { biases: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingRegister {
    repr: Repr,
    history: Vec<CoolingStep>,
}

fn check_bias(p: f64) -> Result<()> {
    ensure((-1.0..=1.0).contains(&p), "bias", "must lie in [-1, 1]")
}

/// Joint distribution of independent bits, indexed by bit pattern.
fn product_table(biases: &[f64]) -> Vec<f64> {
    let mut table = vec![1.0];
    for &p in biases {
        let (zero, one) = ((1.0 + p) / 2.0, (1.0 - p) / 2.0);
        let mut next = Vec::with_capacity(table.len() * 2);
        next.extend(table.iter().map(|&x| x * zero));
        next.extend(table.iter().map(|&x| x * one));
        // Bit k is the k-th from the bottom; `next` puts the new bit on top.
        table = next;
    }
    table
}

/// Index of the state obtained by applying the majority swap to `index`.
#[inline]
fn majority_swap(index: usize, t: usize, s1: usize, s2: usize) -> usize {
    let (bt, b1, b2) = ((index >> t) & 1, (index >> s1) & 1, (index >> s2) & 1);
    let flip = (1 << t) | (1 << s1) | (1 << s2);
    if (bt == 0 && b1 == 1 && b2 == 1) || (bt == 1 && b1 == 0 && b2 == 0) {
        index ^ flip
    } else {
        index
    }
}

/// Post-compression biases of (target, first support, second support) for
/// independent inputs, from the eight outcomes.
pub fn compress3_biases(pt: f64, p1: f64, p2: f64) -> [f64; 3] {
    let table = product_table(&[pt, p1, p2]);
    let mut out = [0.0; 3];
    for (index, &prob) in table.iter().enumerate() {
        let moved = majority_swap(index, 0, 1, 2);
        for (k, o) in out.iter_mut().enumerate() {
            *o += prob * if (moved >> k) & 1 == 0 { 1.0 } else { -1.0 };
        }
    }
    out
}

impl CoolingRegister {
    pub fn new(mode: CoolingMode, biases: &[f64]) -> Result<Self> {
        for &p in biases {
            check_bias(p)?;
        }
        let repr = match mode {
            CoolingMode::Exact => {
                if biases.len() > MAX_EXACT_BITS {
                    return Err(Error::RegisterTooLarge { n: biases.len(), limit: MAX_EXACT_BITS });
                }
                Repr::Exact { bits: biases.len(), table: product_table(biases) }
            }
            CoolingMode::Approximate => Repr::Approximate { biases: biases.to_vec() },
        };
        Ok(Self { repr, history: Vec::new() })
    }

    pub fn uniform(mode: CoolingMode, n: usize, p: f64) -> Result<Self> {
        Self::new(mode, &vec![p; n])
    }

    /// Exact register from an arbitrary joint table over `bits` bits.
    pub fn from_table(bits: usize, table: Vec<f64>) -> Result<Self> {
        if bits > MAX_EXACT_BITS {
            return Err(Error::RegisterTooLarge { n: bits, limit: MAX_EXACT_BITS });
        }
        if table.len() != 1 << bits {
            return Err(Error::ShapeMismatch("joint table length must be 2^bits"));
        }
        ensure(table.iter().all(|&x| x >= 0.0), "table", "probabilities must be non-negative")?;
        let total: f64 = table.iter().sum();
        ensure(fabs(total - 1.0) < 1e-12, "table", "probabilities must sum to 1")?;
        Ok(Self { repr: Repr::Exact { bits, table }, history: Vec::new() })
    }

    pub fn mode(&self) -> CoolingMode {
        match self.repr {
            Repr::Exact { .. } => CoolingMode::Exact,
            Repr::Approximate { .. } => CoolingMode::Approximate,
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Exact { bits, .. } => *bits,
            Repr::Approximate { biases } => biases.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn history(&self) -> &[CoolingStep] {
        &self.history
    }

    /// Joint table, exact mode only.
    pub fn table(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Exact { table, .. } => Some(table),
            Repr::Approximate { .. } => None,
        }
    }

    pub fn bias(&self, bit: usize) -> Result<f64> {
        let n = self.len();
        if bit >= n {
            return Err(Error::QubitOutOfRange { index: bit, n });
        }
        Ok(match &self.repr {
            Repr::Exact { table, .. } => table
                .iter()
                .enumerate()
                .map(|(i, &x)| if (i >> bit) & 1 == 0 { x } else { -x })
                .sum(),
            Repr::Approximate { biases } => biases[bit],
        })
    }

    pub fn biases(&self) -> Vec<f64> {
        (0..self.len()).map(|b| self.bias(b).unwrap_or(0.0)).collect()
    }

    /// Shannon entropy in bits: of the joint table in exact mode, or the sum
    /// of marginal entropies in approximate mode.
    pub fn entropy(&self) -> f64 {
        match &self.repr {
            Repr::Exact { table, .. } => {
                table.iter().filter(|&&x| x > 0.0).map(|&x| -x * log(x)).sum::<f64>() / core::f64::consts::LN_2
            }
            Repr::Approximate { biases } => biases.iter().map(|&p| binary_entropy((1.0 + p) / 2.0)).sum(),
        }
    }

    pub fn compress3(&mut self, bits: (usize, usize, usize), target: usize) -> Result<()> {
        let (a, b, c) = bits;
        if a == b || b == c || a == c {
            return Err(Error::DuplicateBits);
        }
        let n = self.len();
        if let Some(&bad) = [a, b, c].iter().find(|&&x| x >= n) {
            return Err(Error::QubitOutOfRange { index: bad, n });
        }
        let (s1, s2) = match target {
            t if t == a => (b, c),
            t if t == b => (a, c),
            t if t == c => (a, b),
            _ => {
                return Err(Error::InvalidParameter { name: "target", reason: "must be one of the three bits" })
            }
        };
        match &mut self.repr {
            Repr::Exact { table, .. } => {
                for i in 0..table.len() {
                    let j = majority_swap(i, target, s1, s2);
                    if j > i {
                        table.swap(i, j);
                    }
                }
            }
            Repr::Approximate { biases } => {
                let [pt, p1, p2] = compress3_biases(biases[target], biases[s1], biases[s2]);
                biases[target] = pt;
                biases[s1] = p1;
                biases[s2] = p2;
            }
        }
        self.history.push(CoolingStep::Compress { bits: [a, b, c], target });
        Ok(())
    }

    /// Keeps only the listed bits (renumbered 0.. in the given order) and
    /// marginalizes out the rest.
    pub fn retain(&mut self, kept: &[usize]) -> Result<()> {
        let n = self.len();
        if let Some(&bad) = kept.iter().find(|&&x| x >= n) {
            return Err(Error::QubitOutOfRange { index: bad, n });
        }
        let mut seen = vec![false; n];
        for &k in kept {
            if core::mem::replace(&mut seen[k], true) {
                return Err(Error::DuplicateBits);
            }
        }
        match &mut self.repr {
            Repr::Exact { bits, table } => {
                let mut next = vec![0.0; 1 << kept.len()];
                for (i, &x) in table.iter().enumerate() {
                    let j = kept.iter().enumerate().fold(0usize, |acc, (pos, &k)| acc | (((i >> k) & 1) << pos));
                    next[j] += x;
                }
                *bits = kept.len();
                *table = next;
            }
            Repr::Approximate { biases } => {
                *biases = kept.iter().map(|&k| biases[k]).collect();
            }
        }
        self.history.push(CoolingStep::Discard { kept: kept.to_vec() });
        Ok(())
    }

    /// One round of the recursive policy. Returns the number of compressions.
    pub fn round(&mut self) -> Result<usize> {
        let triples = self.len() / 3;
        for t in 0..triples {
            self.compress3((3 * t, 3 * t + 1, 3 * t + 2), 3 * t)?;
        }
        let kept: Vec<usize> = (0..triples).map(|t| 3 * t).collect();
        self.retain(&kept)?;
        Ok(triples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoolingPolicy {
    Rounds(usize),
    TargetBias(f64),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoolingOutcome {
    pub cold_bits: usize,
    pub bias: f64,
    pub steps: usize,
    pub rounds: usize,
    /// Largest bias difference between approximate and exact tracking,
    /// available when the register fits the exact table.
    pub approximation_error: Option<f64>,
}

/// Recursive compression of `n0` bits of bias `p0`.
pub fn cool(n0: usize, p0: f64, policy: CoolingPolicy) -> Result<CoolingOutcome> {
    ensure(n0 >= 3, "n0", "needs at least three bits")?;
    ensure(p0 > 0.0 && p0 < 1.0, "p0", "must lie in (0, 1)")?;
    let (max_rounds, target) = match policy {
        CoolingPolicy::Rounds(r) => (r, None),
        CoolingPolicy::TargetBias(t) => {
            if t >= 1.0 || t.is_nan() {
                return Err(Error::UnreachableTarget { target: t });
            }
            (usize::MAX, Some(t))
        }
    };
    let mut approx = CoolingRegister::uniform(CoolingMode::Approximate, n0, p0)?;
    let mut exact = if n0 <= MAX_EXACT_BITS {
        Some(CoolingRegister::uniform(CoolingMode::Exact, n0, p0)?)
    } else {
        None
    };
    let mut steps = 0;
    let mut rounds = 0;
    let mut bias = p0;
    while rounds < max_rounds && target.is_none_or(|t| bias < t) {
        if approx.len() < 3 {
            if let Some(t) = target {
                return Err(Error::RegisterExhausted { achieved: bias, target: t });
            }
            break;
        }
        steps += approx.round()?;
        if let Some(ex) = exact.as_mut() {
            ex.round()?;
        }
        rounds += 1;
        bias = approx.bias(0)?;
    }
    let approximation_error = exact.map(|ex| {
        ex.biases().iter().zip(approx.biases()).map(|(e, a)| fabs(e - a)).fold(0.0, f64::max)
    });
    Ok(CoolingOutcome { cold_bits: approx.len(), bias, steps, rounds, approximation_error })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EntropyLimit {
    /// `n0·(1 − H₂((1+p0)/2))` in bits.
    pub exact: f64,
    /// Small-bias form `n0·p0²/(2 ln 2)`.
    pub small_bias: f64,
}

/// Extractable cold bits per unit register at bias `p`.
pub fn information_per_bit(p: f64) -> f64 {
    1.0 - binary_entropy((1.0 + p) / 2.0)
}

pub fn entropy_limit(n0: usize, p0: f64) -> Result<EntropyLimit> {
    ensure(p0 > 0.0 && p0 < 1.0, "p0", "must lie in (0, 1)")?;
    let n = n0 as f64;
    Ok(EntropyLimit {
        exact: n * information_per_bit(p0),
        small_bias: n * p0 * p0 / (2.0 * core::f64::consts::LN_2),
    })
}
