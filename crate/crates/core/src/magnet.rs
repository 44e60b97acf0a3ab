//! Stray field of a uniformly magnetized rectangular prism.
//!
//! The magnet is polarized along `z`. Outside the body the field follows
//! from the magnetic surface charges on the two `z` faces; summing the
//! charged-rectangle solutions over the eight corners gives
//!
//! `B^z = −(μ₀M/4π) Σ (−1)^{i+j+k} atan(x_i y_j / (z_k r_ijk))`
//!
//! with `x_i = x ± L/2` and so on. The gradient is a central finite
//! difference of this closed form with a step of 10⁻⁴ times the distance
//! to the magnet surface.

use alloc::vec::Vec;

use crate::config::DeviceConfig;
use crate::error::{ensure, Error, Result};
use crate::math::{atan2, fabs, sqrt};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrismMagnet {
    /// Full edge lengths along x, y, z.
    pub dimensions: Vec3,
    /// μ₀M along z, tesla.
    pub polarization: f64,
    /// Centre of the prism.
    pub center: Vec3,
}

/// Relative step used by [`PrismMagnet::gradient_at`].
pub const GRADIENT_STEP_FRACTION: f64 = 1e-4;

impl PrismMagnet {
    pub fn new(dimensions: Vec3, polarization: f64, center: Vec3) -> Result<Self> {
        for d in dimensions {
            ensure(d > 0.0 && d.is_finite(), "dimensions", "must be finite and > 0")?;
        }
        ensure(polarization > 0.0, "polarization", "must be > 0")?;
        Ok(Self { dimensions, polarization, center })
    }

    /// Magnet placed so that the centre of the active region is the origin.
    ///
    /// The active region sits at the magnet mid-length and mid-height, at
    /// the bridge mid-thickness across the gap `s` from the `+z` face.
    pub fn from_config(config: &DeviceConfig) -> Result<Self> {
        Self::new(
            [config.magnet_length, config.magnet_height, config.magnet_width],
            config.magnet_remanence,
            [0.0, 0.0, -config.active_region_offset()],
        )
    }

    fn local(&self, p: Vec3) -> Vec3 {
        [p[0] - self.center[0], p[1] - self.center[1], p[2] - self.center[2]]
    }

    fn half(&self) -> Vec3 {
        [0.5 * self.dimensions[0], 0.5 * self.dimensions[1], 0.5 * self.dimensions[2]]
    }

    /// Euclidean distance from `point` to the prism; zero on or inside it.
    pub fn distance_to_surface(&self, point: Vec3) -> f64 {
        let q = self.local(point);
        let h = self.half();
        let mut d2 = 0.0;
        for k in 0..3 {
            let e = fabs(q[k]) - h[k];
            if e > 0.0 {
                d2 += e * e;
            }
        }
        sqrt(d2)
    }

    fn is_strictly_inside(&self, point: Vec3) -> bool {
        let q = self.local(point);
        let h = self.half();
        (0..3).all(|k| fabs(q[k]) < h[k])
    }

    /// B^z in tesla at `point`.
    pub fn field_at(&self, point: Vec3) -> Result<f64> {
        if self.is_strictly_inside(point) {
            return Err(Error::InsideMagnet { x: point[0], y: point[1], z: point[2] });
        }
        let q = self.local(point);
        let h = self.half();
        let xs = [q[0] + h[0], q[0] - h[0]];
        let ys = [q[1] + h[1], q[1] - h[1]];
        let zs = [q[2] + h[2], q[2] - h[2]];
        let mut sum = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                for (k, &z) in zs.iter().enumerate() {
                    let r = sqrt(x * x + y * y + z * z);
                    let term = atan_ratio(x * y, z * r);
                    if (i + j + k) % 2 == 0 {
                        sum += term;
                    } else {
                        sum -= term;
                    }
                }
            }
        }
        Ok(-self.polarization / (4.0 * core::f64::consts::PI) * sum)
    }

    /// ∂B^z/∂z in T/m by central difference with an explicit step.
    pub fn gradient_with_step(&self, point: Vec3, step: f64) -> Result<f64> {
        ensure(step > 0.0, "step", "must be > 0")?;
        let up = self.field_at([point[0], point[1], point[2] + step])?;
        let down = self.field_at([point[0], point[1], point[2] - step])?;
        Ok((up - down) / (2.0 * step))
    }

    /// ∂B^z/∂z in T/m with the step set to 10⁻⁴ of the distance to the magnet.
    pub fn gradient_at(&self, point: Vec3) -> Result<f64> {
        let d = self.distance_to_surface(point);
        if d <= 0.0 {
            return Err(Error::InsideMagnet { x: point[0], y: point[1], z: point[2] });
        }
        self.gradient_with_step(point, GRADIENT_STEP_FRACTION * d)
    }
}

/// `atan(num/den)` on the principal branch, finite when `den == 0`.
fn atan_ratio(num: f64, den: f64) -> f64 {
    if den < 0.0 {
        atan2(-num, -den)
    } else {
        atan2(num, den)
    }
}

/// Axis-aligned sampling box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub center: Vec3,
    /// Full extent along each axis; zero makes that axis a plane.
    pub size: Vec3,
}

impl Region {
    /// The active region: length × width in the x–y plane at the chain plane.
    pub fn active(config: &DeviceConfig) -> Self {
        Self {
            center: [0.0; 3],
            size: [config.active_region_length, config.active_region_width, 0.0],
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            center: self.center,
            size: [self.size[0] * factor, self.size[1] * factor, self.size[2] * factor],
        }
    }

    fn axis_points(&self, axis: usize, count: usize) -> impl Iterator<Item = f64> + '_ {
        let c = self.center[axis];
        let s = self.size[axis];
        (0..count).map(move |i| {
            if count == 1 {
                c
            } else {
                c - 0.5 * s + s * i as f64 / (count - 1) as f64
            }
        })
    }

    /// Grid points in x-major order.
    pub fn grid(&self, counts: [usize; 3]) -> Result<Vec<Vec3>> {
        ensure(counts.iter().all(|&c| c >= 1), "grid", "every axis needs at least one point")?;
        let mut pts = Vec::with_capacity(counts[0] * counts[1] * counts[2]);
        for x in self.axis_points(0, counts[0]) {
            for y in self.axis_points(1, counts[1]) {
                for z in self.axis_points(2, counts[2]) {
                    pts.push([x, y, z]);
                }
            }
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FieldSample {
    pub point: Vec3,
    pub bz: f64,
    pub dbzdz: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UniformityReport {
    pub samples: Vec<FieldSample>,
    pub bz_min: f64,
    pub bz_max: f64,
    pub gradient_min: f64,
    pub gradient_max: f64,
    /// (max − min)/|mean| of B^z.
    pub bz_relative_spread: f64,
    /// (max − min)/|mean| of ∂B^z/∂z.
    pub gradient_relative_spread: f64,
}

impl UniformityReport {
    pub fn field_map(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.bz).collect()
    }

    pub fn mean_gradient(&self) -> f64 {
        self.samples.iter().map(|s| s.dbzdz).sum::<f64>() / self.samples.len() as f64
    }
}

/// Samples field and gradient of a single point; the building block for
/// parallel callers that split the grid themselves.
pub fn sample(magnet: &PrismMagnet, point: Vec3) -> Result<FieldSample> {
    Ok(FieldSample { point, bz: magnet.field_at(point)?, dbzdz: magnet.gradient_at(point)? })
}

/// Collects samples into extrema and relative spreads.
pub fn summarize(samples: Vec<FieldSample>) -> Result<UniformityReport> {
    let first = *samples.first().ok_or(Error::Empty("uniformity grid"))?;
    let mut r = UniformityReport {
        bz_min: first.bz,
        bz_max: first.bz,
        gradient_min: first.dbzdz,
        gradient_max: first.dbzdz,
        bz_relative_spread: 0.0,
        gradient_relative_spread: 0.0,
        samples: Vec::new(),
    };
    let (mut bz_sum, mut g_sum) = (0.0, 0.0);
    for s in &samples {
        r.bz_min = r.bz_min.min(s.bz);
        r.bz_max = r.bz_max.max(s.bz);
        r.gradient_min = r.gradient_min.min(s.dbzdz);
        r.gradient_max = r.gradient_max.max(s.dbzdz);
        bz_sum += s.bz;
        g_sum += s.dbzdz;
    }
    let n = samples.len() as f64;
    let spread = |lo: f64, hi: f64, mean: f64| if mean == 0.0 { 0.0 } else { (hi - lo) / fabs(mean) };
    r.bz_relative_spread = spread(r.bz_min, r.bz_max, bz_sum / n);
    r.gradient_relative_spread = spread(r.gradient_min, r.gradient_max, g_sum / n);
    r.samples = samples;
    Ok(r)
}

pub fn uniformity_report(magnet: &PrismMagnet, region: &Region, counts: [usize; 3]) -> Result<UniformityReport> {
    let samples = region
        .grid(counts)?
        .into_iter()
        .map(|p| sample(magnet, p))
        .collect::<Result<Vec<_>>>()?;
    summarize(samples)
}
