//! Input and target intensity shapes and their truncation to compact support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation level.
pub const TRUNCATION_THRESHOLD: f64 = 1.234_098_040_866_795_6e-4; // e^-9

pub fn gaussian_ring(r: f64, r0: f64, w0p: f64) -> f64 {
    let x = (r - r0) / w0p;
    (-x * x).exp()
}

pub fn super_gaussian(z: f64, zd: f64, wtp: f64, n: u32) -> f64 {
    let x = (z - zd) / wtp;
    (-(x * x).powi(n as i32)).exp()
}

/// Flat-top envelope of order 8 with a `cos²` modulation of `m` half-periods
/// per `π² WT′`.
pub fn oscillatory_target(z: f64, zd: f64, wtp: f64, m: u32) -> f64 {
    let c = ((z - zd) * m as f64 / (2.0 * std::f64::consts::PI * wtp)).cos();
    0.8 * super_gaussian(z, zd, wtp, 8) * (c * c + 0.25)
}

/// Spatial period of the intensity modulation of [`oscillatory_target`].
pub fn modulation_period(wtp: f64, m: u32) -> f64 {
    2.0 * std::f64::consts::PI.powi(2) * wtp / m as f64
}

/// An analytic shape that can be sampled anywhere and knows its support.
pub trait Shape: Sync {
    /// Untruncated analytic value.
    fn value(&self, x: f64) -> f64;

    fn support(&self) -> (f64, f64);

    fn truncated(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x >= a && x <= b {
            self.value(x)
        } else {
            0.0
        }
    }

    fn width(&self) -> f64 {
        let (a, b) = self.support();
        b - a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    GaussianRing { center: f64, width: f64 },
    SuperGaussian { center: f64, width: f64, order: u32 },
    Oscillatory { center: f64, width: f64, modes: u32 },
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Profile::GaussianRing { center, width } => gaussian_ring(x, center, width),
            Profile::SuperGaussian { center, width, order } => super_gaussian(x, center, width, order),
            Profile::Oscillatory { center, width, modes } => oscillatory_target(x, center, width, modes),
        }
    }

    pub fn center(&self) -> f64 {
        match *self {
            Profile::GaussianRing { center, .. }
            | Profile::SuperGaussian { center, .. }
            | Profile::Oscillatory { center, .. } => center,
        }
    }

    fn envelope_order(&self) -> u32 {
        match *self {
            Profile::GaussianRing { .. } => 1,
            Profile::SuperGaussian { order, .. } => order,
            Profile::Oscillatory { .. } => 8,
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            Profile::GaussianRing { width, .. }
            | Profile::SuperGaussian { width, .. }
            | Profile::Oscillatory { width, .. } => width,
        }
    }

    /// Distance from the center at which the envelope equals `threshold`.
    pub fn half_width(&self, threshold: f64) -> Result<f64> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::domain(format!("threshold must lie in (0, 1), got {threshold}")));
        }
        if !(self.scale() > 0.0) {
            return Err(Error::domain("profile width must be positive"));
        }
        let n = self.envelope_order();
        if n == 0 {
            return Err(Error::domain("profile order must be at least 1"));
        }
        Ok(self.scale() * (-threshold.ln()).powf(0.5 / n as f64))
    }
}

/// A profile restricted to the interval where its envelope exceeds a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated {
    pub profile: Profile,
    pub threshold: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Truncated {
    pub fn new(profile: Profile, threshold: f64) -> Result<Self> {
        let h = profile.half_width(threshold)?;
        let c = profile.center();
        Ok(Truncated { profile, threshold, lo: c - h, hi: c + h })
    }
}

impl Shape for Truncated {
    fn value(&self, x: f64) -> f64 {
        self.profile.value(x)
    }

    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Full truncated support width of a Gaussian ring.
pub fn ring_support_width(w0p: f64, threshold: f64) -> Result<f64> {
    Ok(2.0 * Profile::GaussianRing { center: 0.0, width: w0p }.half_width(threshold)?)
}

/// Full truncated support width of a super-Gaussian of order `n`.
pub fn flat_top_support_width(wtp: f64, n: u32, threshold: f64) -> Result<f64> {
    Ok(2.0 * Profile::SuperGaussian { center: 0.0, width: wtp, order: n }.half_width(threshold)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    R,
    S,
    Z,
    Omega,
}

/// Nonnegative samples on a uniform grid `x0 + i dx`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    pub coordinate: Coordinate,
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl SampledProfile {
    pub fn sample(coordinate: Coordinate, x0: f64, dx: f64, n: usize, shape: &dyn Shape) -> Self {
        let values = (0..n).map(|i| shape.truncated(x0 + i as f64 * dx)).collect();
        SampledProfile { coordinate, x0, dx, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Zero every sample below `threshold` times the peak and return the
    /// index range that survives.
    pub fn truncate(&self, threshold: f64) -> Result<(SampledProfile, (usize, usize))> {
        let peak = self.values.iter().cloned().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::EmptySupport);
        }
        let cut = threshold * peak;
        let values: Vec<f64> = self.values.iter().map(|&v| if v >= cut { v } else { 0.0 }).collect();
        let first = values.iter().position(|&v| v > 0.0).ok_or(Error::EmptySupport)?;
        let last = values.iter().rposition(|&v| v > 0.0).ok_or(Error::EmptySupport)?;
        Ok((SampledProfile { values, ..self.clone() }, (first, last)))
    }
}
