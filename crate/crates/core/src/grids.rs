//! Coordinates and grids for the Fourier formulation.
//!
//! With `s = ρ²` and `Ω = k/(2z)` the on-axis Fresnel integral becomes a
//! one-dimensional Fourier transform. The input lives on a uniform s-grid
//! over `[(r0 - W0/2)², (r0 + W0/2)²]` and the target on a uniform Ω-grid over
//! `[k/(2zd + WT), k/(2zd - WT)]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical design constants in SI units. `w0` and `wt` are the full
/// (truncated) support widths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub k: f64,
    pub r0: f64,
    pub w0: f64,
    pub zd: f64,
    pub wt: f64,
    pub e0: f64,
}

impl DesignParams {
    pub fn new(k: f64, r0: f64, w0: f64, zd: f64, wt: f64, e0: f64) -> Result<Self> {
        let p = DesignParams { k, r0, w0, zd, wt, e0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("k", self.k),
            ("r0", self.r0),
            ("W0", self.w0),
            ("zd", self.zd),
            ("WT", self.wt),
            ("E0", self.e0),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.w0 >= 2.0 * self.r0 {
            return Err(Error::config(format!(
                "input support reaches the axis: W0 = {} >= 2 r0 = {}",
                self.w0,
                2.0 * self.r0
            )));
        }
        if self.wt >= 2.0 * self.zd {
            return Err(Error::config(format!(
                "target interval touches the source plane: WT = {} >= 2 zd = {}",
                self.wt,
                2.0 * self.zd
            )));
        }
        Ok(())
    }

    /// Nondimensional wavenumber `r0² k / zd`.
    pub fn k_bar(&self) -> f64 {
        self.r0 * self.r0 * self.k / self.zd
    }

    pub fn r_support(&self) -> (f64, f64) {
        (self.r0 - 0.5 * self.w0, self.r0 + 0.5 * self.w0)
    }

    pub fn z_support(&self) -> (f64, f64) {
        (self.zd - 0.5 * self.wt, self.zd + 0.5 * self.wt)
    }

    pub fn s_support(&self) -> (f64, f64) {
        let (a, b) = self.r_support();
        (a * a, b * b)
    }

    pub fn omega_support(&self) -> (f64, f64) {
        omega_window(self.k, self.zd, self.wt)
    }
}

/// `S_G(zd, WT)` as an Ω interval.
pub fn omega_window(k: f64, zd: f64, wt: f64) -> (f64, f64) {
    (k / (2.0 * zd + wt), k / (2.0 * zd - wt))
}

pub fn omega_of_z(z: f64, k: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("omega_of_z needs z > 0, got {z}")));
    }
    Ok(k / (2.0 * z))
}

pub fn z_of_omega(omega: f64, k: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("z_of_omega needs omega > 0, got {omega}")));
    }
    Ok(k / (2.0 * omega))
}

/// Uniform grid in squared radius, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
}

impl SGrid {
    pub fn new(s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) || n < 2 {
            return Err(Error::domain(format!(
                "invalid s-grid [{s_min}, {s_max}] with {n} samples"
            )));
        }
        Ok(SGrid { s_min, s_max, n })
    }

    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.s_max
        } else {
            self.s_min + i as f64 * self.ds()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.s(i)).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.s(i).sqrt()).collect()
    }

    /// Trapezoid weights; they sum to `s_max - s_min`.
    pub fn weights(&self) -> Vec<f64> {
        let ds = self.ds();
        let mut w = vec![ds; self.n];
        w[0] = 0.5 * ds;
        w[self.n - 1] = 0.5 * ds;
        w
    }
}

/// Uniform grid in Ω = k/(2z), endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n: usize,
}

impl OmegaGrid {
    pub fn new(omega_min: f64, omega_max: f64, n: usize) -> Result<Self> {
        if !(omega_min > 0.0 && omega_max > omega_min && omega_max.is_finite()) || n < 2 {
            return Err(Error::domain(format!(
                "invalid omega-grid [{omega_min}, {omega_max}] with {n} samples"
            )));
        }
        Ok(OmegaGrid { omega_min, omega_max, n })
    }

    pub fn d_omega(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n - 1) as f64
    }

    pub fn omega(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.omega_max
        } else {
            self.omega_min + j as f64 * self.d_omega()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.omega(j)).collect()
    }

    /// Axial positions implied by the grid (non-uniform, decreasing).
    pub fn z_points(&self, k: f64) -> Vec<f64> {
        self.points().into_iter().map(|w| k / (2.0 * w)).collect()
    }
}

pub const MIN_GRID_POINTS: usize = 16;

pub fn build_grids(params: &DesignParams, n_s: usize, n_omega: usize) -> Result<(SGrid, OmegaGrid)> {
    params.validate()?;
    if n_s < MIN_GRID_POINTS || n_omega < MIN_GRID_POINTS {
        return Err(Error::config(format!(
            "grids need at least {MIN_GRID_POINTS} points, got n_s = {n_s}, n_omega = {n_omega}"
        )));
    }
    let (s_min, s_max) = params.s_support();
    let (w_min, w_max) = params.omega_support();
    Ok((SGrid::new(s_min, s_max, n_s)?, OmegaGrid::new(w_min, w_max, n_omega)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn remote() -> DesignParams {
        DesignParams::new(9.5e6, 0.3, 0.42, 1000.0, 263.21, 1.0).unwrap()
    }

    #[test]
    fn omega_z_examples() {
        assert_eq!(omega_of_z(1000.0, 9.5e6).unwrap(), 4750.0);
        assert_eq!(z_of_omega(4750.0, 9.5e6).unwrap(), 1000.0);
        let w = omega_of_z(137.5, 2.0).unwrap();
        assert!((z_of_omega(w, 2.0).unwrap() - 137.5).abs() < 1e-12);
        assert!(omega_of_z(0.0, 1.0).is_err());
        assert!(omega_of_z(-1.0, 1.0).is_err());
        assert!(z_of_omega(0.0, 1.0).is_err());
    }

    #[test]
    fn build_grids_examples() {
        let p = remote();
        let (sg, og) = build_grids(&p, 4096, 4096).unwrap();
        assert!((sg.s_min - 0.0081).abs() < 1e-16);
        assert!((sg.s_max - 0.2601).abs() < 1e-15);
        assert_eq!(sg.s(sg.n - 1), sg.s_max);
        assert!((og.omega_min - 9.5e6 / 2263.21).abs() < 1e-9);
        assert!((og.omega_max - 9.5e6 / 1736.79).abs() < 1e-9);
        let w: f64 = sg.weights().iter().sum();
        assert!((w - (sg.s_max - sg.s_min)).abs() < 1e-14 * sg.s_max * sg.n as f64);
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(DesignParams::new(9.5e6, 0.3, 0.6, 1000.0, 100.0, 1.0).is_err());
        assert!(DesignParams::new(9.5e6, 0.3, 0.42, 1000.0, 2000.0, 1.0).is_err());
        assert!(DesignParams::new(-1.0, 0.3, 0.42, 1000.0, 100.0, 1.0).is_err());
        let p = remote();
        assert!(build_grids(&p, 8, 4096).is_err());
    }

    proptest! {
        #[test]
        fn omega_z_roundtrip(z in 1e-3f64..1e6, k in 1.0f64..1e8) {
            let back = z_of_omega(omega_of_z(z, k).unwrap(), k).unwrap();
            prop_assert!(((back - z) / z).abs() < 1e-14);
        }

        #[test]
        fn z_of_omega_decreasing(a in 1e-3f64..1e6, b in 1e-3f64..1e6, k in 1.0f64..1e8) {
            prop_assume!(a != b);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(z_of_omega(lo, k).unwrap() > z_of_omega(hi, k).unwrap());
        }

        #[test]
        fn s_endpoints_are_squares(r0 in 0.01f64..2.0, frac in 0.01f64..0.99) {
            let w0 = 2.0 * r0 * frac;
            let p = DesignParams::new(1e6, r0, w0, 10.0, 1.0, 1.0).unwrap();
            let (sg, _) = build_grids(&p, 64, 64).unwrap();
            let a = r0 - w0 / 2.0;
            let b = r0 + w0 / 2.0;
            prop_assert_eq!(sg.s_min, a * a);
            prop_assert_eq!(sg.s_max, b * b);
        }
    }
}
