//! Linear-chirp pre-compensation of group velocity dispersion.
//!
//! Units: time in fs, dispersion `γ` in fs²/m, distance in m.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChirpDesign {
    pub gamma_fs2_per_m: f64,
    pub tau_t_fs: f64,
    pub tau0_fs: f64,
    /// `α²` in fs²; negative when `γ < 0`.
    pub alpha_sq_fs2: f64,
    pub zd_m: f64,
}

/// `α² = (τ_T⁴ + 4zd²γ²)/(2zdγ)`, `τ₀² = (τ_T⁴ + 4zd²γ²)/τ_T²`.
pub fn chirp_parameters(tau_t_fs: f64, zd_m: f64, gamma_fs2_per_m: f64) -> Result<ChirpDesign> {
    if gamma_fs2_per_m == 0.0 {
        return Err(Error::domain("zero dispersion: no chirp is needed or defined"));
    }
    if !(tau_t_fs > 0.0 && zd_m > 0.0 && gamma_fs2_per_m.is_finite()) {
        return Err(Error::domain("chirp design needs tau_T > 0 and zd > 0"));
    }
    let num = tau_t_fs.powi(4) + 4.0 * zd_m * zd_m * gamma_fs2_per_m * gamma_fs2_per_m;
    Ok(ChirpDesign {
        gamma_fs2_per_m,
        tau_t_fs,
        tau0_fs: (num / (tau_t_fs * tau_t_fs)).sqrt(),
        alpha_sq_fs2: num / (2.0 * zd_m * gamma_fs2_per_m),
        zd_m,
    })
}

/// `q(z) = (1 - 2zγ/α²)² + 4z²γ²/τ₀⁴`.
pub fn q_broadening(z_m: f64, tau0_fs: f64, alpha_sq_fs2: f64, gamma_fs2_per_m: f64) -> f64 {
    let a = 1.0 - 2.0 * z_m * gamma_fs2_per_m / alpha_sq_fs2;
    let b = 2.0 * z_m * gamma_fs2_per_m / (tau0_fs * tau0_fs);
    a * a + b * b
}

impl ChirpDesign {
    pub fn alpha_fs(&self) -> f64 {
        self.alpha_sq_fs2.abs().sqrt()
    }

    pub fn q(&self, z_m: f64) -> f64 {
        q_broadening(z_m, self.tau0_fs, self.alpha_sq_fs2, self.gamma_fs2_per_m)
    }

    /// `W(z) = τ₀ √q(z)`, the 1/e field half-width in time.
    pub fn width_fs(&self, z_m: f64) -> f64 {
        self.tau0_fs * self.q(z_m).sqrt()
    }

    /// Closed-form `dW/dz` in fs/m.
    pub fn width_slope(&self, z_m: f64) -> f64 {
        let g = self.gamma_fs2_per_m;
        let a = 1.0 - 2.0 * z_m * g / self.alpha_sq_fs2;
        let t4 = self.tau0_fs.powi(4);
        let dq = -4.0 * g / self.alpha_sq_fs2 * a + 8.0 * z_m * g * g / t4;
        self.tau0_fs * dq / (2.0 * self.q(z_m).sqrt())
    }
}

/// Target profile multiplied by `q(z)^{1/4}`.
pub struct PulseTarget<S> {
    pub base: S,
    pub chirp: ChirpDesign,
}

impl<S: Shape> Shape for PulseTarget<S> {
    fn value(&self, z: f64) -> f64 {
        self.chirp.q(z).powf(0.25) * self.base.value(z)
    }

    fn support(&self) -> (f64, f64) {
        self.base.support()
    }
}

/// `|E(0, z, t)|²` on a `(z, t)` mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityMesh {
    pub z_m: Vec<f64>,
    pub t_fs: Vec<f64>,
    /// Row per `z`.
    pub intensity: Vec<Vec<f64>>,
}

/// Separable on-axis intensity `q^{-1/2} exp(-2t²/(τ₀² q)) |E_spatial(0, z)|²`.
pub fn spatiotemporal_on_axis(spatial_modulus: &[f64], z_m: &[f64], chirp: &ChirpDesign, t_fs: &[f64]) -> Result<IntensityMesh> {
    if spatial_modulus.len() != z_m.len() {
        return Err(Error::GridMismatch("spatial samples and z grid differ in length".into()));
    }
    let intensity = z_m
        .par_iter()
        .zip(spatial_modulus)
        .map(|(&z, &e)| {
            let q = chirp.q(z);
            let w2 = chirp.tau0_fs * chirp.tau0_fs * q;
            t_fs.iter().map(|&t| e * e / q.sqrt() * (-2.0 * t * t / w2).exp()).collect()
        })
        .collect();
    Ok(IntensityMesh { z_m: z_m.to_vec(), t_fs: t_fs.to_vec(), intensity })
}

impl IntensityMesh {
    /// Full width at half maximum of row `i`, by linear interpolation.
    pub fn fwhm(&self, i: usize) -> Option<f64> {
        let row = &self.intensity[i];
        let peak = row.iter().cloned().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return None;
        }
        let half = 0.5 * peak;
        let above: Vec<usize> = (0..row.len()).filter(|&j| row[j] >= half).collect();
        let (&a, &b) = (above.first()?, above.last()?);
        if a == 0 || b + 1 == row.len() {
            return None;
        }
        let cross = |j0: usize, j1: usize| {
            let t = (half - row[j0]) / (row[j1] - row[j0]);
            self.t_fs[j0] + t * (self.t_fs[j1] - self.t_fs[j0])
        };
        Some(cross(b, b + 1) - cross(a - 1, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_numbers() {
        let c = chirp_parameters(50.0, 1000.0, 20.0).unwrap();
        assert!((c.alpha_fs() - 200.39).abs() < 0.01);
        assert!((c.tau0_fs - 801.56).abs() < 0.01);
        assert!((c.q(1000.0) - 2500.0 / 642_500.0).abs() < 1e-15);
        assert_eq!(c.q(0.0), 1.0);
        assert!((c.width_fs(1000.0) / 50.0 - 1.0).abs() < 1e-10);
        assert!(c.width_slope(1000.0).abs() < 1e-9);
        let h = 1e-3;
        let fd = (c.width_fs(1000.0 + h) - c.width_fs(1000.0 - h)) / (2.0 * h);
        assert!(fd.abs() < 1e-6);
        assert!((c.width_slope(700.0) - (c.width_fs(700.0 + h) - c.width_fs(700.0 - h)) / (2.0 * h)).abs() < 1e-6);
        assert!((c.q(1000.0).powf(0.25) - (50.0f64 / c.tau0_fs).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_dispersion() {
        assert!(chirp_parameters(50.0, 1000.0, 0.0).is_err());
        let c = chirp_parameters(50.0, 1000.0, 1e-9).unwrap();
        assert!((c.tau0_fs - 50.0).abs() < 1e-9);
    }

    #[test]
    fn mesh_is_rank_one_with_expected_slices() {
        let c = chirp_parameters(50.0, 1000.0, 20.0).unwrap();
        let z: Vec<f64> = (0..41).map(|i| 980.0 + i as f64).collect();
        let e: Vec<f64> = z.iter().map(|&x| 1.0 + 0.01 * (x - 1000.0)).collect();
        let t: Vec<f64> = (0..401).map(|i| -200.0 + i as f64).collect();
        let mesh = spatiotemporal_on_axis(&e, &z, &c, &t).unwrap();
        let mid = 200;
        for (i, row) in mesh.intensity.iter().enumerate() {
            assert!((row[mid].sqrt() - c.q(z[i]).powf(-0.25) * e[i]).abs() < 1e-12 * row[mid].sqrt());
        }
        // each row is its t = 0 value times a unit Gaussian of width τ₀√q(z)
        for (i, row) in mesh.intensity.iter().enumerate() {
            let w2 = c.tau0_fs.powi(2) * c.q(z[i]);
            for (j, v) in row.iter().enumerate() {
                let expect = row[mid] * (-2.0 * t[j] * t[j] / w2).exp();
                assert!((v - expect).abs() <= 1e-14 * row[mid]);
            }
        }
        let i0 = 20;
        let fwhm = mesh.fwhm(i0).unwrap();
        let expect = 50.0 * (2.0 * 2f64.ln()).sqrt();
        assert!((fwhm / expect - 1.0).abs() < 1e-3, "{fwhm} vs {expect}");
    }

    proptest! {
        #[test]
        fn gamma_sign_symmetry(z in 0.0f64..3000.0, g in 0.1f64..100.0) {
            let c = chirp_parameters(50.0, 1000.0, g).unwrap();
            let a = q_broadening(z, c.tau0_fs, c.alpha_sq_fs2, g);
            let b = q_broadening(z, c.tau0_fs, -c.alpha_sq_fs2, -g);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-12));
        }

        #[test]
        fn scaling_leaves_tau0(c in 0.1f64..10.0, g in 0.1f64..100.0) {
            let a = chirp_parameters(50.0, 1000.0, g).unwrap();
            let b = chirp_parameters(50.0, 1000.0 / c, g * c).unwrap();
            prop_assert!((a.tau0_fs - b.tau0_fs).abs() < 1e-9 * a.tau0_fs);
        }

        #[test]
        fn q_minimal_at_zd(d in 1e-3f64..100.0) {
            let c = chirp_parameters(50.0, 1000.0, 20.0).unwrap();
            prop_assert!(c.q(1000.0 + d) > c.q(1000.0));
            prop_assert!(c.q(1000.0 - d) > c.q(1000.0));
        }
    }
}
