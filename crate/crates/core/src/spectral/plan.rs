//! Zero-padded FFT evaluation of the transform on a full Nyquist band.
//!
//! The band is `Ω_j = Ω_c + (j - M/2) dΩ` with `dΩ = 2π / (M ds)`, so the
//! discrete transform is a scaled isometry: `‖A u‖² = (2π/ds) Σ w_k² |u_k|²`.
//! The normal operator `A*A` is diagonal, which makes the modulus projections
//! of the Gerchberg–Saxton loop exact.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grids::SGrid;

pub struct SpectralPlan {
    grid: SGrid,
    m: usize,
    omega_center: f64,
    d_omega: f64,
    weights: Vec<f64>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan")
            .field("grid", &self.grid)
            .field("m", &self.m)
            .field("omega_center", &self.omega_center)
            .field("d_omega", &self.d_omega)
            .finish()
    }
}

impl SpectralPlan {
    /// Band centered at `omega_center` with spacing at most `max_d_omega`.
    pub fn new(grid: SGrid, omega_center: f64, max_d_omega: f64) -> Result<Self> {
        if !(max_d_omega > 0.0) || !omega_center.is_finite() {
            return Err(Error::domain("spectral plan needs a positive frequency step"));
        }
        let ds = grid.ds();
        let needed = (2.0 * PI / (ds * max_d_omega)).ceil();
        if needed > (1u64 << 26) as f64 {
            return Err(Error::Resolution(format!(
                "spectral band needs {needed:.0} samples; reduce n_s or the target resolution"
            )));
        }
        let m = (needed as usize).max(2 * grid.n).next_power_of_two();
        let d_omega = 2.0 * PI / (m as f64 * ds);

        let pre = (0..grid.n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::from_polar(sign, omega_center * k as f64 * ds)
            })
            .collect();
        let s0 = grid.s_min;
        let post = (0..m)
            .map(|j| {
                let omega = omega_center + (j as f64 - (m / 2) as f64) * d_omega;
                Complex64::from_polar(1.0, omega * s0)
            })
            .collect();

        let mut planner = FftPlanner::new();
        Ok(SpectralPlan {
            grid,
            m,
            omega_center,
            d_omega,
            weights: grid.weights(),
            pre,
            post,
            inverse: planner.plan_fft_inverse(m),
            forward: planner.plan_fft_forward(m),
        })
    }

    /// Plan for a target occupying `[omega_lo, omega_hi]`, resolved by about
    /// `samples` points. The band must be at least four target widths wide.
    pub fn for_target(grid: SGrid, omega_lo: f64, omega_hi: f64, samples: usize) -> Result<Self> {
        let width = omega_hi - omega_lo;
        if !(width > 0.0) {
            return Err(Error::domain("empty target interval"));
        }
        let band = 2.0 * PI / grid.ds();
        if band < 4.0 * width {
            let need = (4.0 * width * (grid.s_max - grid.s_min) / (2.0 * PI)).ceil() as usize + 1;
            return Err(Error::Resolution(format!(
                "s-grid too coarse for the target band: need n_s >= {need}, have {}",
                grid.n
            )));
        }
        Self::new(grid, 0.5 * (omega_lo + omega_hi), width / samples.max(8) as f64)
    }

    pub fn grid(&self) -> &SGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.omega_center + (j as f64 - (self.m / 2) as f64) * self.d_omega
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.omega(j)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `F(Ω_j) = Σ_k w_k u_k exp(iΩ_j s_k)` on the whole band.
    pub fn forward(&self, u: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.grid.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        for (k, b) in buf.iter_mut().take(self.grid.n).enumerate() {
            *b = u[k] * self.pre[k] * self.weights[k];
        }
        self.inverse.process(&mut buf);
        for (b, p) in buf.iter_mut().zip(&self.post) {
            *b *= p;
        }
        buf
    }

    /// Euclidean adjoint of [`forward`](Self::forward).
    pub fn adjoint(&self, h: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(h.len(), self.m);
        let mut buf: Vec<Complex64> = h.iter().zip(&self.post).map(|(a, p)| a * p.conj()).collect();
        self.forward.process(&mut buf);
        buf.truncate(self.grid.n);
        for (k, b) in buf.iter_mut().enumerate() {
            *b *= self.pre[k].conj() * self.weights[k];
        }
        buf
    }

    /// `‖F‖_{L²}` as a Riemann sum over the band.
    pub fn norm(&self, field: &[Complex64]) -> f64 {
        (self.d_omega * field.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `√(2π)·‖u‖` in the inner product for which the plan is an isometry.
    pub fn isometric_norm(&self, u: &[Complex64]) -> f64 {
        let ds = self.grid.ds();
        let s: f64 = u
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| w * w / ds * c.norm_sqr())
            .sum();
        (2.0 * PI * s).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn forward_matches_direct_sum() {
        let grid = SGrid::new(0.01, 0.26, 33).unwrap();
        let plan = SpectralPlan::new(grid, 5000.0, 30.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random(grid.n, &mut rng);
        let f = plan.forward(&u);
        let w = grid.weights();
        for j in (0..plan.len()).step_by(17) {
            let om = plan.omega(j);
            let d: Complex64 = (0..grid.n)
                .map(|k| u[k] * w[k] * Complex64::from_polar(1.0, om * grid.s(k)))
                .sum();
            assert!((f[j] - d).norm() < 1e-10 * (1.0 + d.norm()));
        }
    }

    #[test]
    fn adjoint_identity() {
        let grid = SGrid::new(0.3, 0.9, 50).unwrap();
        let plan = SpectralPlan::new(grid, -40.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random(grid.n, &mut rng);
        let h = random(plan.len(), &mut rng);
        let au = plan.forward(&u);
        let ahh = plan.adjoint(&h);
        let lhs: Complex64 = au.iter().zip(&h).map(|(a, b)| a * b.conj()).sum();
        let rhs: Complex64 = u.iter().zip(&ahh).map(|(a, b)| a * b.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-9 * lhs.norm());
    }

    #[test]
    fn discrete_plancherel() {
        let grid = SGrid::new(0.0081, 0.2601, 1000).unwrap();
        let plan = SpectralPlan::new(grid, 5470.0, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random(grid.n, &mut rng);
        let f = plan.forward(&u);
        let ratio = plan.norm(&f) / plan.isometric_norm(&u);
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_rejected_for_wide_target() {
        let grid = SGrid::new(0.0081, 0.2601, 16).unwrap();
        let r = SpectralPlan::for_target(grid, 4000.0, 6000.0, 128);
        assert!(matches!(r, Err(Error::Resolution(_))));
    }
}
