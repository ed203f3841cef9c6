//! The transform `F[u](Ω) = ∫ u(s) exp(iΩs) ds` of the input field written in
//! `s = ρ²`, the error functional, and direct-quadrature oracles.

mod czt;
mod field;
mod plan;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use czt::ChirpZ;
pub use field::{off_axis_field, on_axis_field, power_in_radius, FieldMesh};
pub use plan::SpectralPlan;

use crate::error::{Error, Result};
use crate::grids::{omega_window, DesignParams, OmegaGrid, SGrid};
use crate::profiles::Shape;

/// Captured-mass tolerance for [`SpectralField::mass_warning`].
pub const CAPTURED_MASS_TOLERANCE: f64 = 1e-4;

/// Input-plane field `g(s) exp(iφ(s))` sampled on the s-grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub grid: SGrid,
    pub amplitude: Vec<f64>,
    pub phase: Vec<f64>,
}

impl Aperture {
    pub fn new(grid: SGrid, amplitude: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if amplitude.len() != grid.n || phase.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "aperture samples ({}, {}) do not match the s-grid ({})",
                amplitude.len(),
                phase.len(),
                grid.n
            )));
        }
        if amplitude.iter().any(|a| !(a.is_finite() && *a >= 0.0)) || phase.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("aperture samples must be finite with nonnegative amplitude"));
        }
        Ok(Aperture { grid, amplitude, phase })
    }

    /// `g(s) = e0 f(√s)`; the grid is assumed to span the support of `f`.
    pub fn from_shape(grid: SGrid, f: &dyn Shape, e0: f64, phase: Vec<f64>) -> Result<Self> {
        let amplitude = grid.points().iter().map(|&s| e0 * f.value(s.sqrt())).collect();
        Aperture::new(grid, amplitude, phase)
    }

    pub fn with_phase(&self, phase: Vec<f64>) -> Result<Self> {
        Aperture::new(self.grid, self.amplitude.clone(), phase)
    }

    pub fn field(&self) -> Vec<Complex64> {
        self.amplitude
            .iter()
            .zip(&self.phase)
            .map(|(&a, &p)| Complex64::from_polar(a, p))
            .collect()
    }

    /// Trapezoid `‖g‖_{L¹}`.
    pub fn l1(&self) -> f64 {
        self.grid.weights().iter().zip(&self.amplitude).map(|(w, a)| w * a).sum()
    }

    /// Trapezoid `‖g‖_{L²}`.
    pub fn l2(&self) -> f64 {
        let s: f64 = self.grid.weights().iter().zip(&self.amplitude).map(|(w, a)| w * a * a).sum();
        s.sqrt()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.grid.radii()
    }
}

/// Complex spectrum on a uniform Ω-grid.
#[derive(Clone, Debug)]
pub struct SpectralField {
    pub grid: OmegaGrid,
    pub values: Vec<Complex64>,
    /// `∫|F|² dΩ / (2π ‖g‖²)` over the grid.
    pub captured_fraction: f64,
}

impl SpectralField {
    pub fn mass_warning(&self) -> bool {
        self.captured_fraction < 1.0 - CAPTURED_MASS_TOLERANCE
    }

    /// Trapezoid `‖F‖_{L²}` over the grid.
    pub fn l2(&self) -> f64 {
        let n = self.values.len();
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 || j + 1 == n { 0.5 } else { 1.0 } * c.norm_sqr())
            .sum();
        (self.grid.d_omega() * s).sqrt()
    }
}

/// Chirp-z evaluation of `F[g e^{iφ}]` on an arbitrary uniform Ω-grid.
pub fn forward_field(aperture: &Aperture, omega: &OmegaGrid) -> SpectralField {
    let sg = aperture.grid;
    let ds = sg.ds();
    let w0 = omega.omega_min;
    let dw = omega.d_omega();
    let weights = sg.weights();
    let x: Vec<Complex64> = aperture
        .field()
        .iter()
        .enumerate()
        .map(|(k, &u)| u * weights[k] * Complex64::from_polar(1.0, w0 * k as f64 * ds))
        .collect();
    let mut values = ChirpZ::new(sg.n, omega.n, dw * ds).apply(&x);
    for (j, v) in values.iter_mut().enumerate() {
        *v *= Complex64::from_polar(1.0, omega.omega(j) * sg.s_min);
    }
    let field = SpectralField { grid: *omega, values, captured_fraction: 0.0 };
    let g2 = aperture.l2().powi(2);
    let captured_fraction = if g2 > 0.0 { field.l2().powi(2) / (2.0 * PI * g2) } else { 1.0 };
    SpectralField { captured_fraction, ..field }
}

/// Same discretization as [`forward_field`], summed directly.
pub fn direct_transform(aperture: &Aperture, omegas: &[f64]) -> Vec<Complex64> {
    let s = aperture.grid.points();
    let w = aperture.grid.weights();
    let u = aperture.field();
    omegas
        .par_iter()
        .map(|&om| {
            s.iter()
                .zip(&w)
                .zip(&u)
                .map(|((&sk, &wk), &uk)| uk * wk * Complex64::from_polar(1.0, om * sk))
                .sum()
        })
        .collect()
}

/// Trapezoid quadrature of `∫ g(s) exp(i(φ(s) + Ωs)) ds` on `n` points,
/// evaluating `g` and `φ` at every node.
pub fn quadrature_transform<G, P>(g: G, phi: P, s_min: f64, s_max: f64, n: usize, omegas: &[f64]) -> Vec<Complex64>
where
    G: Fn(f64) -> f64 + Sync,
    P: Fn(f64) -> f64 + Sync,
{
    let grid = SGrid { s_min, s_max, n };
    let s = grid.points();
    let w = grid.weights();
    let u: Vec<Complex64> = s.iter().map(|&x| Complex64::from_polar(g(x), phi(x))).collect();
    omegas
        .par_iter()
        .map(|&om| {
            s.iter()
                .zip(&w)
                .zip(&u)
                .map(|((&sk, &wk), &uk)| uk * wk * Complex64::from_polar(1.0, om * sk))
                .sum()
        })
        .collect()
}

/// `G(Ω) = E_T F_T(k/(2Ω)) / Ω` sampled on the band of a [`SpectralPlan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSpectrum {
    pub omega_start: f64,
    pub d_omega: f64,
    pub values: Vec<f64>,
    pub support: (f64, f64),
    pub k: f64,
}

impl TargetSpectrum {
    pub fn on_plan(plan: &SpectralPlan, target: &dyn Shape, k: f64, et: f64) -> Self {
        let (z_lo, z_hi) = target.support();
        let support = (k / (2.0 * z_hi), k / (2.0 * z_lo));
        let values = (0..plan.len())
            .map(|j| {
                let om = plan.omega(j);
                if om >= support.0 && om <= support.1 {
                    et * target.value(k / (2.0 * om)) / om
                } else {
                    0.0
                }
            })
            .collect();
        TargetSpectrum { omega_start: plan.omega(0), d_omega: plan.d_omega(), values, support, k }
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.omega_start + j as f64 * self.d_omega
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l2(&self) -> f64 {
        (self.d_omega * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn l1(&self) -> f64 {
        self.d_omega * self.values.iter().sum::<f64>()
    }

    /// Index range of samples inside `[lo, hi]`.
    pub fn index_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = ((lo - self.omega_start) / self.d_omega).ceil().max(0.0) as usize;
        let b = (((hi - self.omega_start) / self.d_omega).floor() + 1.0).max(0.0) as usize;
        let a = a.min(self.len());
        let b = b.min(self.len()).max(a);
        // guard the rounding at both ends
        let a = if a > 0 && self.omega(a - 1) >= lo { a - 1 } else { a };
        let b = if b < self.len() && self.omega(b) <= hi { b + 1 } else { b };
        a..b
    }

    /// `‖G‖` restricted to `[lo, hi]` and the discrete measure of that window.
    pub fn local_l2(&self, lo: f64, hi: f64) -> (f64, f64) {
        let r = self.index_range(lo, hi);
        let m = r.len() as f64 * self.d_omega;
        let s: f64 = self.values[r].iter().map(|v| v * v).sum();
        ((self.d_omega * s).sqrt(), m)
    }

    /// Scale the values in place.
    pub fn scaled(mut self, c: f64) -> Self {
        for v in &mut self.values {
            *v *= c;
        }
        self
    }
}

/// `I[φ] = ‖G - |F[g e^{iφ}]|‖_{L²}` over the whole band.
pub fn error_functional(plan: &SpectralPlan, target: &TargetSpectrum, aperture: &Aperture) -> Result<f64> {
    check_compatible(plan, target, aperture)?;
    Ok(error_of_field(target, &plan.forward(&aperture.field())))
}

pub fn error_of_field(target: &TargetSpectrum, field: &[Complex64]) -> f64 {
    let s: f64 = target
        .values
        .iter()
        .zip(field)
        .map(|(g, f)| {
            let d = g - f.norm();
            d * d
        })
        .sum();
    (target.d_omega * s).sqrt()
}

/// The error restricted to `S_G(zd′, WT′)`.
pub fn local_error(
    plan: &SpectralPlan,
    target: &TargetSpectrum,
    aperture: &Aperture,
    params: &DesignParams,
    zd_sub: f64,
    wt_sub: f64,
) -> Result<f64> {
    check_compatible(plan, target, aperture)?;
    check_subinterval(params, zd_sub, wt_sub)?;
    Ok(local_error_of_field(target, &plan.forward(&aperture.field()), params.k, zd_sub, wt_sub))
}

pub fn local_error_of_field(target: &TargetSpectrum, field: &[Complex64], k: f64, zd_sub: f64, wt_sub: f64) -> f64 {
    let (lo, hi) = omega_window(k, zd_sub, wt_sub);
    let r = target.index_range(lo, hi);
    let s: f64 = r
        .map(|j| {
            let d = target.values[j] - field[j].norm();
            d * d
        })
        .sum();
    (target.d_omega * s).sqrt()
}

/// Admissibility of a sub-window: `2zd′ - WT′ ≥ 2zd - WT` and `2zd′ + WT′ ≤ 2zd + WT`.
pub fn check_subinterval(params: &DesignParams, zd_sub: f64, wt_sub: f64) -> Result<()> {
    let tol = 1e-12 * params.zd;
    if !(wt_sub >= 0.0 && zd_sub > 0.0) {
        return Err(Error::domain(format!("invalid sub-window zd' = {zd_sub}, WT' = {wt_sub}")));
    }
    if 2.0 * zd_sub - wt_sub < 2.0 * params.zd - params.wt - tol
        || 2.0 * zd_sub + wt_sub > 2.0 * params.zd + params.wt + tol
    {
        return Err(Error::domain(format!(
            "sub-window zd' = {zd_sub}, WT' = {wt_sub} leaves the target interval"
        )));
    }
    Ok(())
}

fn check_compatible(plan: &SpectralPlan, target: &TargetSpectrum, aperture: &Aperture) -> Result<()> {
    if target.len() != plan.len() || (target.d_omega - plan.d_omega()).abs() > 1e-12 * plan.d_omega() {
        return Err(Error::GridMismatch("target spectrum was not sampled on this plan".into()));
    }
    if aperture.grid != *plan.grid() {
        return Err(Error::GridMismatch("aperture grid differs from the plan grid".into()));
    }
    Ok(())
}
