//! Stationary-phase design. In nondimensional variables `ρ̄ = ρ/r0`,
//! `z̄ = z/zd`, the caustic map solves
//!
//! ```text
//! dz̄/dρ̄ = 2π k̄ E0² f²(ρ̄) ρ̄ / (E_T² F_T²(z̄)),   z̄(1 - W0/2r0) = 1 - WT/2zd
//! ```
//!
//! and the phase is `φ̄(ρ̄) = -∫ u / z̄(u) du`, with `φ = k̄ φ̄`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{DesignParams, SGrid};
use crate::numeric::{bracket, hermite, Pchip};
use crate::profiles::Shape;

/// Allowed endpoint deviation, relative to the target span `WT/zd`.
pub const ENDPOINT_TOLERANCE: f64 = 1e-4;

/// Floor on `F_T²` relative to its maximum.
pub const FLOOR_FRACTION: f64 = 1e-12;

pub struct CausticProblem<'a> {
    pub f: &'a dyn Shape,
    pub target: &'a dyn Shape,
    pub params: DesignParams,
    pub et: f64,
    coefficient: f64,
    floor: f64,
}

impl<'a> CausticProblem<'a> {
    pub fn new(f: &'a dyn Shape, target: &'a dyn Shape, params: DesignParams, et: f64) -> Result<Self> {
        params.validate()?;
        if !(et > 0.0 && et.is_finite()) {
            return Err(Error::domain("target amplitude must be positive"));
        }
        let (a, b) = target.support();
        let peak = (0..=2048)
            .map(|i| target.value(a + (b - a) * i as f64 / 2048.0).powi(2))
            .fold(0.0, f64::max);
        let coefficient = 2.0 * PI * params.k_bar() * params.e0 * params.e0 / (et * et);
        Ok(CausticProblem { f, target, params, et, coefficient, floor: FLOOR_FRACTION * peak })
    }

    pub fn k_bar(&self) -> f64 {
        self.params.k_bar()
    }

    pub fn rho_span(&self) -> (f64, f64) {
        let h = 0.5 * self.params.w0 / self.params.r0;
        (1.0 - h, 1.0 + h)
    }

    pub fn z_span(&self) -> (f64, f64) {
        let h = 0.5 * self.params.wt / self.params.zd;
        (1.0 - h, 1.0 + h)
    }

    fn input(&self, rho: f64) -> f64 {
        self.f.value(self.params.r0 * rho)
    }

    fn target_value(&self, z: f64) -> f64 {
        self.target.value(self.params.zd * z)
    }

    /// Right-hand side and whether the floor was active.
    pub fn rhs(&self, rho: f64, z: f64) -> (f64, bool) {
        let f = self.input(rho);
        let t2 = self.target_value(z).powi(2);
        let floored = t2 < self.floor;
        (self.coefficient * f * f * rho / t2.max(self.floor), floored)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CausticMap {
    pub k_bar: f64,
    pub rho: Vec<f64>,
    pub z: Vec<f64>,
    pub slope: Vec<f64>,
    pub z_target_end: f64,
    /// `|z̄(end) - (1 + WT/2zd)| / (WT/zd)`.
    pub endpoint_error: f64,
    /// Right-hand-side evaluations that hit the floor.
    pub floor_hits: usize,
}

impl CausticMap {
    pub fn stiff_warning(&self) -> bool {
        self.floor_hits > 0
    }

    pub fn is_increasing(&self) -> bool {
        self.z.windows(2).all(|w| w[1] > w[0])
    }

    /// `ρ̄_c(z̄)` as a monotone cubic.
    pub fn inverse(&self) -> Pchip {
        Pchip::new(self.z.clone(), self.rho.clone())
    }

    pub fn steps(&self) -> usize {
        self.rho.len() - 1
    }
}

/// Classical RK4 on a uniform `ρ̄` grid, without the endpoint check.
pub fn integrate_caustic(problem: &CausticProblem, n_steps: usize) -> CausticMap {
    let n = n_steps.max(1);
    let (ra, rb) = problem.rho_span();
    let (za, zb) = problem.z_span();
    let h = (rb - ra) / n as f64;
    let mut rho = Vec::with_capacity(n + 1);
    let mut z = Vec::with_capacity(n + 1);
    let mut slope = Vec::with_capacity(n + 1);
    let mut hits = 0usize;
    let mut eval = |r: f64, y: f64| {
        let (v, floored) = problem.rhs(r, y);
        hits += floored as usize;
        v
    };
    // The state is the offset from z̄_a: rounding of z̄ itself would be
    // amplified by 1/F_T² near the far edge.
    let span = problem.params.wt / problem.params.zd;
    let mut u = 0.0;
    let mut k1 = eval(ra, za);
    rho.push(ra);
    z.push(za);
    slope.push(k1);
    for i in 0..n {
        let r = ra + i as f64 * h;
        let k2 = eval(r + 0.5 * h, za + (u + 0.5 * h * k1));
        let k3 = eval(r + 0.5 * h, za + (u + 0.5 * h * k2));
        let r_next = if i + 1 == n { rb } else { ra + (i + 1) as f64 * h };
        let k4 = eval(r_next, za + (u + h * k3));
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        k1 = eval(r_next, za + u);
        rho.push(r_next);
        z.push(za + u);
        slope.push(k1);
    }
    CausticMap {
        k_bar: problem.k_bar(),
        rho,
        z,
        slope,
        z_target_end: zb,
        endpoint_error: (u - span).abs() / span,
        floor_hits: hits,
    }
}

pub fn solve_caustic_map(problem: &CausticProblem, n_steps: usize) -> Result<CausticMap> {
    solve_caustic_map_with_tolerance(problem, n_steps, ENDPOINT_TOLERANCE)
}

pub fn solve_caustic_map_with_tolerance(problem: &CausticProblem, n_steps: usize, tol: f64) -> Result<CausticMap> {
    let map = integrate_caustic(problem, n_steps);
    if !(map.endpoint_error <= tol) || !map.is_increasing() {
        return Err(Error::Resolution(format!(
            "caustic map misses the target edge by {:.3e} (tolerance {tol:.1e}) with {n_steps} steps",
            map.endpoint_error
        )));
    }
    Ok(map)
}

/// Nondimensional phase on the RK4 nodes, with its exact derivative `-ρ̄/z̄`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseFunction {
    pub k_bar: f64,
    pub r0: f64,
    pub rho: Vec<f64>,
    pub phi_bar: Vec<f64>,
    pub dphi_bar: Vec<f64>,
}

/// `φ̄(ρ̄) = -∫ u/z̄(u) du` by Simpson's rule on each step, with the midpoint
/// of `z̄` taken from the cubic Hermite interpolant of the map.
pub fn integrate_phase(map: &CausticMap, r0: f64) -> PhaseFunction {
    let n = map.rho.len();
    let mut phi = Vec::with_capacity(n);
    let mut acc = 0.0;
    phi.push(0.0);
    for i in 0..n - 1 {
        let (a, b) = (map.rho[i], map.rho[i + 1]);
        let m = 0.5 * (a + b);
        let zm = hermite(a, b, map.z[i], map.z[i + 1], map.slope[i], map.slope[i + 1], m);
        acc -= (b - a) / 6.0 * (a / map.z[i] + 4.0 * m / zm + b / map.z[i + 1]);
        phi.push(acc);
    }
    let dphi = map.rho.iter().zip(&map.z).map(|(r, z)| -r / z).collect();
    PhaseFunction { k_bar: map.k_bar, r0, rho: map.rho.clone(), phi_bar: phi, dphi_bar: dphi }
}

impl PhaseFunction {
    pub fn phi_bar_at(&self, rho: f64) -> f64 {
        let i = bracket(&self.rho, rho);
        hermite(
            self.rho[i],
            self.rho[i + 1],
            self.phi_bar[i],
            self.phi_bar[i + 1],
            self.dphi_bar[i],
            self.dphi_bar[i + 1],
            rho,
        )
    }

    /// Dimensional phase in radians at radius `r`.
    pub fn phi_at_r(&self, r: f64) -> f64 {
        self.k_bar * self.phi_bar_at(r / self.r0)
    }

    pub fn sample_on(&self, grid: &SGrid) -> Vec<f64> {
        grid.radii().iter().map(|&r| self.phi_at_r(r)).collect()
    }

    /// `(r, φ)` on the solver nodes.
    pub fn table(&self) -> Vec<(f64, f64)> {
        self.rho
            .iter()
            .zip(&self.phi_bar)
            .map(|(r, p)| (r * self.r0, self.k_bar * p))
            .collect()
    }
}

/// Stationary-phase estimate of `|E(0, z)|`; zero outside the target support.
pub fn on_axis_asymptotic(map: &CausticMap, problem: &CausticProblem, z: &[f64]) -> Vec<f64> {
    let inv = map.inverse();
    let (za, zb) = problem.z_span();
    let pre = problem.params.e0 * (2.0 * PI * map.k_bar).sqrt();
    z.iter()
        .map(|&zz| {
            let zb_ = zz / problem.params.zd;
            if zb_ < za || zb_ > zb {
                return 0.0;
            }
            let rho = inv.eval(zb_);
            let slope = problem.rhs(rho, zb_).0;
            if !(slope > 0.0) {
                return 0.0;
            }
            pre * problem.input(rho).abs() * rho.sqrt() / slope.sqrt()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffAxisValue {
    pub value: f64,
    /// Outside the window where the Bessel approximation is expected to hold.
    pub advisory: bool,
}

/// Radius of the first zero of the asymptotic transverse profile at `z`.
pub fn first_zero_radius(map: &CausticMap, problem: &CausticProblem, z: f64) -> f64 {
    let zb = z / problem.params.zd;
    let rho = map.inverse().eval(zb);
    crate::bounds::J0_FIRST_ZERO * zb * problem.params.r0 / (map.k_bar * rho)
}

/// `E_T F_T(z) |J0(k̄ r ρ̄_c / (z̄ r0))|`.
pub fn off_axis_asymptotic(map: &CausticMap, problem: &CausticProblem, r: f64, z: f64) -> OffAxisValue {
    let (za, zb) = problem.z_span();
    let zbar = z / problem.params.zd;
    let inside = zbar >= za && zbar <= zb;
    let rho = map.inverse().eval(zbar.clamp(za, zb));
    let arg = map.k_bar * r * rho / (zbar * problem.params.r0);
    let value = problem.et * problem.target.truncated(z) * libm::j0(arg).abs();
    OffAxisValue { value, advisory: !inside || arg > 5.0 * crate::bounds::J0_FIRST_ZERO }
}
