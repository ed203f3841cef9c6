//! Direct Fresnel/Hankel quadrature of the propagated field.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::Aperture;
use crate::error::{Error, Result};

/// Samples of `E(r, z)`, stored row-major with one row per `z`.
#[derive(Clone, Debug)]
pub struct FieldMesh {
    pub r: Vec<f64>,
    pub z: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
}

// E(r, z) = -iΩ e^{iΩr²} Σ_k w_k u_k e^{iΩ s_k} J0(2Ω r √s_k), Ω = k/(2z)
fn radial_sum(s: &[f64], wu: &[Complex64], omega: f64, r: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if r == 0.0 {
        for (&sk, &c) in s.iter().zip(wu) {
            acc += c * Complex64::from_polar(1.0, omega * sk);
        }
    } else {
        for (&sk, &c) in s.iter().zip(wu) {
            acc += c * Complex64::from_polar(1.0, omega * sk) * libm::j0(2.0 * omega * r * sk.sqrt());
        }
    }
    Complex64::new(0.0, -omega) * Complex64::from_polar(1.0, omega * r * r) * acc
}

fn weighted(aperture: &Aperture) -> (Vec<f64>, Vec<Complex64>) {
    let w = aperture.grid.weights();
    let wu = aperture.field().iter().zip(&w).map(|(u, w)| u * w).collect();
    (aperture.grid.points(), wu)
}

/// On-axis field `E(0, z)` by direct quadrature in `s`.
pub fn on_axis_field(aperture: &Aperture, k: f64, z: &[f64]) -> Result<Vec<Complex64>> {
    if let Some(bad) = z.iter().find(|&&z| !(z > 0.0)) {
        return Err(Error::domain(format!("on-axis evaluation needs z > 0, got {bad}")));
    }
    let (s, wu) = weighted(aperture);
    Ok(z.par_iter().map(|&zz| radial_sum(&s, &wu, k / (2.0 * zz), 0.0)).collect())
}

/// Field on an `(r, z)` mesh using the `J0(kρr/z)` kernel.
pub fn off_axis_field(aperture: &Aperture, k: f64, r: &[f64], z: &[f64]) -> Result<FieldMesh> {
    if let Some(bad) = z.iter().find(|&&z| !(z > 0.0)) {
        return Err(Error::domain(format!("off-axis evaluation needs z > 0, got {bad}")));
    }
    if let Some(bad) = r.iter().find(|&&r| !(r >= 0.0)) {
        return Err(Error::domain(format!("off-axis evaluation needs r >= 0, got {bad}")));
    }
    let grid = aperture.grid;
    let r_max = r.iter().cloned().fold(0.0, f64::max);
    let z_min = z.iter().cloned().fold(f64::INFINITY, f64::min);
    if r_max > 0.0 && z_min.is_finite() {
        // Bessel phase advance per s-sample must stay below π/4
        let rate = k * r_max / (2.0 * z_min * grid.s_min.sqrt());
        let per_sample = rate * grid.ds();
        if per_sample > PI / 4.0 {
            let need = (rate * (grid.s_max - grid.s_min) / (PI / 4.0)).ceil() as usize + 1;
            return Err(Error::Resolution(format!(
                "Hankel kernel under-resolved: need at least {need} s-samples, have {}",
                grid.n
            )));
        }
    }
    let (s, wu) = weighted(aperture);
    let values = z
        .par_iter()
        .map(|&zz| {
            let om = k / (2.0 * zz);
            r.iter().map(|&rr| radial_sum(&s, &wu, om, rr)).collect()
        })
        .collect();
    Ok(FieldMesh { r: r.to_vec(), z: z.to_vec(), values })
}

/// `∫₀^R |E(r)|² r dr` by the trapezoid rule on the sampled radii.
pub fn power_in_radius(r: &[f64], field: &[Complex64], radius: f64) -> Result<f64> {
    if r.len() != field.len() || r.len() < 2 {
        return Err(Error::GridMismatch("radial samples and field differ in length".into()));
    }
    if !(radius >= 0.0) || radius > r[r.len() - 1] * (1.0 + 1e-12) || radius < r[0] {
        return Err(Error::domain(format!(
            "radius {radius} outside the sampled range [{}, {}]",
            r[0],
            r[r.len() - 1]
        )));
    }
    let integrand: Vec<f64> = r.iter().zip(field).map(|(&x, e)| e.norm_sqr() * x).collect();
    let mut p = 0.0;
    for i in 0..r.len() - 1 {
        let (a, b) = (r[i], r[i + 1]);
        if a >= radius {
            break;
        }
        if b <= radius {
            p += 0.5 * (b - a) * (integrand[i] + integrand[i + 1]);
        } else {
            let t = (radius - a) / (b - a);
            let mid = integrand[i] + t * (integrand[i + 1] - integrand[i]);
            p += 0.5 * (radius - a) * (integrand[i] + mid);
        }
    }
    Ok(p)
}
