//! Gerchberg–Saxton iteration between the input-plane modulus `g` and the
//! on-axis spectral modulus `G`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::unwrap;
use crate::spectral::{error_of_field, Aperture, SpectralPlan, TargetSpectrum};

/// Phase of `z`, with `arg(0) = 0`.
#[inline]
fn arg(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

#[derive(Clone, Debug)]
pub struct GsStep {
    pub phase: Vec<f64>,
    pub fourier_phase: Vec<f64>,
}

fn project(plan: &SpectralPlan, target: &TargetSpectrum, field: &[Complex64], prev: &[f64]) -> GsStep {
    let psi: Vec<f64> = field.iter().map(|&c| arg(c)).collect();
    let h: Vec<Complex64> = target
        .values
        .iter()
        .zip(&psi)
        .map(|(&g, &p)| Complex64::from_polar(g, p))
        .collect();
    let back = plan.adjoint(&h);
    let phase = back
        .iter()
        .zip(prev)
        .map(|(&b, &p)| if b.re == 0.0 && b.im == 0.0 { p } else { b.arg() })
        .collect();
    GsStep { phase, fourier_phase: psi }
}

/// One iteration: `Ψ = arg F[g e^{iφ}]`, then `φ' = arg F⁻¹[G e^{iΨ}]` on the s-grid.
pub fn gs_step(plan: &SpectralPlan, target: &TargetSpectrum, aperture: &Aperture) -> GsStep {
    let field = plan.forward(&aperture.field());
    project(plan, target, &field, &aperture.phase)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GsOptions {
    pub iterations: usize,
    /// Window and relative tolerance of the stagnation detector.
    pub stagnation_window: usize,
    pub stagnation_tolerance: f64,
    pub keep_phases: bool,
}

impl Default for GsOptions {
    fn default() -> Self {
        GsOptions { iterations: 100, stagnation_window: 10, stagnation_tolerance: 1e-9, keep_phases: true }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GsTrace {
    /// `I[φ_n]` for `n = 0..=iterations`.
    pub errors: Vec<f64>,
    /// `φ_n` for every iterate when requested, otherwise the first and last.
    pub phases: Vec<Vec<f64>>,
    /// Fourier-side phase of the last iterate.
    pub fourier_phase: Vec<f64>,
    pub stagnation: Option<usize>,
    pub restarts: Vec<usize>,
}

impl GsTrace {
    pub fn final_phase(&self) -> &[f64] {
        self.phases.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn initial_error(&self) -> f64 {
        self.errors[0]
    }

    pub fn final_error(&self) -> f64 {
        *self.errors.last().unwrap()
    }

    /// Largest step increase relative to `I[φ₀]`.
    pub fn worst_increase(&self) -> f64 {
        let i0 = self.errors[0].max(f64::MIN_POSITIVE);
        self.errors.windows(2).map(|w| (w[1] - w[0]) / i0).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_monotone(&self, slack: f64) -> bool {
        let i0 = self.errors[0];
        self.errors.windows(2).all(|w| w[1] <= w[0] + slack * i0)
    }
}

/// Callback invoked on stagnation; returning a phase restarts from it.
pub type RestartHook<'a> = &'a dyn Fn(usize, &[f64]) -> Option<Vec<f64>>;

pub fn run_gs(plan: &SpectralPlan, target: &TargetSpectrum, start: &Aperture, options: &GsOptions) -> Result<GsTrace> {
    run_gs_with_restart(plan, target, start, options, None)
}

pub fn run_gs_with_restart(
    plan: &SpectralPlan,
    target: &TargetSpectrum,
    start: &Aperture,
    options: &GsOptions,
    restart: Option<RestartHook>,
) -> Result<GsTrace> {
    if options.iterations == 0 {
        return Err(Error::config("Gerchberg-Saxton needs at least one iteration"));
    }
    if target.len() != plan.len() || start.grid != *plan.grid() {
        return Err(Error::GridMismatch("plan, target and aperture disagree".into()));
    }
    let amplitude = &start.amplitude;
    let make_field = |phase: &[f64]| -> Vec<Complex64> {
        amplitude.iter().zip(phase).map(|(&a, &p)| Complex64::from_polar(a, p)).collect()
    };

    let mut phase = start.phase.clone();
    let mut spectrum = plan.forward(&make_field(&phase));
    let mut errors = vec![error_of_field(target, &spectrum)];
    let mut phases = vec![phase.clone()];
    let mut stagnation = None;
    let mut restarts = Vec::new();
    let mut psi = Vec::new();

    for n in 1..=options.iterations {
        let step = project(plan, target, &spectrum, &phase);
        phase = step.phase;
        psi = step.fourier_phase;
        spectrum = plan.forward(&make_field(&phase));
        errors.push(error_of_field(target, &spectrum));

        let w = options.stagnation_window;
        if stagnation.is_none() && n >= w {
            let old = errors[n - w];
            if old > 0.0 && (old - errors[n]) / old < options.stagnation_tolerance {
                stagnation = Some(n);
                if let Some(hook) = restart {
                    if let Some(p) = hook(n, &phase) {
                        if p.len() == phase.len() {
                            phase = p;
                            spectrum = plan.forward(&make_field(&phase));
                            *errors.last_mut().unwrap() = error_of_field(target, &spectrum);
                            restarts.push(n);
                            stagnation = None;
                        }
                    }
                }
            }
        }
        if options.keep_phases || n == options.iterations {
            phases.push(phase.clone());
        }
    }
    Ok(GsTrace { errors, phases, fourier_phase: psi, stagnation, restarts })
}

/// Residual after removing the focusing lens `-k r²/(2 zd)`, unwrapped.
pub fn lens_decompose(phase: &[f64], r: &[f64], k: f64, zd: f64) -> Vec<f64> {
    let raw: Vec<f64> = phase.iter().zip(r).map(|(&p, &x)| p + k * x * x / (2.0 * zd)).collect();
    unwrap(&raw)
}

/// `max - min` of a residual phase.
pub fn phase_variation(residual: &[f64]) -> f64 {
    let lo = residual.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = residual.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::SGrid;
    use crate::spectral::error_functional;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(seed: u64) -> (SpectralPlan, TargetSpectrum, Aperture) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = SGrid::new(0.01, 0.2, 200).unwrap();
        let plan = SpectralPlan::new(grid, 500.0, 20.0).unwrap();
        let amp: Vec<f64> = grid.points().iter().map(|&s| (-((s - 0.1) / 0.04).powi(2)).exp()).collect();
        let phase: Vec<f64> = (0..grid.n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let ap = Aperture::new(grid, amp, phase).unwrap();
        let values = (0..plan.len())
            .map(|j| {
                let x = (plan.omega(j) - 500.0) / 150.0;
                if x.abs() < 1.0 {
                    1.0 - x * x
                } else {
                    0.0
                }
            })
            .collect();
        let t = TargetSpectrum { omega_start: plan.omega(0), d_omega: plan.d_omega(), values, support: (350.0, 650.0), k: 1.0 };
        let scale = (2.0 * std::f64::consts::PI).sqrt() * ap.l2() / t.l2();
        (plan, t.scaled(scale), ap)
    }

    #[test]
    fn monotone_and_head_matches_functional() {
        let (plan, t, ap) = setup(11);
        let trace = run_gs(&plan, &t, &ap, &GsOptions::default()).unwrap();
        assert_eq!(trace.errors.len(), 101);
        assert_eq!(trace.phases.len(), 101);
        assert_eq!(trace.errors[0], error_functional(&plan, &t, &ap).unwrap());
        assert!(trace.is_monotone(1e-12), "worst {}", trace.worst_increase());
        assert!(trace.final_error() < trace.initial_error());
    }

    #[test]
    fn consistent_data_is_fixed_point() {
        let (plan, _, ap) = setup(3);
        let f = plan.forward(&ap.field());
        let t = TargetSpectrum {
            omega_start: plan.omega(0),
            d_omega: plan.d_omega(),
            values: f.iter().map(|c| c.norm()).collect(),
            support: (0.0, 1.0),
            k: 1.0,
        };
        let trace = run_gs(&plan, &t, &ap, &GsOptions { iterations: 5, ..Default::default() }).unwrap();
        for e in &trace.errors {
            assert!(*e < 1e-10 * t.l2());
        }
    }

    #[test]
    fn zero_object() {
        let (plan, t, ap) = setup(5);
        let zero = Aperture::new(ap.grid, vec![0.0; ap.grid.n], ap.phase.clone()).unwrap();
        let trace = run_gs(&plan, &t, &zero, &GsOptions { iterations: 4, ..Default::default() }).unwrap();
        for e in &trace.errors {
            assert!((e / t.l2() - 1.0).abs() < 1e-14);
        }
        let step = gs_step(&plan, &t, &zero);
        assert!(step.fourier_phase.iter().all(|&p| p == 0.0));
        let back = plan.adjoint(&t.values.iter().map(|&g| Complex64::new(g, 0.0)).collect::<Vec<_>>());
        for (p, b) in step.phase.iter().zip(&back) {
            assert_eq!(*p, b.arg());
        }
    }

    #[test]
    fn modulus_projection_preserves_norm() {
        let (plan, t, ap) = setup(9);
        let step = gs_step(&plan, &t, &ap);
        let h: Vec<Complex64> = t.values.iter().zip(&step.fourier_phase).map(|(&g, &p)| Complex64::from_polar(g, p)).collect();
        assert!((plan.norm(&h) / t.l2() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic() {
        let (plan, t, ap) = setup(21);
        let a = run_gs(&plan, &t, &ap, &GsOptions { iterations: 20, ..Default::default() }).unwrap();
        let b = run_gs(&plan, &t, &ap, &GsOptions { iterations: 20, ..Default::default() }).unwrap();
        assert_eq!(a.errors, b.errors);
        assert_eq!(a.final_phase(), b.final_phase());
    }

    #[test]
    fn restart_hook_is_called_on_stagnation() {
        let (plan, _, ap) = setup(3);
        let f = plan.forward(&ap.field());
        let t = TargetSpectrum {
            omega_start: plan.omega(0),
            d_omega: plan.d_omega(),
            values: f.iter().map(|c| c.norm()).collect(),
            support: (0.0, 1.0),
            k: 1.0,
        };
        let hook = |_: usize, p: &[f64]| Some(p.to_vec());
        let trace = run_gs_with_restart(&plan, &t, &ap, &GsOptions { iterations: 12, ..Default::default() }, Some(&hook)).unwrap();
        assert!(!trace.restarts.is_empty());
        let plain = run_gs(&plan, &t, &ap, &GsOptions { iterations: 12, ..Default::default() }).unwrap();
        assert!(plain.restarts.is_empty());
        assert!(plain.stagnation.is_some_and(|n| (10..=12).contains(&n)));
    }

    #[test]
    fn lens_removed() {
        let r: Vec<f64> = (0..300).map(|i| 0.1 + i as f64 * 0.001).collect();
        let (k, zd) = (9.5e6, 1000.0);
        let lens: Vec<f64> = r.iter().map(|x| -k * x * x / (2.0 * zd)).collect();
        let res = lens_decompose(&lens, &r, k, zd);
        assert!(res.iter().all(|v| v.abs() < 1e-9));
        let c = 37.0;
        let bumped: Vec<f64> = lens.iter().zip(&r).map(|(p, x)| p + c * x * x).collect();
        let res2 = lens_decompose(&bumped, &r, k, zd);
        for (a, x) in res2.iter().zip(&r) {
            assert!((a - c * x * x).abs() < 1e-8);
        }
        assert!(run_gs(&SpectralPlan::new(SGrid::new(0.1, 0.2, 16).unwrap(), 0.0, 1.0).unwrap(),
            &TargetSpectrum { omega_start: 0.0, d_omega: 1.0, values: vec![], support: (0.0, 1.0), k: 1.0 },
            &Aperture::new(SGrid::new(0.1, 0.2, 16).unwrap(), vec![1.0; 16], vec![0.0; 16]).unwrap(),
            &GsOptions { iterations: 0, ..Default::default() }).is_err());
    }
}
