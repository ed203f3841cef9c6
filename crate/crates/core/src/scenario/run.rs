//! The design pipeline: normalize, bound, solve the caustic, refine by GS,
//! and tabulate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bounds_report, central_core_power, delta_m, input_power, normalize_target, BoundsReport, CorePower,
    DeltaConvention, LocalSearch, J0_FIRST_ZERO,
};
use crate::caustic::{integrate_phase, on_axis_asymptotic, solve_caustic_map_with_tolerance, CausticMap, CausticProblem, PhaseFunction};
use crate::error::{Error, Result};
use crate::grids::{DesignParams, OmegaGrid, SGrid};
use crate::gs::{lens_decompose, phase_variation, run_gs, GsOptions};
use crate::profiles::{Profile, Shape, Truncated};
use crate::pulse::{chirp_parameters, spatiotemporal_on_axis, ChirpDesign, IntensityMesh, PulseTarget};
use crate::spectral::{error_functional, forward_field, off_axis_field, on_axis_field, power_in_radius, Aperture, SpectralPlan, TargetSpectrum};

use super::config::{ScenarioConfig, ScenarioKind, TargetProfile};

/// Target shape, optionally pre-compensated for dispersion.
pub enum TargetShape {
    Plain(Truncated),
    Pulse(PulseTarget<Truncated>),
}

impl Shape for TargetShape {
    fn value(&self, z: f64) -> f64 {
        match self {
            TargetShape::Plain(t) => t.value(z),
            TargetShape::Pulse(t) => t.value(z),
        }
    }

    fn support(&self) -> (f64, f64) {
        match self {
            TargetShape::Plain(t) => t.support(),
            TargetShape::Pulse(t) => t.support(),
        }
    }
}

/// Everything fixed by the configuration before any phase is chosen.
pub struct Design {
    pub config: ScenarioConfig,
    pub ring: Truncated,
    pub target: TargetShape,
    pub chirp: Option<ChirpDesign>,
    pub params: DesignParams,
    pub et: f64,
    pub grid: SGrid,
    pub plan: SpectralPlan,
    pub spectrum: TargetSpectrum,
    /// Input amplitude with zero phase.
    pub aperture: Aperture,
}

impl Design {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let d = &config.design;
        let thr = config.solver.truncation_threshold;
        let ring = Truncated::new(Profile::GaussianRing { center: d.r0_m, width: config.input.w0_prime_m }, thr)?;
        let t = &config.target;
        let base = match t.profile {
            TargetProfile::SuperGaussian => Profile::SuperGaussian { center: d.zd_m, width: t.wt_prime_m, order: t.order },
            TargetProfile::Oscillatory => Profile::Oscillatory { center: d.zd_m, width: t.wt_prime_m, modes: t.modes },
        };
        let base = Truncated::new(base, thr)?;
        let chirp = match &config.pulse {
            Some(p) => Some(chirp_parameters(p.tau_t_fs, d.zd_m, p.gamma_fs2_per_m)?),
            None => None,
        };
        let target = match chirp {
            Some(c) => TargetShape::Pulse(PulseTarget { base, chirp: c }),
            None => TargetShape::Plain(base),
        };
        let params = DesignParams::new(d.k_per_m, d.r0_m, ring.width(), d.zd_m, target.width(), d.e0_v_per_m)?;
        let et = normalize_target(params.e0, &ring, &target, params.k)?;
        let (s_lo, s_hi) = params.s_support();
        let grid = SGrid::new(s_lo, s_hi, config.solver.n_s)?;
        let (o_lo, o_hi) = params.omega_support();
        let plan = SpectralPlan::for_target(grid, o_lo, o_hi, config.solver.target_samples)?;
        let spectrum = TargetSpectrum::on_plan(&plan, &target, params.k, et);
        let aperture = Aperture::from_shape(grid, &ring, params.e0, vec![0.0; grid.n])?;
        Ok(Design { config: config.clone(), ring, target, chirp, params, et, grid, plan, spectrum, aperture })
    }

    pub fn caustic_problem(&self) -> Result<CausticProblem<'_>> {
        CausticProblem::new(&self.ring, &self.target, self.params, self.et)
    }

    pub fn search(&self) -> LocalSearch {
        LocalSearch {
            widths: self.config.solver.local_widths,
            centers: self.config.solver.local_centers,
            ..LocalSearch::default()
        }
    }

    pub fn bounds(&self) -> Result<BoundsReport> {
        bounds_report(&self.spectrum, &self.aperture, &self.params, &self.search())
    }

    /// Stationary-phase design: caustic map, phase function and sampled aperture.
    pub fn stationary(&self) -> Result<(CausticMap, PhaseFunction, Aperture)> {
        let problem = self.caustic_problem()?;
        let solver = &self.config.solver;
        let map = solve_caustic_map_with_tolerance(&problem, solver.ode_steps, solver.endpoint_tolerance)?;
        let phase = integrate_phase(&map, self.params.r0);
        let aperture = self.aperture.with_phase(phase.sample_on(&self.grid))?;
        Ok((map, phase, aperture))
    }

    pub fn error(&self, phase: &[f64]) -> Result<f64> {
        error_functional(&self.plan, &self.spectrum, &self.aperture.with_phase(phase.to_vec())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub r_m: Vec<f64>,
    pub phi_rad: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnAxisTable {
    pub z_m: Vec<f64>,
    pub target_intensity: Vec<f64>,
    /// Stationary-phase asymptotic prediction.
    pub asymptotic_intensity: Vec<f64>,
    /// Full-wave evaluation of the stationary-phase design.
    pub stationary_phase_intensity: Vec<f64>,
    pub gs_intensity: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub convention: DeltaConvention,
    pub value: f64,
    pub window_m: f64,
    pub clipped: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreReport {
    pub analytic: CorePower,
    /// Power inside the first zero radius from the full-wave field at `zd`.
    pub numeric: f64,
    pub input_power: f64,
    pub first_zero_radius_m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseReport {
    pub chirp: ChirpDesign,
    pub fwhm_at_zd_fs: f64,
    pub fwhm_target_fs: f64,
}

/// Scalar summary; every field is finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: ScenarioKind,
    pub params: DesignParams,
    pub target_amplitude: f64,
    pub k_bar: f64,
    pub plan_len: usize,
    pub d_omega: f64,
    pub target_norm: f64,
    pub i_stationary: f64,
    pub i_gs: f64,
    pub i_stationary_normalized: f64,
    pub i_gs_normalized: f64,
    pub gs_iterations: usize,
    pub gs_stagnation: Option<usize>,
    pub gs_worst_increase: f64,
    pub bound_sound: bool,
    pub bound_dominated: bool,
    pub caustic_endpoint_error: f64,
    pub caustic_stiff: bool,
    pub caustic_floor_hits: usize,
    pub lens_residual_variation_rad: f64,
    pub captured_fraction_stationary: f64,
    pub captured_fraction_gs: f64,
    pub deltas: Vec<DeltaEntry>,
    pub core: Option<CoreReport>,
    pub pulse: Option<PulseReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub summary: Summary,
    pub bounds: BoundsReport,
    pub phase_stationary: PhaseTable,
    pub phase_gs: PhaseTable,
    pub on_axis: OnAxisTable,
    /// `I[φ_n]` per GS iteration.
    pub gs_errors: Vec<f64>,
    pub pulse_mesh: Option<IntensityMesh>,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    let design = Design::new(config)?;
    let params = design.params;
    let problem = design.caustic_problem()?;
    let (map, _phase_fn, stationary) = design.stationary()?;
    let i_st = error_functional(&design.plan, &design.spectrum, &stationary)?;

    let options = GsOptions { iterations: config.solver.gs_iterations, keep_phases: false, ..GsOptions::default() };
    let trace = run_gs(&design.plan, &design.spectrum, &stationary, &options)?;
    let gs = design.aperture.with_phase(trace.final_phase().to_vec())?;
    let i_gs = trace.final_error();

    let bounds = design.bounds()?;
    let g_norm = design.spectrum.l2();

    // On-axis tables over the target interval, ascending in z.
    let (o_lo, o_hi) = params.omega_support();
    let omega_grid = OmegaGrid::new(o_lo, o_hi, config.solver.n_omega)?;
    let f_st = forward_field(&stationary, &omega_grid);
    let f_gs = forward_field(&gs, &omega_grid);
    let omegas = omega_grid.points();
    let mut z_m = omega_grid.z_points(params.k);
    let intensity = |f: &[num_complex::Complex64]| -> Vec<f64> {
        f.iter().zip(&omegas).map(|(v, om)| (om * v.norm()).powi(2)).rev().collect()
    };
    let stationary_phase_intensity = intensity(&f_st.values);
    let gs_intensity = intensity(&f_gs.values);
    z_m.reverse();
    let target_intensity = z_m.iter().map(|&z| (design.et * design.target.truncated(z)).powi(2)).collect();
    let asymptotic_intensity = on_axis_asymptotic(&map, &problem, &z_m).into_iter().map(|e| e * e).collect();
    let on_axis = OnAxisTable { z_m, target_intensity, asymptotic_intensity, stationary_phase_intensity, gs_intensity };

    let radii = design.grid.radii();
    let phase_stationary = PhaseTable { r_m: radii.clone(), phi_rad: stationary.phase.clone() };
    let phase_gs = PhaseTable { r_m: radii.clone(), phi_rad: gs.phase.clone() };
    let lens = phase_variation(&lens_decompose(&stationary.phase, &radii, params.k, params.zd));

    let deltas = match config.target.profile {
        TargetProfile::Oscillatory => delta_entries(&design, &bounds)?,
        TargetProfile::SuperGaussian => Vec::new(),
    };
    let core = match (config.target.profile, config.solver.radial_samples) {
        (TargetProfile::SuperGaussian, n) if n >= 2 => Some(core_report(&design, &stationary, bounds.beta, n)?),
        _ => None,
    };
    let (pulse, pulse_mesh) = match (&design.chirp, &config.pulse) {
        (Some(chirp), Some(p)) => {
            let (za, zb) = params.z_support();
            let z = linspace(za, zb, p.z_samples);
            let modulus: Vec<f64> = on_axis_field(&gs, params.k, &z)?.iter().map(|e| e.norm()).collect();
            let t = linspace(-p.t_half_span_fs, p.t_half_span_fs, p.t_samples);
            let mesh = spatiotemporal_on_axis(&modulus, &z, chirp, &t)?;
            let i0 = nearest(&mesh.z_m, params.zd);
            let fwhm = mesh
                .fwhm(i0)
                .ok_or_else(|| Error::Resolution("pulse mesh has no half-maximum crossing at zd".into()))?;
            let report = PulseReport {
                chirp: *chirp,
                fwhm_at_zd_fs: fwhm,
                fwhm_target_fs: chirp.tau_t_fs * (2.0 * std::f64::consts::LN_2).sqrt(),
            };
            (Some(report), Some(mesh))
        }
        _ => (None, None),
    };

    let summary = Summary {
        kind: config.kind,
        params,
        target_amplitude: design.et,
        k_bar: params.k_bar(),
        plan_len: design.plan.len(),
        d_omega: design.plan.d_omega(),
        target_norm: g_norm,
        i_stationary: i_st,
        i_gs,
        i_stationary_normalized: i_st / g_norm,
        i_gs_normalized: i_gs / g_norm,
        gs_iterations: trace.errors.len() - 1,
        gs_stagnation: trace.stagnation,
        gs_worst_increase: trace.worst_increase(),
        bound_sound: i_st.min(i_gs) >= bounds.master_lower * (1.0 - 1e-12),
        bound_dominated: bounds.bound_dominated(),
        caustic_endpoint_error: map.endpoint_error,
        caustic_stiff: map.stiff_warning(),
        caustic_floor_hits: map.floor_hits,
        lens_residual_variation_rad: lens,
        captured_fraction_stationary: f_st.captured_fraction,
        captured_fraction_gs: f_gs.captured_fraction,
        deltas,
        core,
        pulse,
    };
    let result = ScenarioResult {
        config: config.clone(),
        summary,
        bounds,
        phase_stationary,
        phase_gs,
        on_axis,
        gs_errors: trace.errors,
        pulse_mesh,
    };
    check_finite(&result)?;
    Ok(result)
}

fn nearest(xs: &[f64], x: f64) -> usize {
    let mut best = 0;
    for (i, v) in xs.iter().enumerate() {
        if (v - x).abs() < (xs[best] - x).abs() {
            best = i;
        }
    }
    best
}

fn delta_entries(design: &Design, bounds: &BoundsReport) -> Result<Vec<DeltaEntry>> {
    let t = &design.config.target;
    let mut out = Vec::new();
    for c in DeltaConvention::all() {
        match delta_m(&design.spectrum, &bounds.norms, &design.params, t.wt_prime_m, t.modes, c) {
            Ok(d) => out.push(DeltaEntry { convention: c, value: d.value, window_m: d.window, clipped: d.clipped }),
            Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn core_report(design: &Design, stationary: &Aperture, beta: f64, samples: usize) -> Result<CoreReport> {
    let p = &design.params;
    let r1 = J0_FIRST_ZERO * p.zd / (p.k * p.r0);
    let r = linspace(0.0, r1, samples);
    let mesh = off_axis_field(stationary, p.k, &r, &[p.zd])?;
    let numeric = power_in_radius(&r, &mesh.values[0], r1)?;
    let p0 = input_power(p.e0, &design.ring);
    let c = &design.config;
    let analytic = central_core_power(p.k, p.r0, p.zd, c.target.order, c.target.wt_prime_m, p0, beta);
    Ok(CoreReport { analytic, numeric, input_power: p0, first_zero_radius_m: r1 })
}

fn check_finite(result: &ScenarioResult) -> Result<()> {
    let value = serde_json::to_value(result).map_err(|e| Error::Resolution(e.to_string()))?;
    if contains_null_number(&value) {
        return Err(Error::Resolution("non-finite value in scenario result".into()));
    }
    Ok(())
}

// serde_json turns NaN and infinities into null; options are never null here
// except the documented optional sections.
fn contains_null_number(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(a) => a.iter().any(|x| x.is_null() || contains_null_number(x)),
        serde_json::Value::Object(m) => m.iter().any(|(k, x)| {
            (x.is_null() && !matches!(k.as_str(), "gs_stagnation" | "core" | "pulse" | "pulse_mesh" | "sweep"))
                || contains_null_number(x)
        }),
        _ => false,
    }
}

/// Per-value results of a sweep, in the order of the sweep values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub param: String,
    pub values: Vec<f64>,
    pub points: Vec<ScenarioResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub i_stationary: f64,
    pub i_gs: f64,
    pub i_stationary_normalized: f64,
    pub i_gs_normalized: f64,
    pub beta: f64,
    pub master_lower: f64,
    pub thm2_lower: f64,
    pub thm2_lower_half_width: f64,
    pub bound_sound: bool,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SweepRow> {
        self.values
            .iter()
            .zip(&self.points)
            .map(|(&value, r)| SweepRow {
                value,
                i_stationary: r.summary.i_stationary,
                i_gs: r.summary.i_gs,
                i_stationary_normalized: r.summary.i_stationary_normalized,
                i_gs_normalized: r.summary.i_gs_normalized,
                beta: r.bounds.beta,
                master_lower: r.bounds.master_lower,
                thm2_lower: r.bounds.thm2_lower,
                thm2_lower_half_width: r.bounds.thm2_lower_half_width,
                bound_sound: r.summary.bound_sound,
            })
            .collect()
    }
}

pub fn sweep(config: &ScenarioConfig) -> Result<SweepResult> {
    let spec = config.sweep.as_ref().ok_or_else(|| Error::config("configuration has no [sweep] section"))?;
    super::config::validate_sweep(spec)?;
    let configs = spec.values.iter().map(|&v| config.with_param(&spec.param, v)).collect::<Result<Vec<_>>>()?;
    let points = configs.par_iter().map(run_scenario).collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { param: spec.param.clone(), values: spec.values.clone(), points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ScenarioKind) -> ScenarioConfig {
        let mut c = ScenarioConfig::preset(kind).unwrap();
        c.solver.n_s = 1024;
        c.solver.n_omega = 512;
        c.solver.ode_steps = c.solver.ode_steps.max(4096);
        c.solver.gs_iterations = 10;
        c.solver.local_widths = 6;
        c.solver.local_centers = 5;
        c.solver.radial_samples = 32;
        c
    }

    #[test]
    fn remote_pipeline() {
        let r = run_scenario(&small(ScenarioKind::RemoteBessel)).unwrap();
        let s = &r.summary;
        assert!(s.i_gs <= s.i_stationary);
        assert!(s.bound_sound);
        assert!(s.caustic_endpoint_error < 1e-4);
        assert!(s.core.is_some());
        assert_eq!(r.gs_errors.len(), 11);
        assert_eq!(r.phase_gs.r_m.len(), 1024);
        assert!(r.on_axis.z_m.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn oscillatory_reports_deltas() {
        let r = run_scenario(&small(ScenarioKind::Oscillatory)).unwrap();
        assert!(!r.summary.deltas.is_empty());
        assert!(r.summary.deltas.iter().any(|d| d.convention == DeltaConvention::CANONICAL));
        assert!(r.summary.core.is_none());
    }

    #[test]
    fn pulse_mesh_width() {
        let r = run_scenario(&small(ScenarioKind::Pulse)).unwrap();
        let p = r.summary.pulse.unwrap();
        assert!((p.fwhm_at_zd_fs / p.fwhm_target_fs - 1.0).abs() < 0.02);
        assert!(r.pulse_mesh.is_some());
    }

    #[test]
    fn single_value_sweep_matches_run() {
        let mut c = small(ScenarioKind::RemoteBessel);
        c.sweep = Some(super::super::config::SweepSection { param: "WT_prime_m".into(), values: vec![50.0] });
        let s = sweep(&c).unwrap();
        let direct = run_scenario(&c.with_param("WT_prime_m", 50.0).unwrap()).unwrap();
        assert_eq!(s.points[0], direct);
    }
}
