//! Normalization and closed-form lower bounds on the error functional.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{omega_window, DesignParams};
use crate::numeric::simpson;
use crate::profiles::Shape;
use crate::spectral::{check_subinterval, Aperture, TargetSpectrum};

/// Relative tolerance on `‖G‖ = √(2π)‖g‖` required by the bounds.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// First zero of `J0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

const NORM_INTERVALS: usize = 1 << 18;

/// `E0² ∫ f(r)² r dr` over the support of `f`.
pub fn input_power(e0: f64, f: &dyn Shape) -> f64 {
    let (a, b) = f.support();
    e0 * e0 * simpson(|r| f.value(r).powi(2) * r, a, b, NORM_INTERVALS)
}

/// `∫ F_T(z)² dz` over the support of `F_T`.
pub fn target_energy(target: &dyn Shape) -> f64 {
    let (a, b) = target.support();
    simpson(|z| target.value(z).powi(2), a, b, NORM_INTERVALS)
}

/// `E_T` from `E_T² ∫F_T² dz = 2πk E0² ∫f² r dr`.
pub fn normalize_target(e0: f64, f: &dyn Shape, target: &dyn Shape, k: f64) -> Result<f64> {
    let t = target_energy(target);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("target profile has zero norm"));
    }
    Ok((2.0 * PI * k * input_power(e0, f) / t).sqrt())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthConvention {
    #[default]
    Full,
    Half,
}

/// `β = 2k r0 WT W0 / (4zd² - WT²)`; the half-width convention uses `W0/2`, `WT/2`.
pub fn beta(k: f64, r0: f64, w0: f64, wt: f64, zd: f64, convention: WidthConvention) -> Result<f64> {
    if wt >= 2.0 * zd {
        return Err(Error::domain(format!("beta needs WT < 2 zd, got WT = {wt}, zd = {zd}")));
    }
    let full = 2.0 * k * r0 * wt * w0 / (4.0 * zd * zd - wt * wt);
    Ok(match convention {
        WidthConvention::Full => full,
        WidthConvention::Half => full / 4.0,
    })
}

/// Measure of `S_G(zd, WT)`.
pub fn window_measure(k: f64, zd: f64, wt: f64) -> f64 {
    2.0 * k * wt / (4.0 * zd * zd - wt * wt)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub g_l1: f64,
    pub g_l2: f64,
    pub big_g_l1: f64,
    pub big_g_l2: f64,
}

impl Norms {
    pub fn measure(aperture: &Aperture, target: &TargetSpectrum) -> Self {
        Norms { g_l1: aperture.l1(), g_l2: aperture.l2(), big_g_l1: target.l1(), big_g_l2: target.l2() }
    }

    /// `|‖G‖ - √(2π)‖g‖| / ‖G‖`.
    pub fn normalization_gap(&self) -> f64 {
        let a = (2.0 * PI).sqrt() * self.g_l2;
        if self.big_g_l2 == 0.0 {
            return if a == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (self.big_g_l2 - a).abs() / self.big_g_l2
    }

    pub fn check_normalized(&self) -> Result<()> {
        let gap = self.normalization_gap();
        if gap <= NORMALIZATION_TOLERANCE {
            Ok(())
        } else {
            Err(Error::Normalization { gap, tol: NORMALIZATION_TOLERANCE })
        }
    }
}

/// `(|‖G‖ - √(2π)‖g‖|, ‖G‖ + √(2π)‖g‖)`.
pub fn plancherel_gap(big_g_l2: f64, g_l2: f64) -> (f64, f64) {
    let a = (2.0 * PI).sqrt() * g_l2;
    ((big_g_l2 - a).abs(), big_g_l2 + a)
}

/// `‖G‖ (1 - √(β/π))`, clamped at zero.
pub fn thm2_lower_bound(norms: &Norms, beta: f64) -> Result<f64> {
    norms.check_normalized()?;
    Ok((norms.big_g_l2 * (1.0 - (beta / PI).sqrt())).max(0.0))
}

/// The two `L¹` refinements: through `‖g‖_{L¹}` and through `‖G‖_{L¹}`.
pub fn thm3_lower_bounds(norms: &Norms, params: &DesignParams) -> Result<(f64, f64)> {
    norms.check_normalized()?;
    let m = window_measure(params.k, params.zd, params.wt);
    let via_g = if norms.g_l2 > 0.0 {
        (2.0 * PI).sqrt() * norms.g_l2 * (1.0 - m.sqrt() * norms.g_l1 / norms.g_l2)
    } else {
        0.0
    };
    let via_big_g = if norms.big_g_l2 > 0.0 {
        norms.big_g_l2 * (1.0 - (params.r0 * params.w0 / PI).sqrt() * norms.big_g_l1 / norms.big_g_l2)
    } else {
        0.0
    };
    Ok((via_g.max(0.0), via_big_g.max(0.0)))
}

/// Which local estimate to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalForm {
    /// `‖G‖_loc - √m ‖g‖_{L¹}`.
    #[default]
    L1,
    /// `‖G‖_loc - √(m r0 W0 / π) ‖G‖`.
    Support,
    /// `‖G‖_loc - √(m r0 zd′ / π) ‖G‖`; kept for comparison, not a proven bound.
    Printed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalBound {
    pub value: f64,
    pub condition_holds: bool,
    pub zd: f64,
    pub wt: f64,
}

/// Local lower bound on `S_G(zd′, WT′)`. The window measure is the larger of
/// the closed form and the sampled measure, so the bound also holds for the
/// discrete functional.
pub fn local_lower_bound(
    target: &TargetSpectrum,
    norms: &Norms,
    params: &DesignParams,
    zd_sub: f64,
    wt_sub: f64,
    form: LocalForm,
) -> Result<LocalBound> {
    check_subinterval(params, zd_sub, wt_sub)?;
    norms.check_normalized()?;
    let (lo, hi) = omega_window(params.k, zd_sub, wt_sub);
    let (g_loc, sampled) = target.local_l2(lo, hi);
    let m = window_measure(params.k, zd_sub, wt_sub).max(sampled);
    let (cond, value) = match form {
        LocalForm::L1 => {
            let loss = m.sqrt() * norms.g_l1;
            (loss <= g_loc, g_loc - loss)
        }
        LocalForm::Support | LocalForm::Printed => {
            let len = if form == LocalForm::Support { params.w0 } else { zd_sub };
            let loss = (m * params.r0 * len / PI).sqrt() * norms.big_g_l2;
            (loss < g_loc, g_loc - loss)
        }
    };
    Ok(LocalBound { value: if cond { value.max(0.0) } else { 0.0 }, condition_holds: cond, zd: zd_sub, wt: wt_sub })
}

/// Search grid over admissible `(zd′, WT′)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSearch {
    pub widths: usize,
    pub centers: usize,
    /// Smallest `WT′/WT` considered.
    pub min_fraction: f64,
}

impl Default for LocalSearch {
    fn default() -> Self {
        LocalSearch { widths: 24, centers: 33, min_fraction: 1.0 / 64.0 }
    }
}

impl LocalSearch {
    pub fn points(&self, params: &DesignParams) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let nw = self.widths.max(1);
        for i in 0..nw {
            let t = if nw == 1 { 1.0 } else { i as f64 / (nw - 1) as f64 };
            let wt_sub = params.wt * self.min_fraction.powf(1.0 - t);
            let slack = 0.5 * (params.wt - wt_sub);
            let nc = self.centers.max(1);
            for j in 0..nc {
                let u = if nc == 1 { 0.5 } else { j as f64 / (nc - 1) as f64 };
                out.push((params.zd - slack + 2.0 * slack * u, wt_sub));
            }
        }
        out
    }
}

/// Largest local bound over explicit candidate windows.
pub fn best_local_bound_on(
    target: &TargetSpectrum,
    norms: &Norms,
    params: &DesignParams,
    points: &[(f64, f64)],
) -> Result<LocalBound> {
    let mut best: Option<LocalBound> = None;
    for &(zd_sub, wt_sub) in points {
        let b = local_lower_bound(target, norms, params, zd_sub, wt_sub, LocalForm::L1)?;
        if best.is_none_or(|x| b.value > x.value) {
            best = Some(b);
        }
    }
    best.ok_or_else(|| Error::domain("empty local search grid"))
}

pub fn best_local_bound(
    target: &TargetSpectrum,
    norms: &Norms,
    params: &DesignParams,
    search: &LocalSearch,
) -> Result<LocalBound> {
    best_local_bound_on(target, norms, params, &search.points(params))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaWindow {
    /// `w_m = 2WT′/m`.
    TwoWidthOverM,
    /// `w_m = π² WT′/m`, half the intensity modulation period.
    HalfPeriod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaReference {
    /// `∫G²` over the window.
    Local,
    /// `∫G²` over the whole target.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L1Power {
    Squared,
    Unsquared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaConvention {
    pub window: DeltaWindow,
    pub reference: DeltaReference,
    pub l1: L1Power,
}

impl DeltaConvention {
    pub const CANONICAL: DeltaConvention = DeltaConvention {
        window: DeltaWindow::HalfPeriod,
        reference: DeltaReference::Global,
        l1: L1Power::Squared,
    };

    pub const LITERAL: DeltaConvention = DeltaConvention {
        window: DeltaWindow::TwoWidthOverM,
        reference: DeltaReference::Local,
        l1: L1Power::Squared,
    };

    pub fn all() -> Vec<DeltaConvention> {
        let mut v = Vec::new();
        for window in [DeltaWindow::TwoWidthOverM, DeltaWindow::HalfPeriod] {
            for reference in [DeltaReference::Local, DeltaReference::Global] {
                for l1 in [L1Power::Squared, L1Power::Unsquared] {
                    v.push(DeltaConvention { window, reference, l1 });
                }
            }
        }
        v
    }

    pub fn label(&self) -> String {
        let w = match self.window {
            DeltaWindow::TwoWidthOverM => "2wt/m",
            DeltaWindow::HalfPeriod => "half-period",
        };
        let r = match self.reference {
            DeltaReference::Local => "local",
            DeltaReference::Global => "global",
        };
        let l = match self.l1 {
            L1Power::Squared => "l1^2",
            L1Power::Unsquared => "l1",
        };
        format!("{w}/{r}/{l}")
    }

    pub fn window_width(&self, wtp: f64, m: u32) -> f64 {
        match self.window {
            DeltaWindow::TwoWidthOverM => 2.0 * wtp / m as f64,
            DeltaWindow::HalfPeriod => PI * PI * wtp / m as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaValue {
    pub m: u32,
    pub value: f64,
    pub window: f64,
    /// The window is wider than the target support.
    pub clipped: bool,
}

/// Resolution diagnostic `δ_m`; positive values flag oscillations no phase can reproduce.
pub fn delta_m(
    target: &TargetSpectrum,
    norms: &Norms,
    params: &DesignParams,
    wtp: f64,
    m: u32,
    convention: DeltaConvention,
) -> Result<DeltaValue> {
    if m == 0 || !(wtp > 0.0) {
        return Err(Error::domain("delta_m needs m >= 1 and WT' > 0"));
    }
    let w = convention.window_width(wtp, m);
    let clipped = w >= params.wt;
    if clipped && convention.window == DeltaWindow::TwoWidthOverM {
        return Err(Error::domain(format!("window {w} is not narrower than the target support {}", params.wt)));
    }
    if w >= 2.0 * params.zd {
        return Err(Error::domain("window reaches the source plane"));
    }
    let a = match convention.reference {
        DeltaReference::Local => {
            let (lo, hi) = omega_window(params.k, params.zd, w);
            target.local_l2(lo, hi).0.powi(2)
        }
        DeltaReference::Global => norms.big_g_l2.powi(2),
    };
    if !(a > 0.0) {
        return Err(Error::domain("target has no energy in the delta window"));
    }
    let l = match convention.l1 {
        L1Power::Squared => norms.g_l1 * norms.g_l1,
        L1Power::Unsquared => norms.g_l1,
    };
    let value = (a - window_measure(params.k, params.zd, w) * l) / a;
    Ok(DeltaValue { m, value, window: w, clipped })
}

/// Convention whose values best match `reference` in worst-case relative error.
pub fn select_delta_convention<F>(reference: &[(u32, f64)], mut eval: F) -> Result<(DeltaConvention, f64)>
where
    F: FnMut(DeltaConvention, u32) -> Result<f64>,
{
    let mut best: Option<(DeltaConvention, f64)> = None;
    for c in DeltaConvention::all() {
        let mut worst = 0.0f64;
        let mut ok = true;
        for &(m, r) in reference {
            match eval(c, m) {
                Ok(v) => worst = worst.max(((v - r) / r).abs()),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.is_none_or(|(_, w)| worst < w) {
            best = Some((c, worst));
        }
    }
    best.ok_or_else(|| Error::domain("no delta convention could be evaluated"))
}

/// `C(n) = 2^{1/2n - 1} / Γ(1 + 1/2n)`.
pub fn c_of_n(n: u32) -> f64 {
    let e = 0.5 / n as f64;
    2f64.powf(e - 1.0) / libm::tgamma(1.0 + e)
}

/// Closed-form `E_T²/E0²` for a Gaussian ring and an order-`n` super-Gaussian.
pub fn peak_intensity_ratio(n: u32, k: f64, r0: f64, w0p: f64, wtp: f64) -> f64 {
    2f64.sqrt() * PI.powf(1.5) * c_of_n(n) * k * r0 * w0p / wtp
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorePower {
    /// Power inside the first zero of `J0(k r0 r / zd)`.
    pub canonical: f64,
    /// `9.8·2^{+1/2n}/Γ(1+1/2n)·zd²/(k r0² WT′)·P0`.
    pub prefactor_plus: f64,
    /// `9.8·2^{-1/2n}/Γ(1+1/2n)·zd²/(k r0² WT′)·P0`.
    pub prefactor_minus: f64,
    /// Outside the short-wavelength regime.
    pub advisory: bool,
}

/// `∫₀^{j₀₁} J0(x)² x dx = j₀₁² J1(j₀₁)² / 2`.
pub fn core_kernel_constant() -> f64 {
    0.5 * J0_FIRST_ZERO * J0_FIRST_ZERO * libm::j1(J0_FIRST_ZERO).powi(2)
}

/// Central-core power at `zd` for a flat-top target of order `n`.
pub fn central_core_power(k: f64, r0: f64, zd: f64, n: u32, wtp: f64, p0: f64, beta: f64) -> CorePower {
    let e = 0.5 / n as f64;
    let gamma = libm::tgamma(1.0 + e);
    let scale = zd * zd / (k * r0 * r0 * wtp) * p0;
    // ‖F_T‖² = 2^{1-1/2n} Γ(1+1/2n) WT′
    let canonical = 2.0 * PI * core_kernel_constant() / (2f64.powf(1.0 - e) * gamma) * scale;
    CorePower {
        canonical,
        prefactor_plus: 9.8 * 2f64.powf(e) / gamma * scale,
        prefactor_minus: 9.8 * 2f64.powf(-e) / gamma * scale,
        advisory: beta <= 10.0 * PI,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub beta: f64,
    pub beta_half_width: f64,
    pub plancherel_gap: (f64, f64),
    pub thm2_lower: f64,
    /// Global bound evaluated with the half-width `β`; informational.
    pub thm2_lower_half_width: f64,
    pub thm3_lower_g: f64,
    pub thm3_lower_big_g: f64,
    pub best_local: LocalBound,
    pub master_lower: f64,
    pub normalization_gap: f64,
    pub norms: Norms,
}

impl BoundsReport {
    pub fn bound_dominated(&self) -> bool {
        self.beta < PI
    }
}

pub fn bounds_report(
    target: &TargetSpectrum,
    aperture: &Aperture,
    params: &DesignParams,
    search: &LocalSearch,
) -> Result<BoundsReport> {
    let norms = Norms::measure(aperture, target);
    norms.check_normalized()?;
    let b = beta(params.k, params.r0, params.w0, params.wt, params.zd, WidthConvention::Full)?;
    let bh = beta(params.k, params.r0, params.w0, params.wt, params.zd, WidthConvention::Half)?;
    let gap = plancherel_gap(norms.big_g_l2, norms.g_l2);
    let t2 = thm2_lower_bound(&norms, b)?;
    let t2h = thm2_lower_bound(&norms, bh)?;
    let (t3g, t3big) = thm3_lower_bounds(&norms, params)?;
    let local = best_local_bound(target, &norms, params, search)?;
    let master = gap.0.max(t2).max(t3g).max(t3big).max(local.value);
    Ok(BoundsReport {
        beta: b,
        beta_half_width: bh,
        plancherel_gap: gap,
        thm2_lower: t2,
        thm2_lower_half_width: t2h,
        thm3_lower_g: t3g,
        thm3_lower_big_g: t3big,
        best_local: local,
        master_lower: master,
        normalization_gap: norms.normalization_gap(),
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{flat_top_support_width, Profile, Truncated, TRUNCATION_THRESHOLD};

    #[test]
    fn beta_examples() {
        let b = beta(9.5e6, 0.3, 0.42, 263.21, 1000.0, WidthConvention::Full).unwrap();
        assert!((b - 160.3).abs() < 0.1, "{b}");
        let b2 = beta(1.9e7, 0.3, 0.42, 263.21, 1000.0, WidthConvention::Full).unwrap();
        assert!((b2 / b - 2.0).abs() < 1e-14);
        let h = beta(9.5e6, 0.3, 0.42, 263.21, 1000.0, WidthConvention::Half).unwrap();
        assert!((b / h - 4.0).abs() < 1e-14);
        assert!(beta(9.5e6, 0.3, 0.42, 1e-12, 1000.0, WidthConvention::Full).unwrap() < 1e-9);
        assert!(beta(1.0, 1.0, 1.0, 2.0, 1.0, WidthConvention::Full).is_err());
    }

    #[test]
    fn beta_oscillatory_preset() {
        let wt = flat_top_support_width(1e-3, 8, TRUNCATION_THRESHOLD).unwrap();
        let b = beta(9.7e6, 0.05, 0.03, wt, 1.0, WidthConvention::Full).unwrap();
        assert!((b - 16.7).abs() < 0.1, "{b}");
    }

    #[test]
    fn c_of_n_values() {
        assert!((c_of_n(1) - (2.0 / PI).sqrt()).abs() < 1e-12);
        assert!((c_of_n(4) - 0.578_984).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for n in 1..=32 {
            let c = c_of_n(n);
            assert!(c < prev);
            prev = c;
        }
        assert!((c_of_n(32) / 0.5 - 1.0).abs() < 0.02);
        assert!((c_of_n(100_000) - 0.5).abs() < 1e-5);
    }

    #[test]
    fn normalization_matches_closed_form() {
        let f = Truncated::new(Profile::GaussianRing { center: 0.3, width: 0.07 }, TRUNCATION_THRESHOLD).unwrap();
        let t = Truncated::new(Profile::SuperGaussian { center: 1000.0, width: 20.0, order: 4 }, TRUNCATION_THRESHOLD)
            .unwrap();
        let et = normalize_target(1.0, &f, &t, 9.5e6).unwrap();
        let closed = peak_intensity_ratio(4, 9.5e6, 0.3, 0.07, 20.0);
        assert!(((et * et) / closed - 1.0).abs() < 0.01, "{} vs {closed}", et * et);
        assert!((closed - 45_479.87).abs() < 0.01, "{closed}");
        let et2 = normalize_target(2.0, &f, &t, 9.5e6).unwrap();
        assert!((et2 / et - 2.0).abs() < 1e-14);
    }

    #[test]
    fn balanced_normalization() {
        struct Unit(f64, f64);
        impl Shape for Unit {
            fn value(&self, _: f64) -> f64 {
                1.0
            }
            fn support(&self) -> (f64, f64) {
                (self.0, self.1)
            }
        }
        // ∫ r dr over [1, √3] = 1 and ∫ dz over [0, 1] = 1
        let et = normalize_target(1.0, &Unit(1.0, 3f64.sqrt()), &Unit(0.0, 1.0), 1.0 / (2.0 * PI)).unwrap();
        assert!((et - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thm2_edges() {
        let n = Norms { g_l1: 1.0, g_l2: 1.0, big_g_l1: 1.0, big_g_l2: (2.0 * PI).sqrt() };
        assert!(thm2_lower_bound(&n, PI).unwrap().abs() < 1e-15);
        assert!((thm2_lower_bound(&n, 0.0).unwrap() - n.big_g_l2).abs() < 1e-15);
        assert_eq!(thm2_lower_bound(&n, 10.0).unwrap(), 0.0);
        let bad = Norms { big_g_l2: 3.0, ..n };
        assert!(matches!(thm2_lower_bound(&bad, 0.1), Err(Error::Normalization { .. })));
    }

    #[test]
    fn plancherel_gap_examples() {
        let (lo, hi) = plancherel_gap(2.0, 0.0);
        assert_eq!((lo, hi), (2.0, 2.0));
        let (lo, _) = plancherel_gap((2.0 * PI).sqrt() * 3.0, 3.0);
        assert!(lo < 1e-14);
    }

    #[test]
    fn thm3_spike_limit() {
        let params = DesignParams::new(9.5e6, 0.3, 0.42, 1000.0, 263.21, 1.0).unwrap();
        let n = Norms { g_l1: 1e-9, g_l2: 1.0, big_g_l1: 1.0, big_g_l2: (2.0 * PI).sqrt() };
        let (via_g, _) = thm3_lower_bounds(&n, &params).unwrap();
        assert!((via_g / n.big_g_l2 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn core_power_scaling() {
        let a = central_core_power(9.5e6, 0.3, 1000.0, 4, 100.0, 1.0, 160.0);
        let b = central_core_power(9.5e6, 0.3, 1000.0, 4, 50.0, 1.0, 160.0);
        assert!((b.canonical / a.canonical - 2.0).abs() < 1e-12);
        assert!((b.prefactor_plus / a.prefactor_plus - 2.0).abs() < 1e-12);
        assert_eq!(central_core_power(9.5e6, 0.3, 1000.0, 4, 100.0, 0.0, 160.0).canonical, 0.0);
        assert!((core_kernel_constant() - 0.779).abs() < 1e-3);
        assert!(a.prefactor_plus > a.prefactor_minus);
        assert!(!a.advisory);
    }

    #[test]
    fn conventions_enumerated() {
        let all = DeltaConvention::all();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&DeltaConvention::CANONICAL));
        assert!(all.contains(&DeltaConvention::LITERAL));
    }
}
