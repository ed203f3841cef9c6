mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::Rng;

use ringshaper::bounds::{beta, local_lower_bound, LocalForm, Norms, WidthConvention};
use ringshaper::gs::{run_gs, GsOptions};
use ringshaper::scenario::{Design, ScenarioConfig, ScenarioKind};

fn random_config(r: &mut impl Rng) -> ScenarioConfig {
    let mut c = ScenarioConfig::preset(ScenarioKind::RemoteBessel).unwrap();
    c.design.k_per_m = r.gen_range(1e6..1e7);
    c.design.r0_m = r.gen_range(0.1..0.5);
    c.input.w0_prime_m = c.design.r0_m * r.gen_range(0.05..0.3);
    c.design.zd_m = r.gen_range(100.0..2000.0);
    c.target.wt_prime_m = c.design.zd_m * r.gen_range(0.0005..0.1);
    c.target.order = r.gen_range(1..6);
    c.solver.n_s = 2048;
    c.solver.local_widths = 8;
    c.solver.local_centers = 9;
    c
}

#[test]
fn bounds_hold_for_random_physical_designs() {
    let mut r = common::rng(21);
    let mut nonzero = 0;
    for _ in 0..12 {
        let c = random_config(&mut r);
        let d = match Design::new(&c) {
            Ok(d) => d,
            Err(ringshaper::Error::Resolution(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let report = d.bounds().unwrap();
        assert!(report.normalization_gap < 1e-6);
        if report.master_lower > 1e-6 * d.spectrum.l2() {
            nonzero += 1;
        }
        let mut phases: Vec<Vec<f64>> = (0..5).map(|_| (0..d.grid.n).map(|_| r.gen_range(0.0..2.0 * PI)).collect()).collect();
        if let Ok((_, _, st)) = d.stationary() {
            let gs = run_gs(&d.plan, &d.spectrum, &st, &GsOptions { iterations: 30, keep_phases: false, ..Default::default() }).unwrap();
            phases.push(st.phase.clone());
            phases.push(gs.final_phase().to_vec());
        }
        for ph in &phases {
            let i = d.error(ph).unwrap();
            assert!(i >= report.master_lower - 1e-12 * d.spectrum.l2(), "{i} < {}", report.master_lower);
        }
    }
    assert!(nonzero > 0, "no configuration produced a nontrivial bound");
}

#[test]
fn local_forms_are_sound_on_their_windows() {
    let mut c = ScenarioConfig::preset(ScenarioKind::RemoteBessel).unwrap();
    c.target.wt_prime_m = 2.0;
    let d = Design::new(&c).unwrap();
    let norms = Norms::measure(&d.aperture, &d.spectrum);
    let (_, _, st) = d.stationary().unwrap();
    let field = d.plan.forward(&st.field());
    for (zd, wt) in d.search().points(&d.params) {
        let local = ringshaper::spectral::local_error_of_field(&d.spectrum, &field, d.params.k, zd, wt);
        for form in [LocalForm::L1, LocalForm::Support] {
            let b = local_lower_bound(&d.spectrum, &norms, &d.params, zd, wt, form).unwrap();
            assert!(local >= b.value - 1e-12 * d.spectrum.l2(), "{form:?} at ({zd}, {wt})");
        }
    }
}

#[test]
fn unnormalized_targets_are_rejected() {
    let d = Design::new(&ScenarioConfig::preset(ScenarioKind::RemoteBessel).unwrap()).unwrap();
    let scaled = d.spectrum.clone().scaled(1.01);
    let err = ringshaper::bounds::bounds_report(&scaled, &d.aperture, &d.params, &d.search()).unwrap_err();
    assert!(matches!(err, ringshaper::Error::Normalization { .. }));
    assert_eq!(err.exit_code(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_is_monotone_and_half_width_is_a_quarter(
        k in 1e5f64..1e7, r0 in 0.05f64..1.0, w0f in 0.01f64..0.9, zd in 1.0f64..2000.0, wtf in 0.001f64..0.9, grow in 1.01f64..1.5
    ) {
        let w0 = 2.0 * r0 * w0f;
        let wt = 2.0 * zd * wtf;
        let b = beta(k, r0, w0, wt, zd, WidthConvention::Full).unwrap();
        let h = beta(k, r0, w0, wt, zd, WidthConvention::Half).unwrap();
        prop_assert!((h * 4.0 / b - 1.0).abs() < 1e-12);
        if wt * grow < 2.0 * zd {
            prop_assert!(beta(k, r0, w0, wt * grow, zd, WidthConvention::Full).unwrap() > b);
        }
        prop_assert!(beta(k * grow, r0, w0, wt, zd, WidthConvention::Full).unwrap() > b);
    }
}
