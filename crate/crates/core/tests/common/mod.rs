#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ringshaper::grids::SGrid;
use ringshaper::spectral::{Aperture, SpectralPlan, TargetSpectrum};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth bump supported on `(-1, 1)`.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// A random compactly supported amplitude and smooth phase on a random grid.
pub struct RandomInput {
    pub grid: SGrid,
    pub center: f64,
    pub half: f64,
    pub ripple: (f64, f64, f64),
    pub phase: [f64; 3],
}

impl RandomInput {
    pub fn draw(r: &mut ChaCha8Rng) -> Self {
        let s_min = r.gen_range(0.01..1.0);
        let len = r.gen_range(0.01..1.0);
        let n = r.gen_range(512..2048);
        let grid = SGrid::new(s_min, s_min + len, n).unwrap();
        let half = len * r.gen_range(0.2..0.45);
        let center = s_min + len * 0.5 + r.gen_range(-1.0..1.0) * (0.5 * len - half) * 0.9;
        RandomInput {
            grid,
            center,
            half,
            ripple: (r.gen_range(0.0..0.8), r.gen_range(1.0..15.0), r.gen_range(0.0..6.3)),
            phase: [r.gen_range(-30.0..30.0), r.gen_range(-30.0..30.0), r.gen_range(-30.0..30.0)],
        }
    }

    pub fn g(&self, s: f64) -> f64 {
        let x = (s - self.center) / self.half;
        let (a, f, p) = self.ripple;
        bump(x) * (1.0 + a * (f * x + p).sin())
    }

    pub fn phi(&self, s: f64) -> f64 {
        let x = (s - self.center) / self.half;
        self.phase[0] * x + self.phase[1] * x * x + self.phase[2] * x * x * x
    }

    pub fn aperture(&self) -> Aperture {
        let s = self.grid.points();
        Aperture::new(self.grid, s.iter().map(|&x| self.g(x)).collect(), s.iter().map(|&x| self.phi(x)).collect())
            .unwrap()
    }

    /// `‖g‖_{L²}` by Simpson's rule on the bump support.
    pub fn l2_oracle(&self) -> f64 {
        let n = 1 << 16;
        let (a, b) = (self.center - self.half, self.center + self.half);
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.g(a + i as f64 * h).powi(2);
        }
        (acc * h / 3.0).sqrt()
    }
}

/// A random GS problem: plan, nonnegative target on part of the band, start.
pub fn random_gs_problem(r: &mut ChaCha8Rng) -> (SpectralPlan, TargetSpectrum, Aperture) {
    let input = RandomInput::draw(r);
    let grid = input.grid;
    let band = 2.0 * std::f64::consts::PI / grid.ds();
    let center = r.gen_range(0.0..5.0) * band;
    let plan = SpectralPlan::new(grid, center, band / r.gen_range(200.0..1000.0)).unwrap();
    let (j0, j1) = {
        let a = r.gen_range(0..plan.len() / 2);
        (a, a + r.gen_range(plan.len() / 16..plan.len() / 2))
    };
    let (fa, fb) = (r.gen_range(0.5..3.0), r.gen_range(0.0..0.5));
    let values = (0..plan.len())
        .map(|j| {
            if j >= j0 && j < j1 {
                let t = (j - j0) as f64 / (j1 - j0) as f64;
                fa * bump(2.0 * t - 1.0) * (1.0 + fb * (9.0 * t).cos())
            } else {
                0.0
            }
        })
        .collect();
    let target = TargetSpectrum {
        omega_start: plan.omega(0),
        d_omega: plan.d_omega(),
        values,
        support: (plan.omega(j0), plan.omega(j1)),
        k: 1.0,
    };
    let mut ap = input.aperture();
    ap.phase = (0..grid.n).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
    (plan, target, ap)
}

pub fn l2_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn l2(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
