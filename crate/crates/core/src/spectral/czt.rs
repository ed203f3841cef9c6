//! Chirp-z evaluation of `X_j = Σ_k x_k exp(iθ j k)` by Bluestein's identity
//! `jk = (j² + k² - (j - k)²) / 2`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct ChirpZ {
    n: usize,
    m: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    kernel_hat: Vec<Complex64>,
    chirp_in: Vec<Complex64>,
    chirp_out: Vec<Complex64>,
}

fn chirp(theta: f64, idx: usize) -> Complex64 {
    let i = idx as f64;
    Complex64::from_polar(1.0, 0.5 * theta * i * i)
}

impl ChirpZ {
    /// `n` inputs, `m` outputs, angular step `theta`.
    pub fn new(n: usize, m: usize, theta: f64) -> Self {
        assert!(n > 0 && m > 0);
        let l = (n + m - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(l);
        let ifft = planner.plan_fft_inverse(l);

        let mut kernel = vec![Complex64::new(0.0, 0.0); l];
        for (i, slot) in kernel.iter_mut().enumerate().take(m) {
            *slot = chirp(theta, i).conj();
        }
        for i in 1..n {
            kernel[l - i] = chirp(theta, i).conj();
        }
        fft.process(&mut kernel);

        ChirpZ {
            n,
            m,
            fft,
            ifft,
            kernel_hat: kernel,
            chirp_in: (0..n).map(|k| chirp(theta, k)).collect(),
            chirp_out: (0..m).map(|j| chirp(theta, j)).collect(),
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let l = self.kernel_hat.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); l];
        for ((b, &xi), &c) in buf.iter_mut().zip(x).zip(&self.chirp_in) {
            *b = xi * c;
        }
        self.fft.process(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / l as f64;
        buf.truncate(self.m);
        for (b, &c) in buf.iter_mut().zip(&self.chirp_out) {
            *b *= c * scale;
        }
        buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, m, theta) in &[(17usize, 9usize, 0.37), (64, 200, 0.011), (5, 5, 2.0)] {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let fast = ChirpZ::new(n, m, theta).apply(&x);
            for (j, f) in fast.iter().enumerate() {
                let d: Complex64 = x
                    .iter()
                    .enumerate()
                    .map(|(k, &xk)| xk * Complex64::from_polar(1.0, theta * (j * k) as f64))
                    .sum();
                assert!((f - d).norm() < 1e-11, "n={n} m={m} j={j}");
            }
        }
    }
}
