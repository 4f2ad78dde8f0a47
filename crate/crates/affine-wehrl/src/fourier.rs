//! Nonuniform-to-uniform Fourier summation.
//!
//! Evaluates S_j = Σ_i c_i e^{2πi k_i (offset + j·Δ)} for j = 0..n-1 with
//! arbitrary source frequencies k_i, in O(n_src·w + n log n) per call via
//! Gaussian gridding (spread onto an oversampled uniform grid, FFT, then
//! deconvolve by the kernel transform). Because the targets are an arithmetic
//! progression, folding k_i modulo 1/Δ is exact, so the only approximation is
//! the kernel itself (~1e-13 relative).
//!
//! A direct O(n_src·n) evaluator with per-element trig is kept as the
//! cross-validation oracle.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const LN_INV_EPS: f64 = 30.0; // kernel accuracy target e^{-30} ≈ 1e-13
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Precomputed evaluator for fixed sources `k` and a fixed uniform target
/// progression `offset + j·delta`, reusable across many coefficient vectors
/// (one per a-row of a field).
pub struct UniformFourierEval {
    n_targets: usize,
    direct: Option<(Vec<f64>, f64, f64)>, // tiny-problem fallback: (k, delta, offset)
    m_r: usize,
    w_sp: i64,
    fft: Arc<dyn Fft<f64>>,
    cells: Vec<i64>,
    e1: Vec<f64>,
    e2: Vec<f64>,
    twist: Vec<Complex64>,
    e3: Vec<f64>,
    deconv: Vec<f64>,
}

impl UniformFourierEval {
    pub fn new(k: &[f64], n_targets: usize, delta: f64, offset: f64) -> Self {
        assert!(n_targets > 0 && delta > 0.0);
        if n_targets < 64 {
            return UniformFourierEval {
                n_targets,
                direct: Some((k.to_vec(), delta, offset)),
                m_r: 0,
                w_sp: 0,
                fft: FftPlanner::new().plan_fft_inverse(1),
                cells: vec![],
                e1: vec![],
                e2: vec![],
                twist: vec![],
                e3: vec![],
                deconv: vec![],
            };
        }
        assert!(n_targets % 2 == 0, "even target count required");
        let m_r = (2 * n_targets).next_power_of_two();
        let h = 1.0 / m_r as f64;
        let w_sp = (std::f64::consts::SQRT_2 * LN_INV_EPS / std::f64::consts::PI).ceil() as i64;
        let tau = (w_sp as f64 * h).powi(2) / (4.0 * LN_INV_EPS);

        let mut cells = Vec::with_capacity(k.len());
        let mut e1 = Vec::with_capacity(k.len());
        let mut e2 = Vec::with_capacity(k.len());
        let mut twist = Vec::with_capacity(k.len());
        let half_n = (n_targets / 2) as f64;
        for &ki in k {
            let x = (ki * delta).rem_euclid(1.0);
            let c0 = (x * m_r as f64).round() as i64;
            let xi = x - c0 as f64 * h;
            cells.push(c0.rem_euclid(m_r as i64));
            e1.push((-xi * xi / (4.0 * tau)).exp());
            e2.push((xi * h / (2.0 * tau)).exp());
            // e^{2πi k·offset} · e^{2πi (n/2) x}: shifts the mode index so the
            // FFT output j' ∈ [-n/2, n/2) lands on targets j = j' + n/2
            let theta = TWO_PI * (ki * offset + half_n * x);
            twist.push(Complex64::new(0.0, theta).exp());
        }
        let e3 = (0..=w_sp)
            .map(|j| (-((j as f64 * h).powi(2)) / (4.0 * tau)).exp())
            .collect();
        let norm = 1.0 / (m_r as f64 * (4.0 * std::f64::consts::PI * tau).sqrt());
        let deconv = (0..n_targets)
            .map(|j| {
                let jp = j as f64 - half_n;
                norm * (4.0 * std::f64::consts::PI.powi(2) * tau * jp * jp).exp()
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_inverse(m_r);
        UniformFourierEval {
            n_targets,
            direct: None,
            m_r,
            w_sp,
            fft,
            cells,
            e1,
            e2,
            twist,
            e3,
            deconv,
        }
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    /// Evaluate S_j for the coefficient vector `c` (same length as the
    /// sources supplied at construction).
    pub fn evaluate(&self, c: &[Complex64]) -> Vec<Complex64> {
        if let Some((k, delta, offset)) = &self.direct {
            return direct_uniform_sum(k, c, self.n_targets, *delta, *offset);
        }
        assert_eq!(c.len(), self.cells.len());
        let m_r = self.m_r;
        let mut fine = vec![Complex64::new(0.0, 0.0); m_r];
        for i in 0..c.len() {
            let ct = c[i] * self.twist[i];
            if ct.re == 0.0 && ct.im == 0.0 {
                continue;
            }
            let c0 = self.cells[i] as usize;
            let e2 = self.e2[i];
            // forward ladder j = 0..w
            let mut p = self.e1[i];
            let mut idx = c0;
            for j in 0..=self.w_sp {
                fine[idx] += ct * (p * self.e3[j as usize]);
                p *= e2;
                idx += 1;
                if idx == m_r {
                    idx = 0;
                }
            }
            // backward ladder j = -1..-w
            let inv_e2 = 1.0 / e2;
            let mut p = self.e1[i] * inv_e2;
            let mut idx = if c0 == 0 { m_r - 1 } else { c0 - 1 };
            for j in 1..=self.w_sp {
                fine[idx] += ct * (p * self.e3[j as usize]);
                p *= inv_e2;
                idx = if idx == 0 { m_r - 1 } else { idx - 1 };
            }
        }
        self.fft.process(&mut fine);
        let half_n = self.n_targets / 2;
        (0..self.n_targets)
            .map(|j| {
                let jp = j as i64 - half_n as i64;
                let bin = jp.rem_euclid(m_r as i64) as usize;
                fine[bin] * self.deconv[j]
            })
            .collect()
    }
}

/// Direct O(n_src·n) oracle for the same sum, with per-element trig.
pub fn direct_uniform_sum(
    k: &[f64],
    c: &[Complex64],
    n: usize,
    delta: f64,
    offset: f64,
) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let b = offset + j as f64 * delta;
            let mut s = Complex64::new(0.0, 0.0);
            for (&ki, &ci) in k.iter().zip(c) {
                s += ci * Complex64::new(0.0, TWO_PI * ki * b).exp();
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_case(seed: u64, n_src: usize, k_max: f64) -> (Vec<f64>, Vec<Complex64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k: Vec<f64> = (0..n_src).map(|_| rng.gen::<f64>() * k_max).collect();
        k.sort_by(f64::total_cmp);
        let c = (0..n_src)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        (k, c)
    }

    #[test]
    fn matches_direct_oracle() {
        let (k, c) = random_case(7, 300, 40.0);
        let n = 1024;
        let delta = 1.0 / 32.0;
        let offset = -16.0 + delta / 2.0;
        let eval = UniformFourierEval::new(&k, n, delta, offset);
        let fast = eval.evaluate(&c);
        let slow = direct_uniform_sum(&k, &c, n, delta, offset);
        let scale: f64 = c.iter().map(|z| z.norm()).sum();
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).norm() < 1e-11 * scale, "{f} vs {s}");
        }
    }

    #[test]
    fn folding_beyond_one_over_delta_is_exact() {
        // sources beyond 1/Δ = 16 exercise the modular fold
        let (k, c) = random_case(11, 200, 60.0);
        let n = 512;
        let delta = 1.0 / 16.0;
        let offset = -8.0 + delta / 2.0;
        let eval = UniformFourierEval::new(&k, n, delta, offset);
        let fast = eval.evaluate(&c);
        let slow = direct_uniform_sum(&k, &c, n, delta, offset);
        let scale: f64 = c.iter().map(|z| z.norm()).sum();
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).norm() < 1e-11 * scale);
        }
    }

    #[test]
    fn tiny_target_counts_fall_back_to_direct() {
        let (k, c) = random_case(3, 50, 10.0);
        let eval = UniformFourierEval::new(&k, 12, 0.25, -1.0);
        let fast = eval.evaluate(&c);
        let slow = direct_uniform_sum(&k, &c, 12, 0.25, -1.0);
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).norm() < 1e-12);
        }
    }
}
