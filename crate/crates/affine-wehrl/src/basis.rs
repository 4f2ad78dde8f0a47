//! Orthonormal generalized-Laguerre basis of L²(ℝ₊) adapted to the fiducial:
//! φ_j(k) = N_j k^α e^{-k} L_j^{(2α)}(2k) with
//! N_j = (2^{2α+1} j! / Γ(j+2α+1))^{1/2}, so that φ₀ is exactly the
//! normalized fiducial α^{-1/2}η_α and truncations keep the k^α boundary
//! behavior of the maximizer family.

use num_complex::Complex64;

use crate::affine::SampledFunction;
use crate::error::{Error, Result};
use crate::grids::KGrid;
use crate::special::ln_gamma;

/// Basis family parameters: weight exponent 2α, exponential scale 2.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BasisSpec {
    pub alpha: f64,
    pub dim: usize,
}

impl BasisSpec {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        if dim == 0 || dim > 16 {
            return Err(Error::InvalidParameter(format!(
                "basis dim must be in 1..=16, got {dim}"
            )));
        }
        Ok(BasisSpec { alpha, dim })
    }
}

/// The sampled orthonormal basis.
#[derive(Debug, Clone)]
pub struct LaguerreBasis {
    spec: BasisSpec,
    functions: Vec<SampledFunction>,
}

impl LaguerreBasis {
    pub fn build(spec: BasisSpec, grid: &KGrid) -> Self {
        let alpha = spec.alpha;
        let two_alpha = 2.0 * alpha;
        let n = grid.len();
        // L_j^{(2α)}(2k) by the three-term recurrence, all degrees at once
        let mut lag = vec![vec![0.0f64; n]; spec.dim];
        for (i, &k) in grid.nodes().iter().enumerate() {
            let x = 2.0 * k;
            let mut lm1 = 0.0;
            let mut l = 1.0;
            for j in 0..spec.dim {
                lag[j][i] = l;
                let jf = j as f64;
                let lp1 = ((2.0 * jf + two_alpha + 1.0 - x) * l - (jf + two_alpha) * lm1)
                    / (jf + 1.0);
                lm1 = l;
                l = lp1;
            }
        }
        let functions = (0..spec.dim)
            .map(|j| {
                let jf = j as f64;
                let ln_norm = 0.5
                    * ((two_alpha + 1.0) * std::f64::consts::LN_2 + ln_gamma(jf + 1.0)
                        - ln_gamma(jf + two_alpha + 1.0));
                let values = grid
                    .nodes()
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| {
                        Complex64::new((ln_norm + alpha * k.ln() - k).exp() * lag[j][i], 0.0)
                    })
                    .collect();
                SampledFunction::new_unchecked(grid.clone(), values)
            })
            .collect();
        LaguerreBasis { spec, functions }
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }
    pub fn dim(&self) -> usize {
        self.spec.dim
    }
    pub fn function(&self, j: usize) -> &SampledFunction {
        &self.functions[j]
    }

    /// f = Σ c_j φ_j.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> SampledFunction {
        assert_eq!(coeffs.len(), self.dim());
        let grid = self.functions[0].grid().clone();
        let n = grid.len();
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        for (c, f) in coeffs.iter().zip(&self.functions) {
            for (v, fv) in values.iter_mut().zip(f.values()) {
                *v += c * fv;
            }
        }
        SampledFunction::new_unchecked(grid, values)
    }

    /// Largest |⟨φ_i, φ_j⟩ - δ_ij| over the sampled Gram matrix.
    pub fn gram_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let g = self.functions[i].inner(&self.functions[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// A trial vector defined by coefficients rather than raw samples, so that
/// refined-grid evaluations re-synthesize instead of interpolating.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum TrialFunction {
    /// The normalized fiducial f₀ = α^{-1/2} η_α.
    Fiducial,
    /// Unit-normalized Laguerre combination Σ c_j φ_j / ‖c‖.
    Laguerre(Vec<(f64, f64)>),
    /// Unit-normalized maximizer family member ∝ k^α e^{-Bk}.
    Maximizer { b_re: f64, b_im: f64 },
}

impl TrialFunction {
    pub fn laguerre(coeffs: &[Complex64]) -> Self {
        TrialFunction::Laguerre(coeffs.iter().map(|c| (c.re, c.im)).collect())
    }

    /// Sample on a grid at unit L² norm.
    pub fn synthesize(&self, alpha: f64, grid: &KGrid) -> Result<SampledFunction> {
        match self {
            TrialFunction::Fiducial => {
                Ok(crate::affine::FiducialSpec::new(alpha)?.sample_normalized(grid))
            }
            TrialFunction::Laguerre(raw) => {
                if raw.is_empty() {
                    return Err(Error::InvalidParameter("empty coefficient vector".into()));
                }
                let coeffs: Vec<Complex64> =
                    raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::InvalidParameter("zero coefficient vector".into()));
                }
                let spec = BasisSpec::new(alpha, coeffs.len())?;
                let basis = LaguerreBasis::build(spec, grid);
                let scaled: Vec<Complex64> = coeffs.iter().map(|c| c / norm).collect();
                Ok(basis.synthesize(&scaled))
            }
            TrialFunction::Maximizer { b_re, b_im } => {
                crate::closed_forms::maximizer_family_unit(
                    alpha,
                    Complex64::new(*b_re, *b_im),
                    grid,
                )
            }
        }
    }
}

/// Draw a random unit coefficient vector (complex standard normal entries).
pub fn random_unit_coeffs<R: rand::Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    // Box-Muller from uniform draws; avoids an extra distribution dependency.
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            Complex64::new(
                r * (2.0 * std::f64::consts::PI * u2).cos(),
                r * (2.0 * std::f64::consts::PI * u2).sin(),
            )
        })
        .collect();
    let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    v
}
