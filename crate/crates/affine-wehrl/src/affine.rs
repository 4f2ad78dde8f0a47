//! The ax+b group, its left Haar weight, its unitary representation on
//! sampled L²(ℝ₊) functions, and the fiducial family η_α(k) = C(α) k^α e^{-k}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::KGrid;
use crate::special::{ln_gamma, pairwise_sum_by};

/// A group element (a, b) with a > 0, acting on the line as x ↦ ax + b.
/// Composition: (a,b)·(a',b') = (aa', ab'+b); identity exactly (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AffineElement {
    a: f64,
    b: f64,
}

impl AffineElement {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "affine element requires finite a > 0, got ({a}, {b})"
            )));
        }
        Ok(AffineElement { a, b })
    }

    pub const fn identity() -> Self {
        AffineElement { a: 1.0, b: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    /// (a,b)·(a',b') = (aa', ab'+b).
    pub fn compose(&self, other: &AffineElement) -> AffineElement {
        AffineElement { a: self.a * other.a, b: self.a * other.b + self.b }
    }

    /// (a,b)⁻¹ = (1/a, -b/a).
    pub fn inverse(&self) -> AffineElement {
        AffineElement { a: 1.0 / self.a, b: -self.b / self.a }
    }

    /// Density a⁻² of the left Haar measure with respect to da db.
    pub fn haar_weight(&self) -> f64 {
        1.0 / (self.a * self.a)
    }
}

impl std::fmt::Display for AffineElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// ln C(α) with C(α) = 2^α Γ(2α)^{-1/2}, evaluated in log space so large α
/// cannot overflow Γ.
pub(crate) fn ln_normalization(alpha: f64) -> f64 {
    alpha * std::f64::consts::LN_2 - 0.5 * ln_gamma(2.0 * alpha)
}

/// The fiducial (coherent-state) family parameter α > 0.
///
/// η_α(k) = C(α) k^α e^{-k} is normalized so that ∫ |η_α|²/k dk = 1, which
/// makes ‖η_α‖² = α rather than 1 (the group is not unimodular).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiducialSpec {
    alpha: f64,
}

impl FiducialSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        Ok(FiducialSpec { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Sample η_α on a grid.
    pub fn sample(&self, grid: &KGrid) -> SampledFunction {
        let ln_c = ln_normalization(self.alpha);
        let values = grid
            .nodes()
            .iter()
            .map(|&k| Complex64::new((ln_c + self.alpha * k.ln() - k).exp(), 0.0))
            .collect();
        SampledFunction::new_unchecked(grid.clone(), values)
    }

    /// Sample the L²-normalized fiducial f₀ = α^{-1/2} η_α.
    pub fn sample_normalized(&self, grid: &KGrid) -> SampledFunction {
        let mut f = self.sample(grid);
        let s = 1.0 / self.alpha.sqrt();
        for v in &mut f.values {
            *v *= s;
        }
        f
    }
}

/// Sample η_α on `grid` (free-function form of [`FiducialSpec::sample`]).
pub fn fiducial(spec: &FiducialSpec, grid: &KGrid) -> SampledFunction {
    spec.sample(grid)
}

/// A complex-valued function on a positive k-grid with quadrature weights.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: KGrid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: KGrid, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} nodes but {} values supplied",
                grid.len(),
                values.len()
            )));
        }
        let f = SampledFunction { grid, values };
        if !f.norm_sq().is_finite() {
            return Err(Error::InvalidParameter("non-finite norm".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(grid: KGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        SampledFunction { grid, values }
    }

    pub fn grid(&self) -> &KGrid {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// ‖f‖² = Σ wᵢ |fᵢ|².
    pub fn norm_sq(&self) -> f64 {
        pairwise_sum_by(self.values.len(), &|i| {
            self.grid.weights()[i] * self.values[i].norm_sqr()
        })
    }

    /// ⟨f, g⟩ = Σ wᵢ conj(fᵢ) gᵢ (conjugate-linear in self).
    pub fn inner(&self, other: &SampledFunction) -> Complex64 {
        assert_eq!(self.grid.len(), other.grid.len(), "grid mismatch in inner product");
        let re = pairwise_sum_by(self.values.len(), &|i| {
            self.grid.weights()[i] * (self.values[i].conj() * other.values[i]).re
        });
        let im = pairwise_sum_by(self.values.len(), &|i| {
            self.grid.weights()[i] * (self.values[i].conj() * other.values[i]).im
        });
        Complex64::new(re, im)
    }

    pub fn scaled(&self, c: Complex64) -> SampledFunction {
        SampledFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn normalized(&self) -> SampledFunction {
        self.scaled(Complex64::new(1.0 / self.norm_sq().sqrt(), 0.0))
    }

    pub fn add(&self, other: &SampledFunction) -> SampledFunction {
        assert_eq!(self.values.len(), other.values.len());
        SampledFunction {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Cubic (4-point Lagrange) interpolation on the log-k axis.
    /// Returns 0 outside the grid range.
    pub fn interpolate(&self, k: f64) -> Complex64 {
        let t = k.ln();
        let ts = self.grid.log_nodes();
        let n = ts.len();
        if t < ts[0] || t > ts[n - 1] {
            return Complex64::new(0.0, 0.0);
        }
        // first node >= t
        let j = ts.partition_point(|&x| x < t);
        if j < n && (ts[j] - t).abs() < 1e-14 {
            return self.values[j];
        }
        let lo = j.saturating_sub(2).min(n - 4);
        let mut out = Complex64::new(0.0, 0.0);
        for p in lo..lo + 4 {
            let mut l = 1.0;
            for q in lo..lo + 4 {
                if q != p {
                    l *= (t - ts[q]) / (ts[p] - ts[q]);
                }
            }
            out += l * self.values[p];
        }
        out
    }

    /// Quadrature mass of |f|² restricted to nodes in [k_lo, k_hi].
    fn band_mass(&self, k_lo: f64, k_hi: f64) -> f64 {
        pairwise_sum_by(self.values.len(), &|i| {
            let k = self.grid.nodes()[i];
            if k >= k_lo && k <= k_hi {
                self.grid.weights()[i] * self.values[i].norm_sqr()
            } else {
                0.0
            }
        })
    }
}

/// Apply the unitary representation [U(a,b) f](k) = e^{-2πibk} a^{1/2} f(ak),
/// resampling onto f's grid by cubic interpolation on the log-k axis.
///
/// Dilation shifts support; samples requested outside the grid are treated as
/// zero provided the dropped tail mass is below 1e-10 of ‖f‖² (estimated from
/// the quadrature mass of f in the boundary band that maps out of range),
/// otherwise an accuracy error is raised.
pub fn apply_rep(g: &AffineElement, f: &SampledFunction) -> Result<SampledFunction> {
    let a = g.a();
    let b = g.b();
    let grid = f.grid();
    let k_min = grid.nodes()[0];
    let k_max = grid.nodes()[grid.len() - 1];
    if a != 1.0 {
        let norm_sq = f.norm_sq();
        let dropped = if a > 1.0 {
            // needs f on (kMax, a·kMax]; proxy: mass of f in [kMax/a, kMax]
            f.band_mass(k_max / a, k_max)
        } else {
            f.band_mass(k_min, k_min / a)
        };
        if dropped > 1e-10 * norm_sq {
            return Err(Error::Accuracy(format!(
                "dilation a = {a} drops tail mass {:.3e} of ‖f‖² (policy 1e-10)",
                dropped / norm_sq
            )));
        }
    }
    let sqrt_a = a.sqrt();
    let two_pi_b = 2.0 * std::f64::consts::PI * b;
    let values = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let fv = if a == 1.0 { f.values[i] } else { f.interpolate(a * k) };
            let phase = Complex64::new(0.0, -two_pi_b * k).exp();
            phase * sqrt_a * fv
        })
        .collect();
    Ok(SampledFunction::new_unchecked(grid.clone(), values))
}
