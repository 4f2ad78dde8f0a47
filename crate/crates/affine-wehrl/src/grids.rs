//! Quadrature grids for the half-line (dk), and for the group window with
//! left-Haar weights (a⁻²da db), plus the two-level refinement used for
//! error estimates.
//!
//! The momentum grid has to serve two masters at once:
//! - gamma-type integrals k^p e^{-qk} with fractional p, accurate to ~1e-12,
//! - oscillatory rows ∫ g(k) e^{2πibk} dk for |b| up to the phase window.
//!
//! A log-uniform trapezoid rule handles the first class but aliases the
//! second as soon as 2π|b|·Δk exceeds ~1 anywhere, so the default scheme is
//! composite Gauss-Legendre: panels graded geometrically near k = 0 (the k^α
//! endpoint behavior) and capped in width so the phase 2π b k advances at
//! most `PHASE_BUDGET_PER_POINT · q` radians per panel for the largest |b|
//! the grid promises to resolve. Grids refuse (via `osc_capacity`) to be used
//! beyond that promise instead of silently returning junk.

use crate::error::{Error, Result};
use crate::special::pairwise_sum_by;

/// Node-placement scheme for the momentum grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Uniform in ln k, trapezoid weights. Spectrally accurate for smooth
    /// decaying integrands, unusable for strongly oscillatory ones.
    LogUniform,
    /// Composite Gauss-Legendre with `panel_points` nodes per panel and
    /// panel widths capped so oscillations e^{iφ(k)} with |φ'(k)| ≤ `max_freq`
    /// are integrated to near machine precision.
    GaussLegendreComposite { panel_points: usize, max_freq: f64 },
}

/// Specification of a quadrature grid for ∫₀^∞ · dk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGridSpec {
    /// Target minimum number of nodes.
    pub n: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub scheme: Scheme,
}

/// Log-panel growth: panels below the oscillation cap span a quarter
/// e-folding (kept fine so that cubic interpolation on the node set stays
/// below 1e-8 absolute for the dilation resampling).
const LOG_PANEL_FACTOR: f64 = 0.25;
/// Phase budget per panel, in units of panel points (radians = budget · q).
const PHASE_BUDGET_PER_POINT: f64 = 1.4;
/// Safety margin multiplying the requested oscillation support.
const OSC_MARGIN: f64 = 1.05;

impl KGridSpec {
    /// Log-uniform grid spec.
    pub fn log_uniform(n: usize, k_min: f64, k_max: f64) -> Self {
        KGridSpec { n, k_min, k_max, scheme: Scheme::LogUniform }
    }

    /// Gauss-Legendre composite spec resolving e^{2πibk} for |b| ≤ `b_support`.
    pub fn gauss_legendre(n: usize, k_min: f64, k_max: f64, b_support: f64) -> Self {
        KGridSpec {
            n,
            k_min,
            k_max,
            scheme: Scheme::GaussLegendreComposite {
                panel_points: 24,
                max_freq: 2.0 * std::f64::consts::PI * b_support * OSC_MARGIN,
            },
        }
    }

    /// Default transform grid for a phase window extending to `b_max`.
    pub fn for_b_window(b_max: f64) -> Self {
        Self::gauss_legendre(512, 1e-12, 40.0, b_max)
    }

    /// Doubled resolution (and enlarged window) for Richardson-style error
    /// estimates: n → 2n, kMin/4, kMax·1.5; oscillation support doubles to
    /// track the doubled phase window.
    pub fn refined(&self) -> Self {
        let scheme = match self.scheme {
            Scheme::LogUniform => Scheme::LogUniform,
            Scheme::GaussLegendreComposite { panel_points, max_freq } => {
                Scheme::GaussLegendreComposite { panel_points, max_freq: 2.0 * max_freq }
            }
        };
        KGridSpec {
            n: self.n * 2,
            k_min: self.k_min / 4.0,
            k_max: self.k_max * 1.5,
            scheme,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 16 {
            return Err(Error::InvalidParameter(format!("k-grid n = {} < 16", self.n)));
        }
        if !(self.k_min > 0.0) || self.k_min >= self.k_max {
            return Err(Error::InvalidParameter(format!(
                "k-grid range [{}, {}] invalid",
                self.k_min, self.k_max
            )));
        }
        if self.k_min > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "k_min = {} too large for the k^α endpoint (need ≤ 1e-6)",
                self.k_min
            )));
        }
        // Tail policy: the e^{-k} class (up to k^4 growth) must have
        // < 1e-12 of its mass beyond kMax. Q(5, x) has the exact finite form
        // e^{-x} Σ_{j≤4} x^j/j!.
        let x = self.k_max;
        let tail = (-x).exp()
            * (1.0 + x + x * x / 2.0 + x * x * x / 6.0 + x * x * x * x / 24.0);
        if tail >= 1e-12 {
            return Err(Error::Accuracy(format!(
                "k_max = {} leaves e^-k tail {:.2e} ≥ 1e-12",
                self.k_max, tail
            )));
        }
        Ok(())
    }
}

/// A realized quadrature grid: strictly increasing positive nodes with
/// positive weights approximating ∫₀^∞ · dk for sub-exponentially decaying
/// integrands.
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid {
    spec: KGridSpec,
    nodes: Vec<f64>,
    log_nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl KGrid {
    pub fn spec(&self) -> &KGridSpec {
        &self.spec
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn log_nodes(&self) -> &[f64] {
        &self.log_nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature of a real integrand.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        pairwise_sum_by(self.len(), &|i| self.weights[i] * f(self.nodes[i]))
    }

    /// Largest |b| for which Σ wᵢ g(kᵢ) e^{2πibkᵢ} is a trustworthy
    /// discretization of the oscillatory integral.
    pub fn osc_capacity(&self) -> f64 {
        match self.spec.scheme {
            Scheme::GaussLegendreComposite { max_freq, .. } => {
                max_freq / (2.0 * std::f64::consts::PI * OSC_MARGIN)
            }
            Scheme::LogUniform => {
                // phase step ≤ 0.5 rad at the widest gap
                let gap = self
                    .nodes
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(0.0f64, f64::max);
                0.5 / (2.0 * std::f64::consts::PI * gap)
            }
        }
    }
}

/// Build a grid from its spec.
pub fn build_k_grid(spec: &KGridSpec) -> Result<KGrid> {
    spec.validate()?;
    let (nodes, weights) = match spec.scheme {
        Scheme::LogUniform => log_uniform_rule(spec.n, spec.k_min, spec.k_max),
        Scheme::GaussLegendreComposite { panel_points, max_freq } => {
            gl_composite_rule(spec.n, spec.k_min, spec.k_max, panel_points, max_freq)
        }
    };
    debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(weights.iter().all(|&w| w > 0.0));
    let log_nodes = nodes.iter().map(|&k| k.ln()).collect();
    Ok(KGrid { spec: *spec, nodes, log_nodes, weights })
}

fn log_uniform_rule(n: usize, k_min: f64, k_max: f64) -> (Vec<f64>, Vec<f64>) {
    let t0 = k_min.ln();
    let t1 = k_max.ln();
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let k = (t0 + i as f64 * dt).exp();
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        nodes.push(k);
        weights.push(w * k * dt);
    }
    (nodes, weights)
}

fn gl_composite_rule(
    n_target: usize,
    k_min: f64,
    k_max: f64,
    q: usize,
    max_freq: f64,
) -> (Vec<f64>, Vec<f64>) {
    let build = |width_mult: f64| -> Vec<(f64, f64)> {
        let dk_cap = if max_freq > 0.0 {
            PHASE_BUDGET_PER_POINT * q as f64 / max_freq * width_mult
        } else {
            f64::INFINITY
        };
        let log_growth = (LOG_PANEL_FACTOR * width_mult).exp_m1();
        let mut panels = Vec::new();
        let mut k = k_min;
        while k < k_max {
            let w = (k * log_growth).min(dk_cap).min(k_max - k);
            panels.push((k, k + w));
            k += w;
        }
        panels
    };
    let mut panels = build(1.0);
    if panels.len() * q < n_target {
        let mult = (panels.len() * q) as f64 / n_target as f64;
        panels = build(mult);
    }
    let (gx, gw) = gauss_legendre_rule(q);
    let mut nodes = Vec::with_capacity(panels.len() * q);
    let mut weights = Vec::with_capacity(panels.len() * q);
    for (a, b) in panels {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for i in 0..q {
            nodes.push(c + h * gx[i]);
            weights.push(h * gw[i]);
        }
    }
    (nodes, weights)
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

// ---------------------------------------------------------------------------
// Phase-space (group) grid
// ---------------------------------------------------------------------------

/// Window and resolution of the (a, b) lattice. The a-direction is
/// log-uniform (the Haar density a⁻² concentrates mass at small a), the
/// b-direction uniform; both use midpoint nodes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhaseGridSpec {
    pub n_a: usize,
    pub n_b: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub b_max: f64,
}

impl Default for PhaseGridSpec {
    fn default() -> Self {
        // Δb = 1/64: b-sums of products of transform rows alias the product
        // spectrum at multiples of 1/Δb; the spectrum envelope e^{-ν}ν^p
        // (p grows with the Laguerre degree of f) needs ν ≥ 64 before the
        // alias drops below ~1e-6 for trial degrees ≤ 8
        PhaseGridSpec { n_a: 96, n_b: 8192, a_min: 1e-6, a_max: 1e3, b_max: 64.0 }
    }
}

impl PhaseGridSpec {
    /// Doubled resolution and enlarged window for error estimation.
    /// nB quadruples so that Δb halves despite the doubled bMax — the
    /// refinement must move the b-aliasing error, not carry it along.
    pub fn refined(&self) -> Self {
        PhaseGridSpec {
            n_a: self.n_a * 2,
            n_b: self.n_b * 4,
            a_min: self.a_min / 2.0,
            a_max: self.a_max * 2.0,
            b_max: self.b_max * 2.0,
        }
    }

    /// Haar volume ∫∫ a⁻² da db of the window (finite by construction).
    pub fn window_haar_mass(&self) -> f64 {
        (1.0 / self.a_min - 1.0 / self.a_max) * 2.0 * self.b_max
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_a < 8 || self.n_b < 8 {
            return Err(Error::InvalidParameter(format!(
                "phase grid {}x{} too coarse",
                self.n_a, self.n_b
            )));
        }
        if !(self.a_min > 0.0) || self.a_min >= self.a_max || !(self.b_max > 0.0) {
            return Err(Error::InvalidParameter(
                "phase window requires 0 < aMin < aMax and bMax > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Realized (a, b) lattice with per-cell left-Haar weights a⁻²ΔaΔb.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    spec: PhaseGridSpec,
    a_nodes: Vec<f64>,
    /// a⁻² Δa for each a row, with Δa = a·Δt on the log-midpoint grid.
    a_haar: Vec<f64>,
    b_step: f64,
    b_offset: f64,
}

impl PhaseGrid {
    pub fn new(spec: PhaseGridSpec) -> Result<Self> {
        spec.validate()?;
        let dt = (spec.a_max / spec.a_min).ln() / spec.n_a as f64;
        let mut a_nodes = Vec::with_capacity(spec.n_a);
        let mut a_haar = Vec::with_capacity(spec.n_a);
        for i in 0..spec.n_a {
            let a = (spec.a_min.ln() + (i as f64 + 0.5) * dt).exp();
            a_nodes.push(a);
            a_haar.push(dt / a); // a⁻² · (a Δt)
        }
        let b_step = 2.0 * spec.b_max / spec.n_b as f64;
        let b_offset = -spec.b_max + 0.5 * b_step;
        Ok(PhaseGrid { spec, a_nodes, a_haar, b_step, b_offset })
    }

    pub fn spec(&self) -> &PhaseGridSpec {
        &self.spec
    }
    pub fn n_a(&self) -> usize {
        self.spec.n_a
    }
    pub fn n_b(&self) -> usize {
        self.spec.n_b
    }
    pub fn a(&self, i: usize) -> f64 {
        self.a_nodes[i]
    }
    pub fn b(&self, j: usize) -> f64 {
        self.b_offset + j as f64 * self.b_step
    }
    pub fn b_step(&self) -> f64 {
        self.b_step
    }
    pub fn b_offset(&self) -> f64 {
        self.b_offset
    }
    /// Left-Haar weight a⁻²ΔaΔb of cell (i, j).
    pub fn cell_haar(&self, i: usize) -> f64 {
        self.a_haar[i] * self.b_step
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gamma, reg_lower_gamma};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn default_gl() -> KGrid {
        build_k_grid(&KGridSpec::for_b_window(64.0)).unwrap()
    }

    #[test]
    fn gamma_class_integrals_both_schemes() {
        let grids = [
            build_k_grid(&KGridSpec::log_uniform(192, 1e-9, 40.0)).unwrap(),
            default_gl(),
        ];
        for grid in &grids {
            for &p in &[0.5, 1.0, 2.0, 4.0] {
                for &q in &[1.0, 2.0, 4.0] {
                    let got = grid.integrate(|k| k.powf(p) * (-q * k).exp());
                    let exact = gamma(p + 1.0) / q.powf(p + 1.0);
                    assert_relative_eq!(got, exact, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn lower_incomplete_gamma_exactness() {
        // ∫₀^{kMax} k^α e^{-k} dk against the incomplete-gamma oracle,
        // 1e-10 relative across α ∈ [0.25, 4].
        let grid = default_gl();
        let k_max = grid.spec().k_max;
        for &alpha in &[0.25, 0.5, 1.0, 2.5, 4.0] {
            let got = grid.integrate(|k| k.powf(alpha) * (-k).exp());
            let exact = reg_lower_gamma(alpha + 1.0, k_max) * gamma(alpha + 1.0);
            assert_relative_eq!(got, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn simple_exponential_moments() {
        let grid = default_gl();
        assert_relative_eq!(grid.integrate(|k| (-k).exp()), 1.0, max_relative = 1e-10);
        assert_relative_eq!(
            grid.integrate(|k| k * (-2.0 * k).exp()),
            0.25,
            max_relative = 1e-10
        );
        // α = 1/2: ∫ k^{2α} e^{-2k} dk = Γ(2)/2² = 1/4 (incomplete-gamma oracle
        // confirms the full-line value to the same tolerance)
        let oracle = reg_lower_gamma(2.0, 2.0 * grid.spec().k_max) * gamma(2.0) / 4.0;
        assert_relative_eq!(grid.integrate(|k| k * (-2.0 * k).exp()), oracle, max_relative = 1e-10);
    }

    #[test]
    fn oscillatory_rows_match_closed_form() {
        // Σ w k e^{-2k} e^{2πibk} must reproduce Γ(2)(2-2πib)^{-2} up to
        // machine-level error across the full supported |b| range.
        let grid = default_gl();
        assert!(grid.osc_capacity() >= 64.0);
        for &b in &[0.0, 1.0, 17.3, 63.9] {
            let mut sum = Complex64::new(0.0, 0.0);
            for (&k, &w) in grid.nodes().iter().zip(grid.weights()) {
                sum += w * k * Complex64::new(-2.0 * k, 2.0 * std::f64::consts::PI * b * k).exp();
            }
            let denom = Complex64::new(2.0, -2.0 * std::f64::consts::PI * b);
            let exact = 1.0 / (denom * denom);
            assert!(
                (sum - exact).norm() < 1e-12,
                "b = {b}: got {sum}, want {exact}"
            );
        }
    }

    #[test]
    fn log_uniform_rejects_oscillation_it_cannot_carry() {
        let grid = build_k_grid(&KGridSpec::log_uniform(192, 1e-9, 40.0)).unwrap();
        assert!(grid.osc_capacity() < 1.0);
    }

    #[test]
    fn weights_positive_nodes_increasing() {
        for spec in [
            KGridSpec::log_uniform(64, 1e-9, 40.0),
            KGridSpec::for_b_window(16.0),
            KGridSpec::for_b_window(64.0).refined(),
        ] {
            let g = build_k_grid(&spec).unwrap();
            assert!(g.weights().iter().all(|&w| w > 0.0));
            assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(g.len() >= spec.n.min(10_000));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(build_k_grid(&KGridSpec::log_uniform(8, 1e-9, 40.0)).is_err());
        // kMax too small for the e^{-k} tail policy
        assert!(build_k_grid(&KGridSpec::log_uniform(64, 1e-9, 20.0)).is_err());
        assert!(build_k_grid(&KGridSpec::log_uniform(64, 1e-3, 40.0)).is_err());
    }

    #[test]
    fn refine_doubles_resolution() {
        let spec = KGridSpec::log_uniform(64, 1e-9, 40.0);
        assert_eq!(spec.refined().n, 128);
        let p = PhaseGridSpec::default();
        let r = p.refined();
        assert_eq!(r.n_a, 2 * p.n_a);
        assert_eq!(r.n_b, 4 * p.n_b); // Δb halves while bMax doubles
        assert!(r.b_max == 2.0 * p.b_max && r.a_min == p.a_min / 2.0);
    }

    #[test]
    fn haar_quadrature_of_product_test_function() {
        // Effective integrand a^{m-2} e^{-a} · 1_{|b|<bMax}: quadrature with
        // the cell Haar weights vs the (window-matched) incomplete-gamma value.
        let grid = PhaseGrid::new(PhaseGridSpec::default()).unwrap();
        let spec = grid.spec();
        for &m in &[2.0, 3.0] {
            let mut total = 0.0;
            for i in 0..grid.n_a() {
                let a: f64 = grid.a(i);
                let f = a.powf(m) * (-a).exp(); // g(a) with g·a⁻² = a^{m-2}e^{-a}
                total += f * grid.cell_haar(i) * grid.n_b() as f64;
            }
            let exact = 2.0 * spec.b_max
                * (reg_lower_gamma(m - 1.0, spec.a_max) - reg_lower_gamma(m - 1.0, spec.a_min))
                * gamma(m - 1.0);
            assert_relative_eq!(total, exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn window_haar_mass_reported() {
        let spec = PhaseGridSpec::default();
        let expect = (1.0 / spec.a_min - 1.0 / spec.a_max) * 2.0 * spec.b_max;
        assert_relative_eq!(spec.window_haar_mass(), expect, epsilon = 1e-9);
        assert!(spec.window_haar_mass().is_finite());
    }

    #[test]
    fn gauss_legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre_rule(24);
        // degree-2n-1 exactness spot check on x^46 over [-1,1]
        let got: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(46)).sum();
        assert_relative_eq!(got, 2.0 / 47.0, max_relative = 1e-12);
        let mass: f64 = w.iter().sum();
        assert_relative_eq!(mass, 2.0, max_relative = 1e-14);
    }
}
