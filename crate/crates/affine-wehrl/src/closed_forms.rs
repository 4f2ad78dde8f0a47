//! Exact analytic values: the fiducial normalization C(α), the conjectured
//! maximum of the Rényi functional, the minimal Wehrl entropy, the fiducial's
//! transform and Rényi integral in closed form, the simplex (Dirichlet)
//! integral, and the explicit Cauchy-Schwarz bound for integer s.
//!
//! All Γ/Beta evaluations run in log space; every quantity here is positive
//! so no sign tracking is needed. Two identities are deliberately computed by
//! different routes and compared in tests:
//!   integer_s_upper_bound(s, α) == conjectured_max(s, α)   (Γ-duplication)
//!   fiducial_renyi(s, α)        == conjectured_max(s, α)   (Beta reduction)

use num_complex::Complex64;

use crate::affine::{ln_normalization, AffineElement, SampledFunction};
use crate::error::{Error, Result};
use crate::grids::KGrid;
use crate::special::ln_gamma;

const LN_2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;

/// C(α) = 2^α Γ(2α)^{-1/2}, the constant making ∫|η_α|²/k dk = 1.
pub fn normalization_c(alpha: f64) -> f64 {
    assert!(alpha > 0.0);
    ln_normalization(alpha).exp()
}

/// Conjectured maximum 2α^s / ((2α+1)s - 1) of ∫|h_f|^{2s} a⁻²da db over
/// normalized f, for s ≥ 1.
pub fn conjectured_max(s: f64, alpha: f64) -> f64 {
    assert!(s >= 1.0 && alpha > 0.0);
    2.0 * alpha.powf(s) / ((2.0 * alpha + 1.0) * s - 1.0)
}

/// Minimal Wehrl entropy 1 + (2α)⁻¹ - ln α, the s-derivative of the
/// conjectured maximum at s = 1.
pub fn minimal_entropy(alpha: f64) -> f64 {
    assert!(alpha > 0.0);
    1.0 + 0.5 / alpha - alpha.ln()
}

/// Closed form of the transform of the normalized fiducial:
/// h_{f₀}(a,b) = C(α)² α^{-1/2} Γ(2α+1) a^{α+1/2} (1+a-2πib)^{-(2α+1)}.
///
/// The complex power uses the principal branch, which is safe because the
/// base has real part 1+a > 0 everywhere on the group.
pub fn fiducial_transform(alpha: f64, g: &AffineElement) -> Complex64 {
    assert!(alpha > 0.0);
    let ln_pref = 2.0 * ln_normalization(alpha) - 0.5 * alpha.ln()
        + ln_gamma(2.0 * alpha + 1.0)
        + (alpha + 0.5) * g.a().ln();
    let base = Complex64::new(1.0 + g.a(), -2.0 * PI * g.b());
    ln_pref.exp() * base.powf(-(2.0 * alpha + 1.0))
}

/// Exact Haar integral ∫ |h_{f₀}|^{2s} a⁻² da db via the Beta-function
/// reduction: with m = (2α+1)s,
///   4^m α^s √π Γ(m-1/2) B(m-1, m) / (2π Γ(m)),
/// which collapses to `conjectured_max` by the duplication formula.
pub fn fiducial_renyi(s: f64, alpha: f64) -> f64 {
    assert!(s >= 1.0 && alpha > 0.0);
    let m = (2.0 * alpha + 1.0) * s;
    let ln_val = m * (2.0 * LN_2) + s * alpha.ln() + 0.5 * PI.ln() - (2.0 * PI).ln()
        + ln_gamma(m - 0.5)
        + ln_gamma(m - 1.0)
        - ln_gamma(2.0 * m - 1.0);
    ln_val.exp()
}

/// Dirichlet integral over the (s-1)-simplex:
/// ∫ [u₁…u_{s-1}(1-u₁-…-u_{s-1})]^{2α} du = Γ(2α+1)^s / Γ(s(2α+1)).
/// s = 1 returns 1 (empty simplex).
pub fn dirichlet_integral(s: u32, alpha: f64) -> f64 {
    assert!(s >= 1 && alpha > 0.0);
    if s == 1 {
        return 1.0;
    }
    let m = (2.0 * alpha + 1.0) * s as f64;
    (s as f64 * ln_gamma(2.0 * alpha + 1.0) - ln_gamma(m)).exp()
}

/// The explicit upper bound from the b-integration / a-integration /
/// Cauchy-Schwarz chain at positive integer s:
///   2^{-s(2α+1)+1} C(α)^{2s} Γ(s(2α+1)-1) · dirichlet_integral(s, α).
/// Collapses to `conjectured_max(s, α)` via Γ-duplication; the two are kept
/// as independent computational routes.
pub fn integer_s_upper_bound(s: u32, alpha: f64) -> Result<f64> {
    if s < 1 {
        return Err(Error::InvalidParameter("s must be a positive integer".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    let sf = s as f64;
    let m = (2.0 * alpha + 1.0) * sf;
    let ln_bound = (1.0 - m) * LN_2
        + 2.0 * sf * ln_normalization(alpha)
        + ln_gamma(m - 1.0)
        + sf * ln_gamma(2.0 * alpha + 1.0)
        - ln_gamma(m);
    Ok(ln_bound.exp())
}

/// Sample the maximizer family f(k) = A k^α e^{-Bk} (A, B complex,
/// Re B > 0 for square integrability).
pub fn maximizer_family(
    alpha: f64,
    a_coef: Complex64,
    b_exp: Complex64,
    grid: &KGrid,
) -> Result<SampledFunction> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    if !(b_exp.re > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "maximizer family requires Re B > 0, got {b_exp}"
        )));
    }
    let values = grid
        .nodes()
        .iter()
        .map(|&k| a_coef * (alpha * k.ln()).exp() * (-b_exp * k).exp())
        .collect();
    SampledFunction::new(grid.clone(), values)
}

/// Maximizer family member rescaled to unit L² norm:
/// ‖A k^α e^{-Bk}‖² = |A|² Γ(2α+1)/(2 Re B)^{2α+1}, so A is chosen
/// analytically (positive real) to make the norm 1.
pub fn maximizer_family_unit(alpha: f64, b_exp: Complex64, grid: &KGrid) -> Result<SampledFunction> {
    if !(b_exp.re > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "maximizer family requires Re B > 0, got {b_exp}"
        )));
    }
    let ln_norm_sq = ln_gamma(2.0 * alpha + 1.0) - (2.0 * alpha + 1.0) * (2.0 * b_exp.re).ln();
    let a_coef = Complex64::new((-0.5 * ln_norm_sq).exp(), 0.0);
    maximizer_family(alpha, a_coef, b_exp, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::FiducialSpec;
    use crate::grids::{build_k_grid, gauss_legendre_rule, KGridSpec};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalization_values() {
        assert_relative_eq!(normalization_c(0.5), std::f64::consts::SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(normalization_c(1.0), 2.0, max_relative = 1e-14);
        // Γ(3) = 2 ⇒ C(3/2) = 2^{3/2}/√2 = 2
        assert_relative_eq!(normalization_c(1.5), 2.0, max_relative = 1e-13);
        // no overflow at large α (Γ(2α) alone would overflow near α ≈ 85)
        assert!(normalization_c(120.0).is_finite());
    }

    #[test]
    fn conjectured_max_values() {
        for &alpha in &[0.25, 0.5, 1.0, 2.0, 3.7] {
            assert_relative_eq!(conjectured_max(1.0, alpha), 1.0, max_relative = 1e-14);
        }
        assert_relative_eq!(conjectured_max(2.0, 0.5), 1.0 / 6.0, max_relative = 1e-14);
        assert_relative_eq!(conjectured_max(3.0, 1.0), 0.25, max_relative = 1e-14);
    }

    #[test]
    fn minimal_entropy_values() {
        assert_relative_eq!(minimal_entropy(1.0), 1.5, max_relative = 1e-14);
        assert_relative_eq!(minimal_entropy(0.5), 2.0 + LN_2, max_relative = 1e-14);
        // always above the -ln α lower bound
        for &alpha in &[0.1, 0.5, 1.0, 2.0, 10.0] {
            assert!(minimal_entropy(alpha) >= -alpha.ln());
        }
        // consistency with the s-derivative of the conjectured maximum
        let d = 1e-4;
        for &alpha in &[0.5, 1.0, 2.0] {
            let num = -(conjectured_max(1.0 + d, alpha) - conjectured_max(1.0, alpha)) / d;
            assert_relative_eq!(num, minimal_entropy(alpha), max_relative = 1e-3);
        }
    }

    #[test]
    fn fiducial_transform_values() {
        for &alpha in &[0.3, 0.5, 1.0, 2.4] {
            let h = fiducial_transform(alpha, &AffineElement::identity());
            assert_relative_eq!(h.norm_sqr(), alpha, max_relative = 1e-13);
        }
        let h = fiducial_transform(0.5, &AffineElement::new(2.0, 0.0).unwrap());
        assert_relative_eq!(h.norm_sqr(), 32.0 / 81.0, max_relative = 1e-13);
    }

    #[test]
    fn fiducial_renyi_values() {
        assert_relative_eq!(fiducial_renyi(2.0, 0.5), 1.0 / 6.0, max_relative = 1e-13);
        assert_relative_eq!(fiducial_renyi(1.0, 1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(fiducial_renyi(2.5, 1.0), 4.0 / 13.0, max_relative = 1e-13);
    }

    #[test]
    fn fiducial_renyi_equals_conjectured_max_on_grid() {
        // equality case holds for all real s ≥ 1, not just integers
        for &alpha in &[0.25, 0.5, 1.0, 2.0, 3.7] {
            let mut s = 1.0;
            while s <= 4.0 + 1e-9 {
                let lhs = fiducial_renyi(s, alpha);
                let rhs = conjectured_max(s, alpha);
                assert!(
                    ((lhs - rhs) / rhs).abs() < 1e-12,
                    "s={s}, alpha={alpha}: {lhs} vs {rhs}"
                );
                s += 0.25;
            }
        }
    }

    #[test]
    fn upper_bound_identity_with_conjectured_max() {
        for s in 1..=6u32 {
            for &alpha in &[0.25, 0.5, 1.0, 2.0, 3.7] {
                let lhs = integer_s_upper_bound(s, alpha).unwrap();
                let rhs = conjectured_max(s as f64, alpha);
                assert!(
                    ((lhs - rhs) / rhs).abs() < 1e-12,
                    "s={s}, alpha={alpha}: {lhs} vs {rhs}"
                );
            }
        }
        assert_relative_eq!(integer_s_upper_bound(2, 0.5).unwrap(), 1.0 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(integer_s_upper_bound(3, 1.0).unwrap(), 0.25, max_relative = 1e-12);
        assert_relative_eq!(integer_s_upper_bound(1, 0.8).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn dirichlet_against_quadrature_oracle() {
        // s = 2: 1-dimensional ∫₀¹ [u(1-u)]^{2α} du by Gauss-Legendre
        let (x, w) = gauss_legendre_rule(64);
        let quad_1d = |alpha: f64| -> f64 {
            x.iter()
                .zip(&w)
                .map(|(&xi, &wi)| {
                    let u = 0.5 * (xi + 1.0);
                    0.5 * wi * (u * (1.0 - u)).powf(2.0 * alpha)
                })
                .sum()
        };
        assert_relative_eq!(dirichlet_integral(2, 0.5), quad_1d(0.5), max_relative = 1e-9);
        assert_relative_eq!(dirichlet_integral(2, 0.5), 1.0 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(dirichlet_integral(2, 1.0), quad_1d(1.0), max_relative = 1e-9);
        assert_relative_eq!(dirichlet_integral(2, 1.0), 1.0 / 30.0, max_relative = 1e-12);

        // s = 3: nested 2-dimensional quadrature over the simplex u+v ≤ 1
        let quad_2d = |alpha: f64| -> f64 {
            let mut total = 0.0;
            for (&xi, &wi) in x.iter().zip(&w) {
                let u = 0.5 * (xi + 1.0);
                let wu = 0.5 * wi;
                // inner: v from 0 to 1-u
                let mut inner = 0.0;
                for (&xj, &wj) in x.iter().zip(&w) {
                    let v = 0.5 * (xj + 1.0) * (1.0 - u);
                    let wv = 0.5 * wj * (1.0 - u);
                    let t = u * v * (1.0 - u - v);
                    if t > 0.0 {
                        inner += wv * t.powf(2.0 * alpha);
                    }
                }
                total += wu * inner;
            }
            total
        };
        assert_relative_eq!(dirichlet_integral(3, 0.5), quad_2d(0.5), max_relative = 1e-9);
        assert_relative_eq!(dirichlet_integral(3, 0.5), 1.0 / 120.0, max_relative = 1e-12);
        assert_eq!(dirichlet_integral(1, 0.7), 1.0);
    }

    #[test]
    fn dirichlet_monte_carlo_oracle() {
        // s = 3, α = 1/2: Γ(2)³/Γ(6) = 1/120, Monte Carlo over the 2-simplex
        let mut rng = ChaCha8Rng::seed_from_u64(20240611);
        let n = 10_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let mut u: f64 = rng.gen();
            let mut v: f64 = rng.gen();
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            let t = u * v * (1.0 - u - v);
            let val = if t > 0.0 { t } else { 0.0 }; // integrand^{2α} with 2α = 1
            sum += val;
            sum_sq += val * val;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean) / n as f64;
        // area of the simplex is 1/2 ⇒ integral = mean · 1/2
        let estimate = 0.5 * mean;
        let sigma = 0.5 * var.sqrt();
        let exact = dirichlet_integral(3, 0.5);
        assert!(
            (estimate - exact).abs() < 3.0 * sigma,
            "MC {estimate} ± {sigma} vs {exact}"
        );
    }

    #[test]
    fn maximizer_family_membership() {
        let grid = build_k_grid(&KGridSpec::for_b_window(8.0)).unwrap();
        let alpha = 0.5;
        // A = α^{-1/2} C(α), B = 1 recovers the normalized fiducial
        let a0 = Complex64::new(normalization_c(alpha) / alpha.sqrt(), 0.0);
        let f = maximizer_family(alpha, a0, Complex64::new(1.0, 0.0), &grid).unwrap();
        let f0 = FiducialSpec::new(alpha).unwrap().sample_normalized(&grid);
        let dev = f
            .values()
            .iter()
            .zip(f0.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-13);
        assert!(maximizer_family(alpha, a0, Complex64::new(-0.1, 2.0), &grid).is_err());
        // unit-norm sampling really is unit norm
        let fu = maximizer_family_unit(alpha, Complex64::new(2.0, -1.0), &grid).unwrap();
        assert_relative_eq!(fu.norm_sq(), 1.0, max_relative = 1e-9);
    }
}
