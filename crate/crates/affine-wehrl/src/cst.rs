//! The coherent-state transform h_f(a,b) = ⟨U(a,b)η_α, f⟩ and its Husimi
//! field |h_f|² on a phase-space lattice.
//!
//! In quadrature form,
//!   h_f(a,b) = C(α) a^{α+1/2} Σᵢ wᵢ e^{-kᵢa + 2πibkᵢ} kᵢ^α f(kᵢ),
//! so for fixed a the b-row is a Fourier sum over the k-nodes. Rows are
//! evaluated through the gridding-FFT path in [`crate::fourier`]
//! (O(nB log nB) per row); a direct-summation path over the same nodes and
//! weights is retained for cross-validation.

use num_complex::Complex64;

use crate::affine::{ln_normalization, AffineElement, SampledFunction};
use crate::error::{Error, Result};
use crate::fourier::{direct_uniform_sum, UniformFourierEval};
use crate::grids::PhaseGrid;

/// |h_f(a,b)|² sampled on an (a,b) lattice with left-Haar cell weights.
///
/// The field stores |h|², not h: every functional downstream depends on the
/// modulus squared alone. Phases are available pointwise via `transform_at`.
#[derive(Debug, Clone)]
pub struct HusimiField {
    alpha: f64,
    grid: PhaseGrid,
    /// Row-major: values[i * n_b + j] at (a_i, b_j).
    values: Vec<f64>,
}

impl HusimiField {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_b() + j]
    }
    pub fn haar_weight(&self, i: usize, _j: usize) -> f64 {
        self.grid.cell_haar(i)
    }

    /// Haar mass Σ values·weights (≈ ‖f‖² by the isometry).
    pub fn mass(&self) -> f64 {
        let n_b = self.grid.n_b();
        crate::special::pairwise_sum_by(self.values.len(), &|idx| {
            self.values[idx] * self.grid.cell_haar(idx / n_b)
        })
    }

    /// Largest lattice value and its location.
    pub fn max_cell(&self) -> (f64, usize, usize) {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        let n_b = self.grid.n_b();
        for (idx, &v) in self.values.iter().enumerate() {
            if v > best.0 {
                best = (v, idx / n_b, idx % n_b);
            }
        }
        best
    }

    /// CSV dump with columns `a,b,husimi,haarWeight`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "a,b,husimi,haarWeight")?;
        for i in 0..self.grid.n_a() {
            let a = self.grid.a(i);
            let cw = self.grid.cell_haar(i);
            for j in 0..self.grid.n_b() {
                writeln!(w, "{:.12e},{:.12e},{:.12e},{:.12e}", a, self.grid.b(j), self.value(i, j), cw)?;
            }
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(())
}

/// h_f(a, b) at a single group point by direct quadrature.
///
/// Fails if the weighted integrand has not decayed at the ends of the k-grid
/// (the grid cannot resolve the requested a) or if |b| exceeds the grid's
/// oscillation capacity.
pub fn transform_at(f: &SampledFunction, alpha: f64, g: &AffineElement) -> Result<Complex64> {
    check_alpha(alpha)?;
    let grid = f.grid();
    if g.b().abs() > grid.osc_capacity() {
        return Err(Error::Accuracy(format!(
            "|b| = {} beyond the k-grid oscillation capacity {:.3}",
            g.b().abs(),
            grid.osc_capacity()
        )));
    }
    let a = g.a();
    let two_pi_b = 2.0 * std::f64::consts::PI * g.b();
    let pref = (ln_normalization(alpha) + (alpha + 0.5) * a.ln()).exp();
    let n = grid.len();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut max_mag = 0.0f64;
    let mut first_mag = 0.0;
    let mut last_mag = 0.0;
    for i in 0..n {
        let k = grid.nodes()[i];
        let w = grid.weights()[i];
        let amp = w * (alpha * k.ln() - k * a).exp();
        let term = amp * f.values()[i] * Complex64::new(0.0, two_pi_b * k).exp();
        let mag = amp * f.values()[i].norm();
        max_mag = max_mag.max(mag);
        if i == 0 {
            first_mag = mag;
        }
        if i == n - 1 {
            last_mag = mag;
        }
        sum += term;
    }
    if max_mag > 0.0 && (first_mag > 1e-8 * max_mag || last_mag > 1e-8 * max_mag) {
        return Err(Error::Accuracy(format!(
            "integrand not resolved by the k-grid at a = {a} (end/max = {:.2e}, {:.2e})",
            first_mag / max_mag,
            last_mag / max_mag
        )));
    }
    Ok(pref * sum)
}

fn row_sources(f: &SampledFunction, alpha: f64, a: f64) -> Vec<Complex64> {
    let grid = f.grid();
    let pref = (ln_normalization(alpha) + (alpha + 0.5) * a.ln()).exp();
    grid.nodes()
        .iter()
        .zip(grid.weights())
        .zip(f.values())
        .map(|((&k, &w), &fv)| fv * (pref * w * (alpha * k.ln() - k * a).exp()))
        .collect()
}

fn check_window(f: &SampledFunction, phase: &PhaseGrid) -> Result<()> {
    let cap = f.grid().osc_capacity();
    if phase.spec().b_max > cap {
        return Err(Error::Window(format!(
            "phase window bMax = {} exceeds the k-grid oscillation capacity {:.3}",
            phase.spec().b_max,
            cap
        )));
    }
    Ok(())
}

/// Complex transform values h_f on the full lattice, row-major.
/// This is the shared core of the fast field path; the optimizer uses it to
/// cache per-basis-element fields.
pub fn transform_rows(f: &SampledFunction, alpha: f64, phase: &PhaseGrid) -> Result<Vec<Complex64>> {
    check_alpha(alpha)?;
    check_window(f, phase)?;
    let eval = UniformFourierEval::new(
        f.grid().nodes(),
        phase.n_b(),
        phase.b_step(),
        phase.b_offset(),
    );
    let mut rows = Vec::with_capacity(phase.n_a() * phase.n_b());
    for i in 0..phase.n_a() {
        let sources = row_sources(f, alpha, phase.a(i));
        rows.extend_from_slice(&eval.evaluate(&sources));
    }
    Ok(rows)
}

/// |h_f|² on the full lattice via the fast Fourier row path.
pub fn transform_field(f: &SampledFunction, alpha: f64, phase: &PhaseGrid) -> Result<HusimiField> {
    let rows = transform_rows(f, alpha, phase)?;
    Ok(HusimiField {
        alpha,
        grid: phase.clone(),
        values: rows.iter().map(|h| h.norm_sqr()).collect(),
    })
}

/// |h_f|² by direct summation over every (row, node) pair; the
/// cross-validation oracle for `transform_field`.
pub fn transform_field_direct(
    f: &SampledFunction,
    alpha: f64,
    phase: &PhaseGrid,
) -> Result<HusimiField> {
    check_alpha(alpha)?;
    check_window(f, phase)?;
    let mut values = Vec::with_capacity(phase.n_a() * phase.n_b());
    for i in 0..phase.n_a() {
        let sources = row_sources(f, alpha, phase.a(i));
        let row = direct_uniform_sum(
            f.grid().nodes(),
            &sources,
            phase.n_b(),
            phase.b_step(),
            phase.b_offset(),
        );
        values.extend(row.iter().map(|h| h.norm_sqr()));
    }
    Ok(HusimiField { alpha, grid: phase.clone(), values })
}

/// Local off-lattice maximization of |h_f(a,b)|² by compass search on
/// (ln a, b), seeded at `start`. Returns (|h|², argmax).
pub fn polish_peak(
    f: &SampledFunction,
    alpha: f64,
    start: &AffineElement,
    step_ln_a: f64,
    step_b: f64,
) -> Result<(f64, AffineElement)> {
    let eval = |t: f64, b: f64| -> Result<f64> {
        let g = AffineElement::new(t.exp(), b)?;
        Ok(transform_at(f, alpha, &g)?.norm_sqr())
    };
    let mut t = start.a().ln();
    let mut b = start.b();
    let mut best = eval(t, b)?;
    let mut dt = step_ln_a;
    let mut db = step_b;
    for _ in 0..200 {
        if dt.max(db) < 1e-10 {
            break;
        }
        let mut moved = false;
        for (nt, nb) in [(t + dt, b), (t - dt, b), (t, b + db), (t, b - db)] {
            if let Ok(v) = eval(nt, nb) {
                if v > best {
                    best = v;
                    t = nt;
                    b = nb;
                    moved = true;
                }
            }
        }
        if !moved {
            dt *= 0.5;
            db *= 0.5;
        }
    }
    Ok((best, AffineElement::new(t.exp(), b)?))
}
