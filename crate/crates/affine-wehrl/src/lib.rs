//! Coherent-state analysis on the ax+b group.
//!
//! The affine group G = ℝ₊×ℝ acts on L²(ℝ₊) by
//! [U(a,b)f](k) = e^{-2πibk} a^{1/2} f(ak); fixing the fiducial vector
//! η_α(k) = C(α) k^α e^{-k} gives the coherent-state transform
//! h_f(a,b) = ⟨U(a,b)η_α, f⟩ and the Husimi density |h_f|², a probability
//! density with respect to the left Haar measure a⁻²da db when ‖f‖ = 1.
//!
//! This crate computes the transform on phase-space windows, the Rényi
//! functionals ∫|h_f|^{2s} a⁻²da db and the Wehrl entropy, verifies the
//! closed-form identities behind the conjectured sharp constant
//! 2α^s/((2α+1)s-1), searches numerically for violations at non-integer s,
//! and mirrors the α = 1/2 theory into the Bergman space of the upper
//! half-plane.
//!
//! ## Examples (start here)
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example closed_form_identities
//! cargo run --release --example renyi_scan
//! cargo run --release --example wehrl_entropy
//! cargo run --release --example husimi_field
//! cargo run --release --example maximizer_search
//! cargo run --release --example noninteger_probe
//! cargo run --release --example bergman_ratio
//! ```
//!
//! A thin CLI (`affine-wehrl verify|search|bergman|field`) wraps the same
//! entry points for scripted runs with JSON/CSV output; see the crate README.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to share across threads without
//! synchronization.

pub mod affine;
pub mod basis;
pub mod bergman;
pub mod cli;
pub mod closed_forms;
pub mod cst;
pub mod error;
pub mod fourier;
pub mod functionals;
pub mod grids;
pub mod optimizer;
pub mod special;

pub use affine::{apply_rep, fiducial, AffineElement, FiducialSpec, SampledFunction};
pub use error::{Error, Result};
pub use grids::{build_k_grid, KGrid, KGridSpec, PhaseGrid, PhaseGridSpec, Scheme};
