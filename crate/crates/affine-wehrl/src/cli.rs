//! Run configuration and the command entry points behind the thin binary:
//! verify | search | bergman | field.
//!
//! Config format: flat key=value text (one per line, `#` comments), keys
//! matching the JSON field names; CLI flags override file values. Every
//! output record embeds the resolved config verbatim plus `schemaVersion`.
//! All numerics flow through JSON/CSV; exit codes are the only untyped
//! channel (0 ok, 1 invariant failure, 2 config error, 3 persistent
//! counterexample candidate).

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::affine::{apply_rep, AffineElement, FiducialSpec};
use crate::basis::{random_unit_coeffs, BasisSpec, LaguerreBasis, TrialFunction};
use crate::bergman::{
    l2_norm, paley_wiener, sharp_constant_probe, weighted_norm, BergmanFunction, HalfPlaneSpec,
    SharpConstantRecord,
};
use crate::closed_forms::{
    conjectured_max, dirichlet_integral, fiducial_renyi, integer_s_upper_bound, minimal_entropy,
};
use crate::cst::{transform_at, transform_field};
use crate::error::{Error, Result};
use crate::functionals::{
    renyi_derivative_at_one, renyi_report, renyi_value, sup_bound_polished, wehrl_entropy,
    RenyiReport,
};
use crate::grids::{build_k_grid, gauss_legendre_rule, KGridSpec, PhaseGrid, PhaseGridSpec};
use crate::optimizer::{probe_conjecture, ProbeOutcome, SearchSettings};
use crate::special::split_seed;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub s_values: Vec<f64>,
    /// k-grid target node count (the oscillation budget may demand more).
    pub n: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub b_max: f64,
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
    pub output_dir: String,
    pub emit_fields: bool,
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 0.5,
            s_values: vec![1.0, 1.5, 2.0, 3.0],
            n: 512,
            k_min: 1e-12,
            k_max: 40.0,
            n_a: 96,
            n_b: 8192,
            a_min: 1e-6,
            a_max: 1e3,
            b_max: 64.0,
            dim: 6,
            restarts: 8,
            seed: 42,
            output_dir: "results".into(),
            emit_fields: false,
            deterministic: false,
        }
    }
}

impl RunConfig {
    pub fn phase_spec(&self) -> PhaseGridSpec {
        PhaseGridSpec {
            n_a: self.n_a,
            n_b: self.n_b,
            a_min: self.a_min,
            a_max: self.a_max,
            b_max: self.b_max,
        }
    }

    pub fn k_spec(&self) -> KGridSpec {
        KGridSpec::gauss_legendre(self.n, self.k_min, self.k_max, self.b_max)
    }

    /// Parse a flat key=value config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{raw}`", lineno + 1))
            })?;
            cfg.set_key(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set_key(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse::<T>()
                .map_err(|_| Error::Config(format!("bad value `{v}` for {key}")))
        }
        match key {
            "alpha" => self.alpha = num(key, value)?,
            "sValues" => {
                self.s_values = value
                    .split(',')
                    .map(|s| num::<f64>(key, s.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "n" => self.n = num(key, value)?,
            "kMin" => self.k_min = num(key, value)?,
            "kMax" => self.k_max = num(key, value)?,
            "nA" => self.n_a = num(key, value)?,
            "nB" => self.n_b = num(key, value)?,
            "aMin" => self.a_min = num(key, value)?,
            "aMax" => self.a_max = num(key, value)?,
            "bMax" => self.b_max = num(key, value)?,
            "dim" => self.dim = num(key, value)?,
            "restarts" => self.restarts = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "outputDir" => self.output_dir = value.to_string(),
            "emitFields" => self.emit_fields = num(key, value)?,
            "deterministic" => self.deterministic = num(key, value)?,
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha <= 50.0) {
            return bad(format!("alpha = {} outside (0, 50]", self.alpha));
        }
        if self.s_values.is_empty() || self.s_values.iter().any(|&s| !(1.0..=16.0).contains(&s)) {
            return bad(format!("sValues {:?} must lie in [1, 16]", self.s_values));
        }
        if self.n < 16 {
            return bad(format!("n = {} < 16", self.n));
        }
        if !(self.dim >= 1 && self.dim <= 16) {
            return bad(format!("dim = {} outside 1..=16", self.dim));
        }
        if !(self.restarts >= 1 && self.restarts <= 64) {
            return bad(format!("restarts = {} outside 1..=64", self.restarts));
        }
        if self.n_a < 8 || self.n_a > 4096 || self.n_b < 8 || self.n_b > 1 << 17 {
            return bad(format!("phase grid {}x{} out of range", self.n_a, self.n_b));
        }
        self.phase_spec().validate().map_err(|e| Error::Config(e.to_string()))?;
        build_k_grid(&self.k_spec()).map(|_| ()).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

fn write_json<T: Serialize>(dir: &str, name: &str, value: &T) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = Path::new(dir).join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn rel(name: &str, value: f64, expected: f64, tol: f64) -> Check {
        let dev = ((value - expected) / expected).abs();
        Check { name: name.into(), value, expected, tolerance: tol, pass: dev <= tol }
    }
    fn abs(name: &str, value: f64, expected: f64, tol: f64) -> Check {
        Check { name: name.into(), value, expected, tolerance: tol, pass: (value - expected).abs() <= tol }
    }
    fn bound(name: &str, value: f64, limit: f64) -> Check {
        Check { name: name.into(), value, expected: limit, tolerance: limit, pass: value <= limit }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifySummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub renyi_reports: Vec<RenyiReport>,
    pub pass: bool,
}

const IDENTITY_ALPHAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 3.7];
const ENTROPY_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];

/// Closed-form identity suite, fiducial Rényi/entropy numerics, and the
/// isometry/bound/covariance property suite at the configured grids.
pub fn run_verify(config: &RunConfig) -> Result<VerifySummary> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut reports = Vec::new();

    // closed-form identities (exact-arithmetic side of the build)
    let mut worst_ub = 0.0f64;
    for s in 1..=6u32 {
        for &alpha in &IDENTITY_ALPHAS {
            let lhs = integer_s_upper_bound(s, alpha)?;
            let rhs = conjectured_max(s as f64, alpha);
            worst_ub = worst_ub.max(((lhs - rhs) / rhs).abs());
        }
    }
    checks.push(Check::bound("identity.upperBoundVsConjecturedMax.maxRelDev", worst_ub, 1e-12));

    let mut worst_fr = 0.0f64;
    for &alpha in &IDENTITY_ALPHAS {
        let mut s = 1.0;
        while s <= 4.0 + 1e-9 {
            let lhs = fiducial_renyi(s, alpha);
            let rhs = conjectured_max(s, alpha);
            worst_fr = worst_fr.max(((lhs - rhs) / rhs).abs());
            s += 0.25;
        }
    }
    checks.push(Check::bound("identity.fiducialRenyiVsConjecturedMax.maxRelDev", worst_fr, 1e-12));

    let mut worst_di = 0.0f64;
    let (gx, gw) = gauss_legendre_rule(64);
    for &alpha in &[0.5, 1.0] {
        let q1: f64 = gx
            .iter()
            .zip(&gw)
            .map(|(&x, &w)| {
                let u = 0.5 * (x + 1.0);
                0.5 * w * (u * (1.0 - u)).powf(2.0 * alpha)
            })
            .sum();
        worst_di = worst_di.max(((dirichlet_integral(2, alpha) - q1) / q1).abs());
        let mut q2 = 0.0;
        for (&xi, &wi) in gx.iter().zip(&gw) {
            let u = 0.5 * (xi + 1.0);
            for (&xj, &wj) in gx.iter().zip(&gw) {
                let v = 0.5 * (xj + 1.0) * (1.0 - u);
                let t = u * v * (1.0 - u - v);
                if t > 0.0 {
                    q2 += 0.25 * wi * wj * (1.0 - u) * t.powf(2.0 * alpha);
                }
            }
        }
        worst_di = worst_di.max(((dirichlet_integral(3, alpha) - q2) / q2).abs());
    }
    checks.push(Check::bound("identity.dirichletVsNestedQuadrature.maxRelDev", worst_di, 1e-9));

    // fiducial Rényi numerics at the configured grids
    let pspec = config.phase_spec();
    let kspec = config.k_spec();
    for &s in &config.s_values {
        let r = renyi_report(&TrialFunction::Fiducial, config.alpha, s, &pspec, &kspec)?;
        checks.push(Check::rel(
            &format!("renyi.fiducial.s{s}.alpha{}", config.alpha),
            r.value,
            r.conjectured_max,
            1e-4,
        ));
        reports.push(r);
    }

    // entropy trio and the derivative link
    for &alpha in &ENTROPY_ALPHAS {
        let grid = build_k_grid(&kspec)?;
        let f0 = FiducialSpec::new(alpha)?.sample_normalized(&grid);
        let field = transform_field(&f0, alpha, &PhaseGrid::new(pspec)?)?;
        let ent = wehrl_entropy(&field);
        checks.push(Check::abs(
            &format!("entropy.fiducial.alpha{alpha}"),
            ent.value,
            minimal_entropy(alpha),
            1e-3,
        ));
        let deriv = renyi_derivative_at_one(&field);
        checks.push(Check::abs(
            &format!("entropy.renyiDerivativeLink.alpha{alpha}"),
            deriv,
            ent.value,
            1e-3,
        ));
    }

    // isometry / sup-bound suite on seeded random trial functions
    let grid = build_k_grid(&kspec)?;
    let phase = PhaseGrid::new(pspec)?;
    let basis = LaguerreBasis::build(BasisSpec::new(config.alpha, config.dim)?, &grid);
    let mut worst_mass = 0.0f64;
    let mut worst_sup = f64::NEG_INFINITY;
    for i in 0..20u64 {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(split_seed(config.seed, 1000 + i));
        let f = basis.synthesize(&random_unit_coeffs(&mut rng, config.dim));
        let field = transform_field(&f, config.alpha, &phase)?;
        worst_mass = worst_mass.max((field.mass() - 1.0).abs());
        worst_sup = worst_sup.max(field.max_cell().0);
    }
    checks.push(Check::bound("isometry.randomF.worstMassDeviation", worst_mass, 1e-3));
    checks.push(Check::bound("supBound.randomF.worstSup", worst_sup, config.alpha + 1e-6));

    let f0 = FiducialSpec::new(config.alpha)?.sample_normalized(&grid);
    let field0 = transform_field(&f0, config.alpha, &phase)?;
    let (sup, loc) = sup_bound_polished(&f0, config.alpha, &field0)?;
    checks.push(Check::rel("supBound.fiducialSaturation", sup, config.alpha, 1e-6));
    checks.push(Check::abs("supBound.fiducialLocationA", loc.a(), 1.0, 1e-6));
    checks.push(Check::abs("supBound.fiducialLocationB", loc.b(), 0.0, 1e-6));

    // covariance spot check
    let g0 = AffineElement::new(1.6, -0.45)?;
    let uf = apply_rep(&g0, &f0)?;
    let mut worst_cov = 0.0f64;
    for (a, b) in [(1.0, 0.0), (0.8, 0.7), (2.2, -1.1), (1.3, 0.25)] {
        let x = AffineElement::new(a, b)?;
        let lhs = transform_at(&uf, config.alpha, &x)?.norm();
        let rhs = transform_at(&f0, config.alpha, &g0.inverse().compose(&x))?.norm();
        worst_cov = worst_cov.max((lhs - rhs).abs());
    }
    checks.push(Check::bound("covariance.maxAbsDeviation", worst_cov, 1e-6));

    let pass = checks.iter().all(|c| c.pass);
    let summary = VerifySummary {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        config: config.clone(),
        checks,
        renyi_reports: reports,
        pass,
    };
    write_json(&config.output_dir, "verify_summary.json", &summary)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub outcomes: Vec<ProbeOutcome>,
    pub violations: usize,
}

/// Maximize per s in `sValues` at the configured α; counterexample candidates
/// are escalated (doubled grid + basis) and persistent ones archived.
pub fn run_search(config: &RunConfig) -> Result<SearchSummary> {
    config.validate()?;
    let mut settings = SearchSettings::new(config.restarts, config.seed);
    settings.report_phase = config.phase_spec();
    settings.report_k = config.k_spec();
    let spec = BasisSpec::new(config.alpha, config.dim)?;
    let mut outcomes = Vec::new();
    let mut violations = 0usize;
    for &s in &config.s_values {
        let outcome = probe_conjecture(&spec, s, &settings)?;
        write_json(
            &config.output_dir,
            &format!("search_s{s}_alpha{}.json", config.alpha),
            &outcome,
        )?;
        if outcome.violation {
            violations += 1;
            let dir = format!("{}/counterexamples", config.output_dir);
            write_json(&dir, &format!("candidate_s{s}_alpha{}.json", config.alpha), &serde_json::json!({
                "schemaVersion": SCHEMA_VERSION,
                "config": config,
                "outcome": outcome,
            }))?;
        }
        outcomes.push(outcome);
    }
    let summary = SearchSummary {
        schema_version: SCHEMA_VERSION,
        command: "search".into(),
        config: config.clone(),
        outcomes,
        violations,
    };
    write_json(&config.output_dir, "verdict.json", &summary)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// bergman
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DictionaryCheck {
    pub s: f64,
    pub group_value: f64,
    pub analytic_value: f64,
    pub combined_tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BergmanSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub unitarity_worst_deviation: f64,
    pub relation_max_deviation: f64,
    pub ratio_invariance_spread: f64,
    pub dictionary: Vec<DictionaryCheck>,
    pub probes: Vec<SharpConstantRecord>,
    pub pass: bool,
}

/// Unitarity, the h = √(2π)·Im z·F relation, extremal-ratio invariance,
/// dictionary consistency, and the sharp-constant probe (α forced to 1/2).
pub fn run_bergman(config: &RunConfig) -> Result<BergmanSummary> {
    config.validate()?;
    let alpha = 0.5;
    let pspec = config.phase_spec();
    let window = HalfPlaneSpec::matching(&pspec);
    let kspec = config.k_spec();
    let grid = build_k_grid(&kspec)?;
    let basis = LaguerreBasis::build(BasisSpec::new(alpha, config.dim.max(4))?, &grid);

    // unitarity on seeded random f, on its own deep/wide window with a
    // boundary grid resolving the window's x-range
    let unitarity_window = HalfPlaneSpec::for_unitarity();
    let ugrid = build_k_grid(&KGridSpec::gauss_legendre(
        config.n,
        config.k_min,
        config.k_max,
        unitarity_window.required_b_support(),
    ))?;
    let ubasis = LaguerreBasis::build(BasisSpec::new(alpha, config.dim.max(4))?, &ugrid);
    let mut unit_worst = 0.0f64;
    for i in 0..20u64 {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(split_seed(config.seed, 2000 + i));
        let f = ubasis.synthesize(&random_unit_coeffs(&mut rng, ubasis.dim()));
        unit_worst = unit_worst.max((l2_norm(&paley_wiener(&f), &unitarity_window)? - 1.0).abs());
    }

    // pointwise relation on a lattice, for the fiducial and one random f
    let f0 = FiducialSpec::new(alpha)?.sample_normalized(&grid);
    let mut pts = Vec::new();
    for &a in &[0.2, 0.6, 1.0, 2.0, 5.0] {
        for &b in &[-3.0, -0.7, 0.0, 1.1, 2.8] {
            pts.push((a, b));
        }
    }
    let mut relation_worst = crate::bergman::husimi_relation_check(&f0, &pts)?;
    {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(split_seed(config.seed, 2100));
        let f = basis.synthesize(&random_unit_coeffs(&mut rng, basis.dim()));
        relation_worst = relation_worst.max(crate::bergman::husimi_relation_check(&f, &pts)?);
    }

    // extremal-ratio invariance across poles at s = 2 (wide window: the
    // extremal |F|² rows carry fat x^{-4} tails that bias the l2 side)
    let wide = HalfPlaneSpec::for_extremal();
    let mut ratios = Vec::new();
    for z0 in [
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, -2.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(-0.5, -3.0),
    ] {
        let func = BergmanFunction::rational_extremal(z0, Complex64::new(1.0, 0.0))?;
        let r = weighted_norm(&func, 2.0, &wide)?;
        ratios.push(r.lhs / (r.l2 * r.l2));
    }
    let rmin = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let rmax = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let invariance_spread = (rmax - rmin) / rmax;

    // dictionary consistency and sharp-constant probes over sValues
    let phase = PhaseGrid::new(pspec)?;
    let mut dictionary = Vec::new();
    let mut probes = Vec::new();
    for &s in &config.s_values {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(split_seed(config.seed, 2200));
        let f = basis.synthesize(&random_unit_coeffs(&mut rng, basis.dim()));
        let field = transform_field(&f, alpha, &phase)?;
        let group = renyi_value(&field, s)?;
        let wn = weighted_norm(&paley_wiener(&f), s, &window)?;
        let two_pi = 2.0 * std::f64::consts::PI;
        let analytic = two_pi.powf(s - 1.0) * wn.lhs;
        let tol = 1e-4 * group.abs().max(1e-3) + 3.0 * two_pi.powf(s - 1.0) * wn.lhs_error;
        dictionary.push(DictionaryCheck {
            s,
            group_value: group,
            analytic_value: analytic,
            combined_tolerance: tol,
            pass: (group - analytic).abs() <= tol,
        });
        probes.push(sharp_constant_probe(s, &wide)?);
    }

    let pass = unit_worst <= 1e-5
        && relation_worst <= 1e-7
        && invariance_spread <= 1e-7
        && dictionary.iter().all(|d| d.pass);
    let summary = BergmanSummary {
        schema_version: SCHEMA_VERSION,
        command: "bergman".into(),
        config: config.clone(),
        unitarity_worst_deviation: unit_worst,
        relation_max_deviation: relation_worst,
        ratio_invariance_spread: invariance_spread,
        dictionary,
        probes,
        pass,
    };
    write_json(&config.output_dir, "bergman_summary.json", &summary)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// field
// ---------------------------------------------------------------------------

/// Parse a complex literal: `re`, `re+imi`, `re-imi`, e.g. `0.3-0.1i`.
fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || Error::Config(format!("malformed complex literal `{text}`"));
    if let Some(body) = t.strip_suffix('i') {
        // find the sign splitting re and im (not the leading sign)
        let chars: Vec<char> = body.chars().collect();
        for pos in (1..chars.len()).rev() {
            if (chars[pos] == '+' || chars[pos] == '-')
                && chars[pos - 1] != 'e'
                && chars[pos - 1] != 'E'
            {
                let re: f64 = body[..pos].parse().map_err(|_| bad())?;
                let im_str = &body[pos..];
                let im: f64 = if im_str == "+" || im_str == "-" {
                    format!("{im_str}1").parse().map_err(|_| bad())?
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        // pure imaginary
        let im: f64 = if body.is_empty() || body == "+" || body == "-" {
            format!("{body}1").parse().map_err(|_| bad())?
        } else {
            body.parse().map_err(|_| bad())?
        };
        return Ok(Complex64::new(0.0, im));
    }
    Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
}

/// Parse the --f-spec grammar: `fiducial` | `laguerre:c0,c1,...` |
/// `maximizer:B` with complex literals as in [`parse_complex`].
pub fn parse_f_spec(text: &str) -> Result<TrialFunction> {
    let t = text.trim();
    if t == "fiducial" {
        return Ok(TrialFunction::Fiducial);
    }
    if let Some(rest) = t.strip_prefix("laguerre:") {
        let coeffs = rest
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() || coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::Config("laguerre f-spec needs nonzero coefficients".into()));
        }
        return Ok(TrialFunction::laguerre(&coeffs));
    }
    if let Some(rest) = t.strip_prefix("maximizer:") {
        let b = parse_complex(rest)?;
        if !(b.re > 0.0) {
            return Err(Error::Config(format!("maximizer f-spec needs Re B > 0, got {b}")));
        }
        return Ok(TrialFunction::Maximizer { b_re: b.re, b_im: b.im });
    }
    Err(Error::Config(format!(
        "malformed f-spec `{text}` (expected fiducial | laguerre:... | maximizer:...)"
    )))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub f_spec: String,
    pub haar_mass: f64,
    pub sup_value: f64,
    pub sup_location: AffineElement,
    pub csv_path: String,
}

/// Compute the Husimi field of the requested trial function, dump it as CSV
/// (columns a,b,husimi,haarWeight) with a JSON sidecar carrying the isometry
/// mass and sup-bound check.
pub fn run_field(config: &RunConfig, f_spec: &str) -> Result<FieldSummary> {
    config.validate()?;
    let trial = parse_f_spec(f_spec)?;
    let grid = build_k_grid(&config.k_spec())?;
    let f = trial.synthesize(config.alpha, &grid)?;
    let phase = PhaseGrid::new(config.phase_spec())?;
    let field = transform_field(&f, config.alpha, &phase)?;
    let (sup, loc) = sup_bound_polished(&f, config.alpha, &field)?;

    std::fs::create_dir_all(&config.output_dir)?;
    let csv_path = Path::new(&config.output_dir).join("husimi_field.csv");
    let file = std::fs::File::create(&csv_path)?;
    field.write_csv(std::io::BufWriter::new(file))?;

    let summary = FieldSummary {
        schema_version: SCHEMA_VERSION,
        command: "field".into(),
        config: config.clone(),
        f_spec: f_spec.to_string(),
        haar_mass: field.mass(),
        sup_value: sup,
        sup_location: loc,
        csv_path: csv_path.display().to_string(),
    };
    write_json(&config.output_dir, "field_summary.json", &summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "# example config\nalpha = 1.0\nsValues = 1, 2\nnB = 512\noutputDir = out\nemitFields = true\n",
        )
        .unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.alpha, 1.0);
        assert_eq!(cfg.s_values, vec![1.0, 2.0]);
        assert_eq!(cfg.n_b, 512);
        assert_eq!(cfg.output_dir, "out");
        assert!(cfg.emit_fields);
        // untouched keys keep defaults
        assert_eq!(cfg.dim, RunConfig::default().dim);

        std::fs::write(&path, "bogusKey = 3\n").unwrap();
        assert!(RunConfig::from_file(&path).is_err());
        std::fs::write(&path, "alpha\n").unwrap();
        assert!(RunConfig::from_file(&path).is_err());
    }

    #[test]
    fn config_validation_ranges() {
        let mut cfg = RunConfig::default();
        cfg.alpha = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.s_values = vec![0.5];
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.k_max = 10.0; // violates the e^{-k} tail policy
        assert!(cfg.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn complex_and_f_spec_parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.3+0.1i").unwrap(), Complex64::new(0.3, 0.1));
        assert_eq!(parse_complex("-0.3-2i").unwrap(), Complex64::new(-0.3, -2.0));
        assert_eq!(parse_complex("1e-2+1e-3i").unwrap(), Complex64::new(0.01, 0.001));
        assert_eq!(parse_complex("0.7i").unwrap(), Complex64::new(0.0, 0.7));
        assert!(parse_complex("abc").is_err());

        assert!(matches!(parse_f_spec("fiducial").unwrap(), TrialFunction::Fiducial));
        assert!(matches!(
            parse_f_spec("laguerre:1,0.2-0.3i").unwrap(),
            TrialFunction::Laguerre(_)
        ));
        assert!(matches!(
            parse_f_spec("maximizer:2").unwrap(),
            TrialFunction::Maximizer { .. }
        ));
        assert!(parse_f_spec("maximizer:-1").is_err());
        assert!(parse_f_spec("wavelet:3").is_err());
        assert!(parse_f_spec("laguerre:").is_err());
    }
}
