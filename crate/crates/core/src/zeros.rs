//! Zero location relative to the unit disk and the bidisk.
//!
//! Strong stability (no zeros on the closed bidisk) is decided by the slice
//! decomposition: `p(·, 0)` has no zeros in the closed disk, and for every
//! `z₀` on the unit circle the roots of `p(z₀, ·)` lie outside the closed disk.
//! When that fails, a polar grid over `|z| < 1` looks for a zero in the open
//! bidisk. Everything reduces to univariate root finding on the companion
//! matrix.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OpaError, Result};
use crate::gaussian::{format_rational, GaussianRational, Rational};
use crate::poly2::BiPoly;
use crate::univariate::UniPoly;

/// Leading coefficients below this fraction of the largest one are dropped.
pub const LEADING_TRIM: f64 = 1e-12;

/// Roots of `c[0] + c[1] u + …` via the eigenvalues of the companion matrix,
/// followed by a Newton polish against the original coefficients.
pub fn univariate_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(OpaError::ConstantPolynomial);
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= LEADING_TRIM * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Err(OpaError::ConstantPolynomial);
    }
    let c = &coeffs[..=deg];
    let roots = match deg {
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[2], c[1], c[0]),
        _ => companion_eigenvalues(c),
    };
    Ok(roots.into_iter().map(|r| newton_polish(c, r)).collect())
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that avoids cancellation.
    let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
    if q == Complex64::zero() {
        return vec![Complex64::zero(), Complex64::zero()];
    }
    vec![q / a, c / q]
}

fn companion_eigenvalues(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::one();
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    // The unbounded QR sweep can cycle on some companion matrices.
    match m.try_schur(f64::EPSILON, 200 * deg) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..deg).map(|i| t[(i, i)]).collect()
        }
        None => aberth(c),
    }
}

/// Simultaneous Aberth iteration from points on a circle sized by the Cauchy bound.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let lead = c[deg].norm();
    let radius = 1.0 + c[..deg].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut x: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(c, x[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulse: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (x[i] - x[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulse);
            if step.is_finite() {
                x[i] -= step;
                moved = moved.max(step.norm() / (1.0 + x[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    x
}

fn horner(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn newton_polish(c: &[Complex64], mut x: Complex64) -> Complex64 {
    let (mut px, _) = horner(c, x);
    for _ in 0..3 {
        let (p, dp) = horner(c, x);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let (pn, _) = horner(c, next);
        if pn.norm().partial_cmp(&px.norm()) != Some(std::cmp::Ordering::Less) {
            break;
        }
        x = next;
        px = pn;
    }
    x
}

/// Float image of a [`BiPoly`], cast once: `coeffs[b][a]` multiplies `z^a w^b`.
#[derive(Clone, Debug)]
pub struct FloatBiPoly {
    coeffs: Vec<Vec<Complex64>>,
    scale: f64,
}

impl FloatBiPoly {
    pub fn from_exact(p: &BiPoly) -> Self {
        let coeffs: Vec<Vec<Complex64>> = p
            .coefficients_in_w()
            .iter()
            .map(|row| row.iter().map(GaussianRational::to_complex64).collect())
            .collect();
        let scale = coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        Self { coeffs, scale }
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn deg_z(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len).saturating_sub(1)
    }

    /// Coefficients of `w ↦ p(z0, w)`.
    pub fn slice_in_w(&self, z0: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|row| horner(row, z0).0).collect()
    }

    /// Coefficients of `z ↦ p(z, w0)`.
    pub fn slice_in_z(&self, w0: Complex64) -> Vec<Complex64> {
        (0..=self.deg_z())
            .map(|a| {
                let col: Vec<Complex64> = self.coeffs.iter().map(|row| row[a]).collect();
                horner(&col, w0).0
            })
            .collect()
    }

    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Complex64 {
        horner(&self.slice_in_w(z), w).0
    }

    /// `(p, ∂p/∂z, ∂p/∂w)` at a point.
    pub fn value_and_gradient(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let (p, dw) = horner(&self.slice_in_w(z), w);
        let (_, dz) = horner(&self.slice_in_z(w), z);
        (p, dz, dw)
    }
}

/// Outcome of the bidisk classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    ZeroInOpenBidisk,
    StableNotStrong,
    StronglyStable,
    Inconclusive,
}

impl Verdict {
    /// A zero somewhere in the closed bidisk.
    pub fn has_closed_zero(self) -> bool {
        matches!(self, Verdict::ZeroInOpenBidisk | Verdict::StableNotStrong)
    }
}

/// A point together with `|p|` there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub abs_value: f64,
}

impl Witness {
    fn new(z: Complex64, w: Complex64, value: Complex64) -> Self {
        Self { z: [z.re, z.im], w: [w.re, w.im], abs_value: value.norm() }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.w[0], self.w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probes {
    pub torus_samples: usize,
    /// Zero when the open-bidisk grid search was not needed.
    pub disk_grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Smallest root modulus minus one over the probed slices; `null` when no slice has roots.
    #[serde(with = "finite_or_null")]
    pub margin: f64,
    pub probes: Probes,
    pub tolerance: f64,
}

pub(crate) mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub torus_samples: usize,
    pub disk_grid: usize,
    pub tolerance: f64,
    pub refine_iters: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { torus_samples: 2048, disk_grid: 128, tolerance: 1e-7, refine_iters: 40 }
    }
}

/// Minimum modulus of the `w`-roots of `w ↦ p(e^{iθ}, w)`.
pub fn min_root_modulus_on_torus(p: &BiPoly, z0_angle: f64) -> Result<f64> {
    slice_min_modulus(&FloatBiPoly::from_exact(p), Complex64::from_polar(1.0, z0_angle)).map(|(m, _)| m)
}

/// `(min |w|, argmin w)` over the roots of the slice at `z0`.
fn slice_min_modulus(fp: &FloatBiPoly, z0: Complex64) -> Result<(f64, Complex64)> {
    let slice = fp.slice_in_w(z0);
    let slice_scale = slice.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if slice_scale <= f64::EPSILON * fp.scale() * 16.0 {
        return Err(OpaError::DegenerateSlice);
    }
    let roots = univariate_roots(&slice)?;
    Ok(roots
        .into_iter()
        .map(|r| (r.norm(), r))
        .fold((f64::INFINITY, Complex64::zero()), |acc, x| if x.0 < acc.0 { x } else { acc }))
}

/// Slice minimum with the conventions used by the torus scan: no roots → ∞.
/// A slice that vanishes identically puts the whole line `{z₀} × ℂ` in the
/// zero set; it counts as a boundary zero (modulus 1) and the open-bidisk
/// search decides the rest.
fn torus_probe(fp: &FloatBiPoly, theta: f64) -> (f64, Complex64) {
    match slice_min_modulus(fp, Complex64::from_polar(1.0, theta)) {
        Ok(x) => x,
        Err(OpaError::DegenerateSlice) => (1.0, Complex64::zero()),
        Err(_) => (f64::INFINITY, Complex64::zero()),
    }
}

fn golden_refine(fp: &FloatBiPoly, lo: f64, hi: f64, iters: usize) -> (f64, f64, Complex64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = torus_probe(fp, c);
    let mut fd = torus_probe(fp, d);
    for _ in 0..iters {
        if fc.0 < fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = torus_probe(fp, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = torus_probe(fp, d);
        }
    }
    if fc.0 < fd.0 {
        (c, fc.0, fc.1)
    } else {
        (d, fd.0, fd.1)
    }
}

/// Minimal-norm Newton iteration on `p(z, w) = 0` in both coordinates.
fn polish_zero(fp: &FloatBiPoly, mut z: Complex64, mut w: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut best = (z, w, fp.evaluate(z, w));
    for _ in 0..50 {
        let (p, dz, dw) = fp.value_and_gradient(z, w);
        let g2 = dz.norm_sqr() + dw.norm_sqr();
        if p.norm() == 0.0 || g2 == 0.0 {
            break;
        }
        let s = p / g2;
        z -= s * dz.conj();
        w -= s * dw.conj();
        let v = fp.evaluate(z, w);
        if v.norm() < best.2.norm() {
            best = (z, w, v);
        } else {
            break;
        }
    }
    best
}

struct OpenZeroSearch {
    witness: Option<Witness>,
    grid_used: usize,
}

fn search_open_zero(fp: &FloatBiPoly, cfg: &ClassifyConfig, seeds: &[(Complex64, Complex64)]) -> OpenZeroSearch {
    let tol = cfg.tolerance;
    let grid = cfg.disk_grid.max(1);
    let points: Vec<Complex64> = (0..grid)
        .flat_map(|i| {
            let r = i as f64 / grid as f64;
            let count = if i == 0 { 1 } else { grid };
            (0..count).map(move |j| Complex64::from_polar(r, TAU * j as f64 / grid as f64))
        })
        .collect();
    let scored: Vec<Option<(f64, Complex64, Complex64)>> = points
        .par_iter()
        .map(|&z| {
            let slice = fp.slice_in_w(z);
            let roots = univariate_roots(&slice).ok()?;
            roots
                .into_iter()
                .map(|w| (z.norm().max(w.norm()), z, w))
                .min_by(|a, b| a.0.total_cmp(&b.0))
        })
        .collect();
    let mut candidates: Vec<(f64, Complex64, Complex64)> = seeds
        .iter()
        .map(|&(z, w)| (z.norm().max(w.norm()), z, w))
        .chain(scored.into_iter().flatten())
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let threshold = tol * fp.scale().max(f64::MIN_POSITIVE);
    for &(score, z, w) in candidates.iter().take(8) {
        if score >= 1.0 - tol {
            break;
        }
        let (pz, pw, pv) = polish_zero(fp, z, w);
        let inside = |a: Complex64, b: Complex64| a.norm() < 1.0 - tol && b.norm() < 1.0 - tol;
        if inside(pz, pw) && pv.norm() < threshold {
            return OpenZeroSearch { witness: Some(Witness::new(pz, pw, pv)), grid_used: grid };
        }
        let v = fp.evaluate(z, w);
        if inside(z, w) && v.norm() < threshold {
            return OpenZeroSearch { witness: Some(Witness::new(z, w, v)), grid_used: grid };
        }
    }
    OpenZeroSearch { witness: None, grid_used: grid }
}

/// Locates the zeros of `p` relative to the open and closed bidisk.
pub fn classify_bidisk(p: &BiPoly, cfg: &ClassifyConfig) -> Result<StabilityReport> {
    if p.is_zero() {
        return Err(OpaError::ZeroPolynomial("classification of zero"));
    }
    if cfg.torus_samples == 0 || cfg.tolerance.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(OpaError::InvalidArgument("torus_samples and tolerance must be positive".into()));
    }
    let tol = cfg.tolerance;
    let fp = FloatBiPoly::from_exact(p);
    let mut report = StabilityReport {
        verdict: Verdict::StronglyStable,
        witness: None,
        margin: f64::INFINITY,
        probes: Probes { torus_samples: cfg.torus_samples, disk_grid: 0 },
        tolerance: tol,
    };
    if p.total_degree() == Some(0) {
        return Ok(report);
    }

    // Condition (i): the slice w = 0.
    let mut seeds = Vec::new();
    let mut boundary: Option<(f64, Complex64, Complex64)> = None;
    let w0_slice = fp.slice_in_z(Complex64::zero());
    let w0_scale = w0_slice.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if w0_scale <= f64::EPSILON * fp.scale() * 16.0 {
        // w divides p: every (z, 0) is a zero.
        let v = fp.evaluate(Complex64::zero(), Complex64::zero());
        report.verdict = Verdict::ZeroInOpenBidisk;
        report.witness = Some(Witness::new(Complex64::zero(), Complex64::zero(), v));
        report.margin = -1.0;
        return Ok(report);
    }
    if let Ok(roots) = univariate_roots(&w0_slice) {
        for r in roots {
            let m = r.norm() - 1.0;
            seeds.push((r, Complex64::zero()));
            if boundary.is_none_or(|b| m < b.0) {
                boundary = Some((m, r, Complex64::zero()));
            }
        }
    }

    // Condition (ii): the torus family of w-slices.
    let n = cfg.torus_samples;
    let thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let probes: Vec<(f64, Complex64)> = thetas.par_iter().map(|&t| torus_probe(&fp, t)).collect();
    let step = TAU / n as f64;
    let mut minima: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = probes[(k + n - 1) % n].0;
            let next = probes[(k + 1) % n].0;
            probes[k].0.is_finite() && probes[k].0 <= prev && probes[k].0 <= next
        })
        .collect();
    minima.sort_by(|&a, &b| probes[a].0.total_cmp(&probes[b].0));
    minima.truncate(16);
    for &k in &minima {
        let (m0, w0) = probes[k];
        let (theta, m, w) = if cfg.refine_iters > 0 {
            let refined = golden_refine(&fp, thetas[k] - step, thetas[k] + step, cfg.refine_iters);
            if refined.1 < m0 { refined } else { (thetas[k], m0, w0) }
        } else {
            (thetas[k], m0, w0)
        };
        let z = Complex64::from_polar(1.0, theta);
        seeds.push((z, w));
        if boundary.is_none_or(|b| m - 1.0 < b.0) {
            boundary = Some((m - 1.0, z, w));
        }
    }
    report.margin = boundary.map_or(f64::INFINITY, |b| b.0);

    if report.margin > tol {
        return Ok(report);
    }

    let search = search_open_zero(&fp, cfg, &seeds);
    report.probes.disk_grid = search.grid_used;
    if let Some(w) = search.witness {
        report.verdict = Verdict::ZeroInOpenBidisk;
        report.witness = Some(w);
        return Ok(report);
    }
    let (_, bz, bw) = boundary.expect("margin is finite here");
    report.witness = Some(Witness::new(bz, bw, fp.evaluate(bz, bw)));
    report.verdict = if report.margin >= -tol { Verdict::StableNotStrong } else { Verdict::Inconclusive };
    Ok(report)
}

/// Exact evidence that `p` vanishes in the open bidisk: for the Gaussian
/// rational `z*` with `|z*| < 1`, the univariate `q(w) = p(z*, w)` expanded at
/// `w*` as `Σ d_j t^j` satisfies `|d_1| ρ > Σ_{j≠1} |d_j| ρ^j`, so `q` has
/// exactly one root in `|w − w*| < ρ`, and that disk lies inside the unit disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    pub z: [String; 2],
    pub w_center: [String; 2],
    pub radius: String,
    /// `|p(z*, w*)|²`, exact.
    pub abs_sq_at_center: String,
    /// `|d_1|² ρ²`, exact; must exceed the square of the dominated sum.
    pub linear_term_sq: String,
    /// Square of an exact upper bound on `Σ_{j≠1} |d_j| ρ^j`.
    pub remainder_bound_sq: String,
}

fn abs_upper(c: &GaussianRational) -> Rational {
    num_traits::Signed::abs(&c.re) + num_traits::Signed::abs(&c.im)
}

fn pair_strings(c: &GaussianRational) -> [String; 2] {
    [format_rational(&c.re), format_rational(&c.im)]
}

/// Attempts to certify a zero of `p` in the open bidisk near a float witness.
pub fn certify_open_zero(p: &BiPoly, z: Complex64, w: Complex64) -> Option<ZeroCertificate> {
    let z_star = GaussianRational::from_f64_approx(z, 60);
    if z_star.norm_sq() >= Rational::one() {
        return None;
    }
    let q = UniPoly::new(
        p.coefficients_in_w()
            .iter()
            .map(|row| UniPoly::new(row.clone()).evaluate(&z_star))
            .collect(),
    );
    q.degree().filter(|&d| d >= 1)?;
    // Refine the root of the exact slice in floating point before rounding.
    let qf = q.to_complex64();
    let roots = univariate_roots(&qf).ok()?;
    let w_float = roots.into_iter().min_by(|a, b| (a - w).norm().total_cmp(&(b - w).norm()))?;
    let w_star = GaussianRational::from_f64_approx(w_float, 60);
    let d = q.taylor_shift(&w_star);
    let d1_sq = d.coeff(1).norm_sq();
    if d1_sq.is_zero() {
        return None;
    }
    let d0 = d.coeff(0).to_complex64().norm();
    let d1 = d.coeff(1).to_complex64().norm();
    let base = (d0 / d1).max(1e-30);
    for factor in [2.0, 4.0, 16.0, 256.0, 4096.0] {
        let Some(rho) = num_traits::FromPrimitive::from_f64(base * factor) else {
            continue;
        };
        let rho: Rational = rho;
        let one_minus = Rational::one() - &rho;
        if one_minus <= Rational::zero() || w_star.norm_sq() >= &one_minus * &one_minus {
            continue;
        }
        let mut rest = Rational::zero();
        let mut rho_pow = Rational::one();
        for (j, c) in d.coeffs().iter().enumerate() {
            if j != 1 {
                rest += abs_upper(c) * &rho_pow;
            }
            rho_pow = &rho_pow * &rho;
        }
        let lin = &d1_sq * &rho * &rho;
        let rest_sq = &rest * &rest;
        if lin > rest_sq {
            return Some(ZeroCertificate {
                z: pair_strings(&z_star),
                w_center: pair_strings(&w_star),
                radius: format_rational(&rho),
                abs_sq_at_center: format_rational(&d.coeff(0).norm_sq()),
                linear_term_sq: format_rational(&lin),
                remainder_bound_sq: format_rational(&rest_sq),
            });
        }
    }
    None
}
