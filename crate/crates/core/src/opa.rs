//! Optimal polynomial approximants.
//!
//! For `f` and a χ-degree `n`, the OPA `p_n^*[f]` is the polynomial in
//! `span{χ_0, …, χ_n}` minimizing `‖p·f − 1‖`. Its coefficients solve the
//! optimal system built from the Gram matrix `G_{jk} = ⟨χ_j f, χ_k f⟩`.
//!
//! With the inner product linear in its first slot, the normal equations read
//! `Σ_k ⟨χ_k f, χ_j f⟩ a_k = ⟨1, χ_j f⟩`, i.e. `Gᵀ a = (conj f(0), 0, …, 0)`.
//! `Gᵀ = conj(G)` because `G` is Hermitian, so for real `f` this is `G a = rhs`.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OpaError, Result};
use crate::gaussian::{GaussianRational, Rational};
use crate::linalg::ExactMatrix;
use crate::poly2::{chi_exponents, inner_product, BiPoly, ExponentPair};
use crate::univariate::UniPoly;
use crate::zeros::univariate_roots;

/// Gram matrix and right-hand side of the optimal system of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSystem {
    pub degree: usize,
    /// Entry `(j, k)` is `⟨χ_j f, χ_k f⟩`.
    pub gram: ExactMatrix,
    /// `(conj f(0), 0, …, 0)`.
    pub rhs: Vec<GaussianRational>,
}

impl OptimalSystem {
    /// The matrix actually solved: `Gᵀ`, row `j` holding `⟨χ_k f, χ_j f⟩`.
    pub fn system_matrix(&self) -> ExactMatrix {
        self.gram.transpose()
    }

    pub fn solve(&self) -> Result<Vec<GaussianRational>> {
        self.system_matrix().solve(&self.rhs)
    }
}

/// Autocorrelations `A(d) = Σ_{e₁ − e₂ = d} c_{e₁} conj(c_{e₂})` of a polynomial,
/// so that `⟨χ_j f, χ_k f⟩ = A(s_k − s_j)` for monomial exponents `s_j`, `s_k`.
#[derive(Clone, Debug)]
pub struct Autocorrelation {
    values: HashMap<(i64, i64), GaussianRational>,
}

impl Autocorrelation {
    pub fn of(f: &BiPoly) -> Self {
        let mut values: HashMap<(i64, i64), GaussianRational> = HashMap::new();
        for (e1, c1) in f.terms() {
            for (e2, c2) in f.terms() {
                let d = (i64::from(e1.a) - i64::from(e2.a), i64::from(e1.b) - i64::from(e2.b));
                let v = c1 * &c2.conj();
                values
                    .entry(d)
                    .and_modify(|acc| *acc += &v)
                    .or_insert(v);
            }
        }
        Self { values }
    }

    /// `⟨z^{s_j} f, z^{s_k} f⟩` for exponents `s_j`, `s_k`.
    pub fn gram_entry(&self, sj: ExponentPair, sk: ExponentPair) -> GaussianRational {
        let d = (i64::from(sk.a) - i64::from(sj.a), i64::from(sk.b) - i64::from(sj.b));
        self.values.get(&d).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// `⟨f, z^a w^b f⟩`.
    pub fn shift(&self, e: ExponentPair) -> GaussianRational {
        self.gram_entry(ExponentPair::ORIGIN, e)
    }
}

/// Gram matrix `(⟨χ_j f, χ_k f⟩)_{0 ≤ j,k ≤ n}`.
pub fn gram_matrix(f: &BiPoly, n: usize) -> ExactMatrix {
    let exps: Vec<ExponentPair> = (0..=n as u64).map(chi_exponents).collect();
    gram_on(&Autocorrelation::of(f), &exps)
}

fn gram_on(auto: &Autocorrelation, exps: &[ExponentPair]) -> ExactMatrix {
    let n = exps.len();
    let mut g = ExactMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let v = auto.gram_entry(exps[j], exps[k]);
            if k != j {
                g[(k, j)] = v.conj();
            }
            g[(j, k)] = v;
        }
    }
    g
}

/// Minimizer of `‖p·f − 1‖` over `p ∈ span{z^a w^b : (a, b) ∈ exps}`.
///
/// With `exps = [z⁰, …, zⁿ]` and `f` in `z` alone this is the one-variable OPA.
pub fn solve_opa_in_span(f: &BiPoly, exps: &[ExponentPair]) -> Result<BiPoly> {
    if f.is_zero() {
        return Err(OpaError::ZeroPolynomial("optimal system of zero"));
    }
    let f0 = f.constant_term().conj();
    let rhs: Vec<GaussianRational> = exps
        .iter()
        .map(|e| if *e == ExponentPair::ORIGIN { f0.clone() } else { GaussianRational::zero() })
        .collect();
    let coeffs = gram_on(&Autocorrelation::of(f), exps).transpose().solve(&rhs)?;
    Ok(BiPoly::from_terms(exps.iter().copied().zip(coeffs)))
}

pub fn build_optimal_system(f: &BiPoly, n: usize) -> Result<OptimalSystem> {
    if f.is_zero() {
        return Err(OpaError::ZeroPolynomial("optimal system of zero"));
    }
    let mut rhs = vec![GaussianRational::zero(); n + 1];
    rhs[0] = f.constant_term().conj();
    Ok(OptimalSystem { degree: n, gram: gram_matrix(f, n), rhs })
}

/// The OPA `p_n^*[f]` with its squared error `‖p·f − 1‖²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpaResult {
    pub poly: BiPoly,
    pub degree: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub error_sq: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::gaussian::format_rational(r))
}

pub fn solve_opa(f: &BiPoly, n: usize) -> Result<OpaResult> {
    let system = build_optimal_system(f, n)?;
    let coeffs = system.solve()?;
    let poly = BiPoly::from_chi_coefficients(&coeffs);
    let residual = &poly.multiply(f) - &BiPoly::one();
    Ok(OpaResult { error_sq: residual.norm_sq(), poly, degree: n })
}

/// OPAs for every degree `0..=n_max`.
pub fn solve_opa_sequence(f: &BiPoly, n_max: usize) -> Result<Vec<OpaResult>> {
    (0..=n_max).map(|n| solve_opa(f, n)).collect()
}

/// Many `(f, n)` pairs at once; results keep the input order.
pub fn solve_opa_batch(jobs: &[(BiPoly, usize)]) -> Vec<Result<OpaResult>> {
    jobs.par_iter().map(|(f, n)| solve_opa(f, *n)).collect()
}

/// `max_j |⟨1 − p·f, χ_j f⟩|²` over `j = 0..=n`; zero exactly for a true OPA.
pub fn orthogonality_residual(f: &BiPoly, result: &OpaResult) -> Result<Rational> {
    if let Some(top) = result.poly.max_chi_index() {
        if top as usize > result.degree {
            return Err(OpaError::DegreeMismatch { expected: result.degree, found: top as usize });
        }
    }
    let defect = &BiPoly::one() - &result.poly.multiply(f);
    let mut worst = Rational::zero();
    for j in 0..=result.degree as u64 {
        let v = inner_product(&defect, &f.monomial_shift(chi_exponents(j))).norm_sq();
        if v > worst {
            worst = v;
        }
    }
    Ok(worst)
}

/// Determinants of the kernel-projection system at a point `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetCriterion {
    /// `det G`, a positive rational.
    pub det_g: Rational,
    /// Determinant of the optimal system matrix with its first column replaced by
    /// `(⟨k_α, χ_j f⟩)_j = (conj((χ_j f)(α)))_j`.
    pub det_g0: GaussianRational,
}

fn in_open_disk(x: &GaussianRational) -> bool {
    x.norm_sq() < Rational::one()
}

pub fn det_criterion(
    f: &BiPoly,
    n: usize,
    alpha: (&GaussianRational, &GaussianRational),
) -> Result<DetCriterion> {
    if f.is_zero() {
        return Err(OpaError::ZeroPolynomial("determinant criterion of zero"));
    }
    if !in_open_disk(alpha.0) || !in_open_disk(alpha.1) {
        return Err(OpaError::OutsideBidisk);
    }
    det_criterion_at(f, n, alpha)
}

/// The determinants at any Gaussian rational point, without the `α ∈ D²`
/// hypothesis; the identity with `p_n^*[f](α) f(α)` is polynomial in `α`.
pub fn det_criterion_at(
    f: &BiPoly,
    n: usize,
    alpha: (&GaussianRational, &GaussianRational),
) -> Result<DetCriterion> {
    let system = build_optimal_system(f, n)?;
    let m = system.system_matrix();
    let det = m.determinant();
    debug_assert!(det.is_real());
    let f_alpha = f.evaluate(alpha.0, alpha.1);
    let column: Vec<GaussianRational> = (0..=n as u64)
        .map(|j| {
            let e = chi_exponents(j);
            (&(&alpha.0.pow(e.a) * &alpha.1.pow(e.b)) * &f_alpha).conj()
        })
        .collect();
    let det_g0 = m.with_column(0, &column).determinant();
    Ok(DetCriterion { det_g: det.re, det_g0 })
}

impl DetCriterion {
    /// `p_n^*[f](α) · f(α) · det G = conj(f(0)) · conj(det G₀)`.
    pub fn identity_holds(&self, f: &BiPoly, opa: &BiPoly, alpha: (&GaussianRational, &GaussianRational)) -> bool {
        let lhs = &(&opa.evaluate(alpha.0, alpha.1) * &f.evaluate(alpha.0, alpha.1))
            * &GaussianRational::real(self.det_g.clone());
        let rhs = &f.constant_term().conj() * &self.det_g0.conj();
        lhs == rhs
    }
}

/// Floating point determinant criterion for arbitrary `α ∈ D²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetCriterionF64 {
    pub det_g: f64,
    pub det_g0: Complex64,
    /// `|p(α) f(α) det G − conj(f(0)) conj(det G₀)|`, relative to `det G`.
    pub identity_defect: f64,
}

pub const DET_CRITERION_F64_TOL: f64 = 1e-9;

pub fn det_criterion_f64(f: &BiPoly, n: usize, alpha: (Complex64, Complex64)) -> Result<DetCriterionF64> {
    if f.is_zero() {
        return Err(OpaError::ZeroPolynomial("determinant criterion of zero"));
    }
    if alpha.0.norm() >= 1.0 || alpha.1.norm() >= 1.0 {
        return Err(OpaError::OutsideBidisk);
    }
    let system = build_optimal_system(f, n)?;
    let m = system.system_matrix();
    let size = n + 1;
    let mf = nalgebra::DMatrix::<Complex64>::from_fn(size, size, |i, j| m[(i, j)].to_complex64());
    let f_alpha = f.evaluate_c64(alpha.0, alpha.1);
    let mut m0 = mf.clone();
    for j in 0..size {
        let e = chi_exponents(j as u64);
        m0[(j, 0)] = (alpha.0.powu(e.a) * alpha.1.powu(e.b) * f_alpha).conj();
    }
    let det_g = mf.determinant().re;
    let det_g0 = m0.determinant();
    let opa = solve_opa(f, n)?;
    let lhs = opa.poly.evaluate_c64(alpha.0, alpha.1) * f_alpha * det_g;
    let rhs = f.constant_term().to_complex64().conj() * det_g0.conj();
    Ok(DetCriterionF64 { det_g, det_g0, identity_defect: (lhs - rhs).norm() / det_g.abs().max(f64::MIN_POSITIVE) })
}

/// `c` with `p_n^*[f] = c · p_n^*[g]`, if one exists.
pub fn check_const_equiv(f: &BiPoly, g: &BiPoly, n: usize) -> Result<Option<GaussianRational>> {
    if f.constant_term().is_zero() || g.constant_term().is_zero() {
        return Err(OpaError::VanishesAtOrigin);
    }
    let pf = solve_opa(f, n)?.poly;
    let pg = solve_opa(g, n)?.poly;
    Ok(proportionality_constant(&pf, &pg))
}

/// `c` with `p = c·q`, determined at the first index where either is nonzero.
pub fn proportionality_constant(p: &BiPoly, q: &BiPoly) -> Option<GaussianRational> {
    let first_p = p.terms().next().map(|(e, _)| *e);
    let first_q = q.terms().next().map(|(e, _)| *e);
    let c = match (first_p, first_q) {
        (None, None) => return Some(GaussianRational::one()),
        (None, Some(_)) => return Some(GaussianRational::zero()),
        (Some(_), None) => return None,
        (Some(a), Some(b)) if a != b => return None,
        (Some(a), Some(_)) => &p.coeff(a) / &q.coeff(a),
    };
    (q.scale(&c) == *p).then_some(c)
}

/// Both sides of the constant-OPA product law for separated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P0Product {
    /// `p_0^*[g h]`.
    pub lhs: BiPoly,
    /// `p_0^*[g] · p_0^*[h]`.
    pub rhs: BiPoly,
    pub norm_sq_product: Rational,
    pub norm_sq_factors: Rational,
}

impl P0Product {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.norm_sq_product == self.norm_sq_factors
    }
}

/// `p_0^*[f] = conj(f(0)) / ‖f‖²`.
pub fn p0(f: &BiPoly) -> Result<BiPoly> {
    if f.is_zero() {
        return Err(OpaError::ZeroPolynomial("constant OPA of zero"));
    }
    let c = f.constant_term().conj().scale(&(Rational::one() / f.norm_sq()));
    Ok(BiPoly::constant(c))
}

pub fn p0_product_check(g: &BiPoly, h: &BiPoly) -> Result<P0Product> {
    if !g.depends_only_on_z() {
        return Err(OpaError::NotSeparated("first factor must depend on z only"));
    }
    if !h.depends_only_on_w() {
        return Err(OpaError::NotSeparated("second factor must depend on w only"));
    }
    if g.constant_term().is_zero() || h.constant_term().is_zero() {
        return Err(OpaError::VanishesAtOrigin);
    }
    let f = g.multiply(h);
    Ok(P0Product {
        lhs: p0(&f)?,
        rhs: p0(g)?.multiply(&p0(h)?),
        norm_sq_product: f.norm_sq(),
        norm_sq_factors: g.norm_sq() * h.norm_sq(),
    })
}

/// Roots `α` of the one-variable factors `(z − α)` and `(w − α)` dividing `p`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OneVariableFactors {
    pub z_roots: Vec<Complex64>,
    pub w_roots: Vec<Complex64>,
}

impl OneVariableFactors {
    pub fn moduli(&self) -> Vec<f64> {
        self.z_roots.iter().chain(&self.w_roots).map(|r| r.norm()).collect()
    }

    pub fn min_modulus(&self) -> Option<f64> {
        self.moduli().into_iter().min_by(f64::total_cmp)
    }
}

/// Exact gcd of the coefficient polynomials `c_k(z)` in `p = Σ c_k(z) w^k`.
pub fn z_factor(p: &BiPoly) -> UniPoly {
    p.coefficients_in_w()
        .into_iter()
        .map(UniPoly::new)
        .fold(UniPoly::zero(), |acc, c| acc.gcd(&c))
}

pub fn one_variable_factor_roots(p: &BiPoly) -> Result<OneVariableFactors> {
    if p.is_zero() {
        return Err(OpaError::ZeroPolynomial("factor roots of zero"));
    }
    let roots_of = |u: UniPoly| -> Result<Vec<Complex64>> {
        if u.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        univariate_roots(&u.to_complex64())
    };
    Ok(OneVariableFactors {
        z_roots: roots_of(z_factor(p))?,
        w_roots: roots_of(z_factor(&p.swap_variables()))?,
    })
}
