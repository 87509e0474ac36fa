//! Weak innerness, the `pound(k, n)` index map and OPA plateaus for polynomials of
//! a single monomial `χ_k`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{OpaError, Result};
use crate::gaussian::GaussianRational;
use crate::opa::{solve_opa, Autocorrelation};
use crate::poly2::{chi_exponents, chi_index, BiPoly, ExponentPair};
use crate::univariate::UniPoly;

/// `(χ_k)^power = χ_value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PoundIndex {
    pub k: u64,
    pub power: u32,
    pub value: u64,
}

impl PoundIndex {
    pub fn new(k: u64, power: u32) -> Self {
        Self { k, power, value: pound(k, power) }
    }
}

/// χ-index of `(χ_k)^n`.
pub fn pound(k: u64, n: u32) -> u64 {
    let e = chi_exponents(k);
    chi_index(ExponentPair::new(e.a * n, e.b * n))
}

/// First shift `(a, b) ≠ (0, 0)` in the bidegree box with `⟨f, z^a w^b f⟩ ≠ 0`.
///
/// Shifts outside the box cannot overlap the support, so `None` means `f` is
/// weakly inner.
pub fn weak_inner_failure(f: &BiPoly) -> Result<Option<ExponentPair>> {
    let (n, m) = f.bidegree().ok_or(OpaError::ZeroPolynomial("weak innerness of zero"))?;
    let auto = Autocorrelation::of(f);
    let mut shifts: Vec<ExponentPair> = (0..=n)
        .flat_map(|a| (0..=m).map(move |b| ExponentPair::new(a, b)))
        .filter(|e| *e != ExponentPair::ORIGIN)
        .collect();
    shifts.sort();
    Ok(shifts.into_iter().find(|e| !auto.shift(*e).is_zero()))
}

pub fn is_weakly_inner(f: &BiPoly) -> Result<bool> {
    Ok(weak_inner_failure(f)?.is_none())
}

/// Exact innerness for polynomials: a unimodular constant times a monomial.
pub fn is_inner(f: &BiPoly) -> bool {
    f.len() == 1 && f.terms().all(|(_, c)| c.norm_sq().is_one())
}

/// Largest χ-index inside the bidegree box; constant OPAs up to here force weak innerness.
pub fn bidegree_complete_index(f: &BiPoly) -> Option<usize> {
    f.bidegree().map(|(n, m)| chi_index(ExponentPair::new(n, m)) as usize)
}

/// `true` iff `p_n^*[f] = p_0^*[f]` for every `n ≤ n_max`.
pub fn constant_opa_check(f: &BiPoly, n_max: usize) -> Result<bool> {
    if f.constant_term().is_zero() {
        return Err(OpaError::VanishesAtOrigin);
    }
    let base = solve_opa(f, 0)?.poly;
    for n in 1..=n_max {
        if solve_opa(f, n)?.poly != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h(χ_k)` for a univariate `h`.
pub fn compose_with_monomial(h: &UniPoly, k: u64) -> BiPoly {
    let e = chi_exponents(k);
    let mut out = BiPoly::zero();
    for (j, c) in h.coeffs().iter().enumerate() {
        let j = j as u32;
        out.add_term(ExponentPair::new(e.a * j, e.b * j), c.clone());
    }
    out
}

/// Reads a univariate polynomial stored as a [`BiPoly`] in `z` alone.
pub fn univariate_from_bipoly(p: &BiPoly) -> Result<UniPoly> {
    if !p.depends_only_on_z() {
        return Err(OpaError::InvalidArgument("univariate polynomial must only use the first variable".into()));
    }
    let deg = p.bidegree().map_or(0, |(n, _)| n as usize);
    let mut coeffs = vec![GaussianRational::zero(); deg + 1];
    for (e, c) in p.terms() {
        coeffs[e.a as usize] = c.clone();
    }
    Ok(UniPoly::new(coeffs))
}

/// Whether a polynomial only uses powers of `χ_k` (including the constant).
pub fn supported_on_powers(p: &BiPoly, k: u64) -> bool {
    let base = chi_exponents(k);
    p.terms().all(|(e, _)| {
        if *e == ExponentPair::ORIGIN {
            return true;
        }
        if base == ExponentPair::ORIGIN {
            return false;
        }
        // e = j · base for some j ≥ 1
        let j = e.a.checked_div(base.a).unwrap_or_else(|| e.b / base.b);
        j > 0 && e.a == j * base.a && e.b == j * base.b
    })
}

/// One plateau `p_N = p_start` for `N ∈ [start, end]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plateau {
    pub power: u32,
    pub start: u64,
    pub end: u64,
    pub poly: BiPoly,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlateauReport {
    pub f: BiPoly,
    pub k: u64,
    pub plateaus: Vec<Plateau>,
    pub holds: bool,
}

/// With `f = h(χ_k)`, checks `p_N^*[f] = p_{pound(k,j)}^*[f]` for each `j ≤ j_max`
/// and every `N ∈ [pound(k,j), pound(k,j+1) − 1]`.
pub fn plateau_check(h: &UniPoly, k: u64, j_max: u32) -> Result<PlateauReport> {
    if h.coeff(0).is_zero() {
        return Err(OpaError::VanishesAtOrigin);
    }
    let f = compose_with_monomial(h, k);
    let mut plateaus = Vec::new();
    for j in 0..=j_max {
        let start = pound(k, j);
        let stop = pound(k, j + 1);
        if stop <= start {
            // k = 0: every power of χ_0 is χ_0 and the range is empty.
            continue;
        }
        let base = solve_opa(&f, start as usize)?.poly;
        let mut holds = true;
        for n in start + 1..stop {
            if solve_opa(&f, n as usize)?.poly != base {
                holds = false;
                break;
            }
        }
        plateaus.push(Plateau { power: j, start, end: stop - 1, poly: base, holds });
    }
    let holds = plateaus.iter().all(|p| p.holds);
    Ok(PlateauReport { f, k, plateaus, holds })
}
