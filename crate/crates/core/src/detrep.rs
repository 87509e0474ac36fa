//! Determinantal representations `p(z, w) = α · det(I − C D)` with
//! `D = diag(z, …, z, w, …, w)`.
//!
//! The expansion uses principal minors: for diagonal `D` the principal minor of
//! `C D` on an index set `S` is `det C[S, S] · Π_{j ∈ S} d_j`, so
//! `det(I − C D) = Σ_S (−1)^{|S|} det C[S, S] z^{|S ∩ Z|} w^{|S ∩ W|}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OpaError, Result};
use crate::gaussian::{rationalize, GaussianRational};
use crate::poly2::{BiPoly, ExponentPair};

/// Largest dimension accepted by [`expand`]; the enumeration is `2ⁿ` minors.
pub const MAX_EXPAND_DIM: usize = 20;

/// Coefficients below this magnitude (per real and imaginary part) are dropped.
pub const COEFF_TRIM: f64 = 1e-12;

/// Tolerance used when rationalizing expanded coefficients.
pub const RATIONALIZE_TOL: f64 = 1e-13;

/// Float coefficients keyed by `(deg_z, deg_w)`.
pub type CoeffMap = BTreeMap<(u32, u32), Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct DetRep {
    pub alpha: Complex64,
    pub c: DMatrix<Complex64>,
    /// `(nz, nw)`: the first `nz` diagonal entries of `D` are `z`, the rest `w`.
    pub split: (usize, usize),
}

impl DetRep {
    pub fn new(alpha: Complex64, c: DMatrix<Complex64>, split: (usize, usize)) -> Result<Self> {
        if !c.is_square() {
            return Err(OpaError::InvalidArgument("representation matrix must be square".into()));
        }
        if split.0 + split.1 != c.nrows() {
            return Err(OpaError::InvalidArgument(format!(
                "split {}+{} does not match dimension {}",
                split.0,
                split.1,
                c.nrows()
            )));
        }
        Ok(Self { alpha, c, split })
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    fn diagonal(&self, z: Complex64, w: Complex64) -> Vec<Complex64> {
        (0..self.dim()).map(|i| if i < self.split.0 { z } else { w }).collect()
    }

    /// Direct numeric `α · det(I − C D)` at a point.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Complex64 {
        let n = self.dim();
        let d = self.diagonal(z, w);
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let id = if i == j { Complex64::one() } else { Complex64::zero() };
            id - self.c[(i, j)] * d[j]
        });
        self.alpha * m.determinant()
    }
}

fn principal_minor(c: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
    match idx.len() {
        0 => Complex64::one(),
        1 => c[(idx[0], idx[0])],
        2 => c[(idx[0], idx[0])] * c[(idx[1], idx[1])] - c[(idx[0], idx[1])] * c[(idx[1], idx[0])],
        k => DMatrix::<Complex64>::from_fn(k, k, |i, j| c[(idx[i], idx[j])]).determinant(),
    }
}

fn accumulate_range(rep: &DetRep, range: std::ops::Range<u64>) -> CoeffMap {
    let n = rep.dim();
    let mut out = CoeffMap::new();
    let mut idx = Vec::with_capacity(n);
    for mask in range {
        idx.clear();
        idx.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let nz = idx.iter().filter(|&&i| i < rep.split.0).count() as u32;
        let nw = idx.len() as u32 - nz;
        let sign = if idx.len() % 2 == 0 { 1.0 } else { -1.0 };
        let minor = principal_minor(&rep.c, &idx);
        *out.entry((nz, nw)).or_insert_with(Complex64::zero) += minor * sign;
    }
    out
}

/// Float coefficients of `α · det(I − C D)`, trimmed below [`COEFF_TRIM`].
pub fn expand_coefficients(rep: &DetRep) -> Result<CoeffMap> {
    let n = rep.dim();
    if n > MAX_EXPAND_DIM {
        return Err(OpaError::InvalidArgument(format!("dimension {n} exceeds {MAX_EXPAND_DIM}")));
    }
    if rep.split.0 + rep.split.1 != n {
        return Err(OpaError::InvalidArgument("split does not match dimension".into()));
    }
    let total = 1u64 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(14);
    let ranges: Vec<std::ops::Range<u64>> =
        (0..total).step_by(chunk as usize).map(|s| s..(s + chunk).min(total)).collect();
    // Per-chunk maps merged in chunk order keep the summation order fixed.
    let partial: Vec<CoeffMap> = ranges.into_par_iter().map(|r| accumulate_range(rep, r)).collect();
    let mut out = CoeffMap::new();
    for m in partial {
        for (k, v) in m {
            *out.entry(k).or_insert_with(Complex64::zero) += v;
        }
    }
    let trim = |x: f64| if x.abs() < COEFF_TRIM { 0.0 } else { x };
    Ok(out
        .into_iter()
        .map(|(k, v)| {
            let v = v * rep.alpha;
            (k, Complex64::new(trim(v.re), trim(v.im)))
        })
        .filter(|(_, v)| *v != Complex64::zero())
        .collect())
}

/// Rationalizes float coefficients to the simplest rationals within `tol`.
pub fn rationalize_coefficients(coeffs: &CoeffMap, tol: f64) -> Result<BiPoly> {
    let mut p = BiPoly::zero();
    for (&(a, b), v) in coeffs {
        let re = rationalize(v.re, tol).ok_or_else(|| OpaError::InvalidArgument("non-finite coefficient".into()))?;
        let im = rationalize(v.im, tol).ok_or_else(|| OpaError::InvalidArgument("non-finite coefficient".into()))?;
        p.add_term(ExponentPair::new(a, b), GaussianRational::new(re, im));
    }
    Ok(p)
}

/// `α · det(I − C D)` as an exact polynomial with rationalized coefficients.
pub fn expand(rep: &DetRep) -> Result<BiPoly> {
    rationalize_coefficients(&expand_coefficients(rep)?, RATIONALIZE_TOL)
}

/// Largest singular value.
pub fn operator_norm(c: &DMatrix<Complex64>) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    c.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Deterministic random complex matrix rescaled to operator norm `norm_cap`.
pub fn sample_strict_contraction(n: usize, seed: u64, norm_cap: f64) -> Result<DMatrix<Complex64>> {
    if !(norm_cap > 0.0 && norm_cap < 1.0) {
        return Err(OpaError::InvalidArgument(format!("norm cap {norm_cap} must lie in (0, 1)")));
    }
    if n == 0 {
        return Err(OpaError::InvalidArgument("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let norm = operator_norm(&m);
    Ok(m * Complex64::new(norm_cap / norm, 0.0))
}

/// Pads `C` with `extra` zero rows and columns inside the z-block; the
/// determinant, hence the expansion, is unchanged.
pub fn augment(rep: &DetRep, extra: usize) -> DetRep {
    let n = rep.dim();
    let nz = rep.split.0;
    let map = |i: usize| -> Option<usize> {
        if i < nz {
            Some(i)
        } else if i < nz + extra {
            None
        } else {
            Some(i - extra)
        }
    };
    let c = DMatrix::<Complex64>::from_fn(n + extra, n + extra, |i, j| match (map(i), map(j)) {
        (Some(a), Some(b)) => rep.c[(a, b)],
        _ => Complex64::zero(),
    });
    DetRep { alpha: rep.alpha, c, split: (nz + extra, rep.split.1) }
}

/// Block-diagonal combination whose determinant is the product of the two,
/// with the z-blocks of both placed before the w-blocks.
pub fn combine(a: &DetRep, b: &DetRep) -> DetRep {
    let (az, aw) = a.split;
    let (bz, bw) = b.split;
    // new index -> (which, old index)
    let order: Vec<(bool, usize)> = (0..az)
        .map(|i| (true, i))
        .chain((0..bz).map(|i| (false, i)))
        .chain((az..az + aw).map(|i| (true, i)))
        .chain((bz..bz + bw).map(|i| (false, i)))
        .collect();
    let n = order.len();
    let c = DMatrix::<Complex64>::from_fn(n, n, |i, j| match (order[i], order[j]) {
        ((true, p), (true, q)) => a.c[(p, q)],
        ((false, p), (false, q)) => b.c[(p, q)],
        _ => Complex64::zero(),
    });
    DetRep { alpha: a.alpha * b.alpha, c, split: (az + bz, aw + bw) }
}

/// Product of two float coefficient maps.
pub fn multiply_coefficients(p: &CoeffMap, q: &CoeffMap) -> CoeffMap {
    let mut out = CoeffMap::new();
    for (&(a1, b1), x) in p {
        for (&(a2, b2), y) in q {
            *out.entry((a1 + a2, b1 + b2)).or_insert_with(Complex64::zero) += x * y;
        }
    }
    out
}

/// Largest coefficientwise difference between two maps.
pub fn max_coefficient_gap(p: &CoeffMap, q: &CoeffMap) -> f64 {
    p.keys()
        .chain(q.keys())
        .map(|k| {
            let x = p.get(k).copied().unwrap_or_default();
            let y = q.get(k).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

/// Row-major complex matrix as `[[[re, im], …], …]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let n = self.0.len();
        if self.0.iter().any(|row| row.len() != n) {
            return Err(OpaError::InvalidArgument("matrix must be square".into()));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| Complex64::new(self.0[i][j][0], self.0[i][j][1])))
    }

    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        MatrixJson((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }
}
