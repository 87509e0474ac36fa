//! Sparse bivariate polynomials over the Gaussian rationals.
//!
//! Monomials `z^a w^b` are enumerated in degree-lexicographic order
//! `1, z, w, z², zw, w², …`; the position of a monomial in that list is its
//! χ-index (see [`chi_index`]). The Hardy space inner product on the bidisk is
//! the coefficientwise pairing `Σ c_f · conj(c_g)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OpaError, Result};
use crate::gaussian::{format_rational, parse_rational, GaussianRational, Rational};

/// Exponents of the monomial `z^a w^b`.
///
/// Ordered by total degree, ties broken by the power of `w`, which is the
/// χ-ordering.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExponentPair {
    pub a: u32,
    pub b: u32,
}

impl ExponentPair {
    pub const ORIGIN: ExponentPair = ExponentPair { a: 0, b: 0 };

    pub const fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }

    pub fn total_degree(self) -> u32 {
        self.a + self.b
    }

    pub fn chi_index(self) -> u64 {
        chi_index(self)
    }

    pub fn checked_sub(self, other: ExponentPair) -> Option<ExponentPair> {
        Some(ExponentPair::new(self.a.checked_sub(other.a)?, self.b.checked_sub(other.b)?))
    }
}

impl Add for ExponentPair {
    type Output = ExponentPair;
    fn add(self, rhs: ExponentPair) -> ExponentPair {
        ExponentPair::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Ord for ExponentPair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.total_degree(), self.b).cmp(&(other.total_degree(), other.b))
    }
}

impl PartialOrd for ExponentPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Position of `z^a w^b` in the χ-ordering: `t(t+1)/2 + b` with `t = a + b`.
pub fn chi_index(e: ExponentPair) -> u64 {
    let t = u64::from(e.a) + u64::from(e.b);
    t * (t + 1) / 2 + u64::from(e.b)
}

/// Inverse of [`chi_index`].
pub fn chi_exponents(index: u64) -> ExponentPair {
    // Largest t with t(t+1)/2 <= index.
    let mut t = (((8.0 * index as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while t * (t + 1) / 2 > index {
        t -= 1;
    }
    while (t + 1) * (t + 2) / 2 <= index {
        t += 1;
    }
    let b = index - t * (t + 1) / 2;
    ExponentPair::new((t - b) as u32, b as u32)
}

/// Sparse bivariate polynomial in `z`, `w` with exact complex coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct BiPoly {
    terms: BTreeMap<ExponentPair, GaussianRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(ExponentPair::ORIGIN, c)
    }

    pub fn monomial(e: ExponentPair, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn z() -> Self {
        Self::monomial(ExponentPair::new(1, 0), GaussianRational::one())
    }

    pub fn w() -> Self {
        Self::monomial(ExponentPair::new(0, 1), GaussianRational::one())
    }

    /// The monomial `χ_index`.
    pub fn chi(index: u64) -> Self {
        Self::monomial(chi_exponents(index), GaussianRational::one())
    }

    /// Builds a polynomial from `(a, b, coefficient)` triples; repeated exponents accumulate.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentPair, GaussianRational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients `(a, b, c)`.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(a, b, c)| (ExponentPair::new(a, b), GaussianRational::from_int(c))),
        )
    }

    /// Coefficients `c_0 + c_1 χ_1 + … ` listed by χ-index.
    pub fn from_chi_coefficients(coeffs: &[GaussianRational]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (chi_exponents(j as u64), c.clone())),
        )
    }

    pub fn add_term(&mut self, e: ExponentPair, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in χ-order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: ExponentPair) -> GaussianRational {
        self.terms.get(&e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff_ref(&self, e: ExponentPair) -> Option<&GaussianRational> {
        self.terms.get(&e)
    }

    /// `f(0, 0)`.
    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(ExponentPair::ORIGIN)
    }

    /// Componentwise maximal exponents `(deg_z, deg_w)`; `None` for the zero polynomial.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        Some(self.terms.keys().fold((0, 0), |(n, m), e| (n.max(e.a), m.max(e.b))))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    /// Largest χ-index in the support.
    pub fn max_chi_index(&self) -> Option<u64> {
        self.terms.keys().next_back().map(|e| chi_index(*e))
    }

    pub fn depends_only_on_z(&self) -> bool {
        self.terms.keys().all(|e| e.b == 0)
    }

    pub fn depends_only_on_w(&self) -> bool {
        self.terms.keys().all(|e| e.a == 0)
    }

    /// `‖p‖² = Σ |c|²`.
    pub fn norm_sq(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c.norm_sq())
    }

    pub fn scale(&self, c: &GaussianRational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Coefficientwise complex conjugate.
    pub fn conj(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect() }
    }

    /// `z^a w^b · p`.
    pub fn monomial_shift(&self, e: ExponentPair) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k + e, v.clone())).collect() }
    }

    pub fn multiply(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(*e1 + *e2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        (0..n).fold(BiPoly::one(), |acc, _| acc.multiply(self))
    }

    /// Exact evaluation, Horner in `w` over Horner-evaluated coefficient polynomials in `z`.
    pub fn evaluate(&self, z0: &GaussianRational, w0: &GaussianRational) -> GaussianRational {
        let Some((n, m)) = self.bidegree() else {
            return GaussianRational::zero();
        };
        let mut acc_w = GaussianRational::zero();
        for b in (0..=m).rev() {
            let mut acc_z = GaussianRational::zero();
            for a in (0..=n).rev() {
                acc_z = &acc_z * z0;
                if let Some(c) = self.terms.get(&ExponentPair::new(a, b)) {
                    acc_z += c;
                }
            }
            acc_w = &(&acc_w * w0) + &acc_z;
        }
        acc_w
    }

    /// Floating point evaluation of the exactly stored polynomial.
    pub fn evaluate_c64(&self, z0: Complex64, w0: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_complex64() * z0.powu(e.a) * w0.powu(e.b))
            .sum()
    }

    /// Reflection `z^n w^m · conj(p(1/z̄, 1/w̄))` for bidegree `(n, m)`.
    pub fn reflect(&self) -> Result<BiPoly> {
        let (n, m) = self.bidegree().ok_or(OpaError::ZeroPolynomial("reflection of zero"))?;
        Ok(BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (ExponentPair::new(n - e.a, m - e.b), c.conj()))
                .collect(),
        })
    }

    /// Coefficient polynomials `c_k(z)` of `p = Σ_k c_k(z) w^k`, as dense vectors in `z`.
    pub fn coefficients_in_w(&self) -> Vec<Vec<GaussianRational>> {
        let Some((n, m)) = self.bidegree() else {
            return Vec::new();
        };
        let mut out = vec![vec![GaussianRational::zero(); n as usize + 1]; m as usize + 1];
        for (e, c) in &self.terms {
            out[e.b as usize][e.a as usize] = c.clone();
        }
        out
    }

    /// Swaps the roles of `z` and `w`.
    pub fn swap_variables(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (ExponentPair::new(e.b, e.a), c.clone())).collect() }
    }
}

/// Hardy space inner product `⟨f, g⟩ = Σ c_f · conj(c_g)` over shared exponents.
pub fn inner_product(f: &BiPoly, g: &BiPoly) -> GaussianRational {
    let (small, large, swapped) = if f.len() <= g.len() { (f, g, false) } else { (g, f, true) };
    let mut acc = GaussianRational::zero();
    for (e, c) in &small.terms {
        if let Some(d) = large.terms.get(e) {
            if swapped {
                acc += &(d * &c.conj());
            } else {
                acc += &(c * &d.conj());
            }
        }
    }
    acc
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.multiply(rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match (e.a, e.b) {
                (0, 0) => {}
                (a, 0) => write!(f, "·z^{a}")?,
                (0, b) => write!(f, "·w^{b}")?,
                (a, b) => write!(f, "·z^{a}w^{b}")?,
            }
        }
        Ok(())
    }
}

/// One term of the canonical polynomial JSON format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub a: u32,
    pub b: u32,
    pub re: String,
    pub im: String,
}

/// Canonical polynomial JSON: `{"terms":[{"a":..,"b":..,"re":"p/q","im":"p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

impl From<&BiPoly> for PolyJson {
    fn from(p: &BiPoly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    a: e.a,
                    b: e.b,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for BiPoly {
    type Error = OpaError;
    fn try_from(j: &PolyJson) -> Result<BiPoly> {
        let mut p = BiPoly::zero();
        for t in &j.terms {
            let c = GaussianRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            p.add_term(ExponentPair::new(t.a, t.b), c);
        }
        Ok(p)
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        BiPoly::try_from(&j).map_err(serde::de::Error::custom)
    }
}

impl BiPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial JSON serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<BiPoly> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_z_minus_w() -> BiPoly {
        BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1), (0, 1, -1)])
    }

    #[test]
    fn chi_index_examples() {
        assert_eq!(chi_index(ExponentPair::new(0, 0)), 0);
        assert_eq!(chi_index(ExponentPair::new(1, 0)), 1);
        assert_eq!(chi_index(ExponentPair::new(0, 1)), 2);
        assert_eq!(chi_index(ExponentPair::new(2, 0)), 3);
        assert_eq!(chi_index(ExponentPair::new(1, 1)), 4);
        assert_eq!(chi_index(ExponentPair::new(0, 2)), 5);
    }

    #[test]
    fn chi_bijection_is_exhaustive_to_ten_thousand() {
        for k in 0..=10_000u64 {
            assert_eq!(chi_index(chi_exponents(k)), k);
        }
        for t in 0..=140u32 {
            for b in 0..=t {
                let e = ExponentPair::new(t - b, b);
                assert_eq!(chi_exponents(chi_index(e)), e);
            }
        }
    }

    #[test]
    fn ordering_matches_chi_index() {
        let mut es: Vec<_> = (0..200).map(chi_exponents).collect();
        es.reverse();
        es.sort();
        let idx: Vec<u64> = es.iter().map(|e| chi_index(*e)).collect();
        assert_eq!(idx, (0..200).collect::<Vec<_>>());
    }

    #[test]
    fn inner_product_examples() {
        let f = one_minus_z_minus_w();
        assert_eq!(inner_product(&f, &f), GaussianRational::from_int(3));
        let zf = f.monomial_shift(ExponentPair::new(1, 0));
        assert_eq!(inner_product(&f, &zf), GaussianRational::from_int(-1));
        assert_eq!(inner_product(&f, &BiPoly::zero()), GaussianRational::zero());
    }

    #[test]
    fn inner_product_conjugates_second_slot() {
        let i = GaussianRational::i();
        let f = BiPoly::constant(i.clone());
        let g = BiPoly::one();
        assert_eq!(inner_product(&f, &g), i);
        assert_eq!(inner_product(&g, &f), i.conj());
    }

    #[test]
    fn multiplication_examples() {
        let one_minus_z = BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1)]);
        let one_minus_w = BiPoly::from_int_terms(&[(0, 0, 1), (0, 1, -1)]);
        assert_eq!(
            &one_minus_z * &one_minus_w,
            BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 1)])
        );
        let f = one_minus_z_minus_w();
        assert_eq!(&f * &BiPoly::one(), f);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn shift_is_isometric() {
        let f = one_minus_z_minus_w();
        let zf = f.monomial_shift(ExponentPair::new(1, 0));
        assert_eq!(zf, BiPoly::from_int_terms(&[(1, 0, 1), (2, 0, -1), (1, 1, -1)]));
        // brute-force coefficient sum
        let brute: i64 = [1i64, -1, -1].iter().map(|c| c * c).sum();
        assert_eq!(zf.norm_sq(), Rational::from_integer(brute.into()));
        assert_eq!(zf.norm_sq(), f.norm_sq());
    }

    #[test]
    fn evaluation_examples() {
        let f = one_minus_z_minus_w();
        let zero = GaussianRational::zero();
        assert_eq!(f.evaluate(&zero, &zero), GaussianRational::one());
        let g = BiPoly::from_int_terms(&[(0, 0, 2), (1, 0, -1), (0, 1, -1)]);
        let one = GaussianRational::one();
        assert!(g.evaluate(&one, &one).is_zero());
        let h = BiPoly::from_int_terms(&[(0, 0, 1), (1, 1, -1)]);
        let half = GaussianRational::ratio(1, 2);
        assert_eq!(h.evaluate(&half, &half), GaussianRational::ratio(3, 4));
        // cross-check by repeated multiplication
        let manual = &GaussianRational::one() - &(&half * &half);
        assert_eq!(manual, GaussianRational::ratio(3, 4));
    }

    #[test]
    fn evaluation_with_gaps_and_complex_points() {
        let p = BiPoly::from_int_terms(&[(3, 0, 2), (0, 2, -5), (2, 1, 7)]);
        let z0 = GaussianRational::from_ratios((1, 2), (1, 3));
        let w0 = GaussianRational::from_ratios((-2, 5), (3, 4));
        let direct: GaussianRational = p
            .terms()
            .map(|(e, c)| c * &(&z0.pow(e.a) * &w0.pow(e.b)))
            .sum();
        assert_eq!(p.evaluate(&z0, &w0), direct);
    }

    #[test]
    fn reflection_examples() {
        let f = one_minus_z_minus_w();
        let r = f.reflect().unwrap();
        assert_eq!(r, BiPoly::from_int_terms(&[(1, 1, 1), (0, 1, -1), (1, 0, -1)]));
        assert_eq!(r.norm_sq(), f.norm_sq());
        let mono = BiPoly::monomial(ExponentPair::new(3, 2), GaussianRational::one());
        assert_eq!(mono.reflect().unwrap(), BiPoly::one());
        let full = BiPoly::from_int_terms(&[(0, 0, 2), (1, 0, 3), (1, 1, 5)]);
        assert_eq!(full.reflect().unwrap().reflect().unwrap(), full);
        assert!(BiPoly::zero().reflect().is_err());
    }

    #[test]
    fn reflection_conjugates() {
        let p = BiPoly::from_terms([
            (ExponentPair::new(0, 0), GaussianRational::from_ratios((1, 1), (2, 1))),
            (ExponentPair::new(1, 0), GaussianRational::from_int(3)),
        ]);
        let r = p.reflect().unwrap();
        assert_eq!(r.coeff(ExponentPair::new(1, 0)), GaussianRational::from_ratios((1, 1), (-2, 1)));
        assert_eq!(r.coeff(ExponentPair::new(0, 0)), GaussianRational::from_int(3));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let mut p = BiPoly::from_int_terms(&[(1, 0, 2)]);
        p.add_term(ExponentPair::new(1, 0), GaussianRational::from_int(-2));
        assert!(p.is_zero());
        assert_eq!(p, BiPoly::zero());
        assert_eq!(p.bidegree(), None);
    }

    #[test]
    fn json_format() {
        let p = BiPoly::from_terms([
            (ExponentPair::new(0, 0), GaussianRational::ratio(2, 5)),
            (ExponentPair::new(1, 0), GaussianRational::from_ratios((1, 10), (-1, 3))),
        ]);
        let s = p.to_json();
        assert_eq!(
            s,
            r#"{"terms":[{"a":0,"b":0,"re":"2/5","im":"0/1"},{"a":1,"b":0,"re":"1/10","im":"-1/3"}]}"#
        );
        assert_eq!(BiPoly::from_json(&s).unwrap(), p);
        assert!(BiPoly::from_json(r#"{"terms":[{"a":0,"b":0,"re":"0.5","im":"0"}]}"#).is_err());
        assert!(BiPoly::from_json(r#"{"terms":[],"extra":1}"#).is_err());
    }
}
