#![allow(dead_code)]

use proptest::prelude::*;

use opa_core::{BiPoly, ExponentPair, GaussianRational};

pub fn rational(height: i64) -> impl Strategy<Value = GaussianRational> {
    (-height..=height, 1..=height).prop_map(|(n, d)| GaussianRational::ratio(n, d))
}

pub fn gaussian(height: i64) -> impl Strategy<Value = GaussianRational> {
    (rational(height), rational(height)).prop_map(|(re, im)| &re + &(&im * &GaussianRational::i()))
}

/// Sparse polynomial with exponents up to `deg` in each variable.
pub fn bipoly(deg: u32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0..=deg, 0..=deg), gaussian(6)), 1..=max_terms)
        .prop_map(|terms| BiPoly::from_terms(terms.into_iter().map(|((a, b), c)| (ExponentPair::new(a, b), c))))
}

pub fn nonzero_bipoly(deg: u32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    bipoly(deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Nonzero at the origin.
pub fn origin_bipoly(deg: u32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    (bipoly(deg, max_terms), gaussian(6).prop_filter("nonzero", |c| *c != GaussianRational::default()))
        .prop_map(|(mut p, c)| {
            let cur = p.constant_term();
            p.add_term(ExponentPair::ORIGIN, &c - &cur);
            p
        })
}

/// Gaussian rational strictly inside the unit disk.
pub fn disk_point() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, -9i64..=9).prop_map(|(a, b)| GaussianRational::from_ratios((a, 13), (b, 13)))
}

/// Univariate coefficients `[c0, ..., cd]` with `c0 ≠ 0`.
pub fn univariate(max_deg: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
    (rational(8).prop_filter("nonzero", |c| *c != GaussianRational::default()), prop::collection::vec(rational(8), 0..=max_deg))
        .prop_map(|(c0, rest)| std::iter::once(c0).chain(rest).collect())
}
