//! Dense univariate polynomials with exact coefficients.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;

/// `c[0] + c[1] u + … + c[d] u^d`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<GaussianRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn to_complex64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex64).collect()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let factor = &r[top] * &lead_inv;
            if !factor.is_zero() {
                let shift = top - dd;
                for (k, c) in d.coeffs.iter().enumerate() {
                    let t = &factor * c;
                    r[shift + k] -= &t;
                }
            }
            r.pop();
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn multiply(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn one() -> Self {
        Self::new(vec![GaussianRational::one()])
    }

    /// Coefficients of `t ↦ p(c + t)`.
    pub fn taylor_shift(&self, c: &GaussianRational) -> UniPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += &t;
            }
        }
        UniPoly::new(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_shared_factor() {
        let a = UniPoly::from_ints(&[-2, 1]).multiply(&UniPoly::from_ints(&[1, 1]));
        let b = UniPoly::from_ints(&[-2, 1]).multiply(&UniPoly::from_ints(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[-2, 1]));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = UniPoly::from_ints(&[1, 1]);
        let b = UniPoly::from_ints(&[1]);
        assert_eq!(a.gcd(&b), UniPoly::one());
        assert_eq!(UniPoly::zero().gcd(&a), a.monic());
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = UniPoly::new(vec![
            GaussianRational::from_ratios((1, 2), (1, 1)),
            GaussianRational::from_int(-3),
            GaussianRational::from_int(0),
            GaussianRational::from_ratios((2, 7), (-1, 5)),
        ]);
        let c = GaussianRational::from_ratios((1, 3), (1, 4));
        let shifted = p.taylor_shift(&c);
        assert_eq!(shifted.coeff(0), p.evaluate(&c));
        let t = GaussianRational::from_ratios((-5, 6), (2, 9));
        assert_eq!(shifted.evaluate(&t), p.evaluate(&(&c + &t)));
    }

    #[test]
    fn evaluation() {
        let p = UniPoly::from_ints(&[3, 0, 2]);
        assert_eq!(p.evaluate(&GaussianRational::from_int(2)), GaussianRational::from_int(11));
        assert_eq!(UniPoly::from_ints(&[1, 2, 0, 0]).degree(), Some(1));
    }
}
