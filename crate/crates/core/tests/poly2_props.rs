mod common;

use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{bipoly, nonzero_bipoly};
use opa_core::{inner_product, BiPoly, ExponentPair, GaussianRational};

proptest! {
    #[test]
    fn inner_product_is_hermitian(f in bipoly(3, 6), g in bipoly(3, 6)) {
        prop_assert_eq!(inner_product(&f, &g), inner_product(&g, &f).conj());
        let ff = inner_product(&f, &f);
        prop_assert!(ff.is_real());
        prop_assert_eq!(ff.re.clone(), f.norm_sq());
        prop_assert_eq!(f.is_zero(), ff == GaussianRational::default());
    }

    #[test]
    fn monomial_shift_is_isometric(f in bipoly(3, 6), g in bipoly(3, 6), a in 0u32..4, b in 0u32..4) {
        let e = ExponentPair::new(a, b);
        prop_assert_eq!(f.monomial_shift(e).norm_sq(), f.norm_sq());
        prop_assert_eq!(inner_product(&f.monomial_shift(e), &g.monomial_shift(e)), inner_product(&f, &g));
    }

    #[test]
    fn inner_product_matches_torus_average(f in bipoly(3, 6), g in bipoly(3, 6)) {
        // 8 points per circle resolve all exponent differences up to 7.
        let n = 8;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
                let w = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
                sum += f.evaluate_c64(z, w) * g.evaluate_c64(z, w).conj();
            }
        }
        let avg = sum / (n * n) as f64;
        prop_assert!((avg - inner_product(&f, &g).to_complex64()).norm() < 1e-6);
    }

    #[test]
    fn reflection_preserves_modulus_on_torus(p in nonzero_bipoly(3, 6), angles in prop::collection::vec((0.0..TAU, 0.0..TAU), 100)) {
        let r = p.reflect().unwrap();
        prop_assert_eq!(r.norm_sq(), p.norm_sq());
        for (s, t) in angles {
            let z = Complex64::from_polar(1.0, s);
            let w = Complex64::from_polar(1.0, t);
            let lhs = p.evaluate_c64(z, w).norm_sqr();
            let rhs = r.evaluate_c64(z, w).norm_sqr();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs));
        }
    }

    #[test]
    fn reflection_is_an_involution_on_full_corners(p in nonzero_bipoly(3, 6)) {
        let (n, m) = p.bidegree().unwrap();
        let mut q = p.clone();
        q.add_term(ExponentPair::ORIGIN, GaussianRational::from_int(100));
        q.add_term(ExponentPair::new(n, m), GaussianRational::from_int(100));
        prop_assert_eq!(q.reflect().unwrap().reflect().unwrap(), q);
    }

    #[test]
    fn json_round_trip(p in bipoly(4, 8)) {
        prop_assert_eq!(BiPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn multiplication_agrees_with_evaluation(f in bipoly(2, 4), g in bipoly(2, 4), z in common::disk_point(), w in common::disk_point()) {
        let lhs = f.multiply(&g).evaluate(&z, &w);
        let rhs = &f.evaluate(&z, &w) * &g.evaluate(&z, &w);
        prop_assert_eq!(lhs, rhs);
    }
}
