mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{nonzero_bipoly, origin_bipoly, univariate};
use opa_core::innerness::{compose_with_monomial, supported_on_powers};
use opa_core::opa::{solve_opa, solve_opa_in_span};
use opa_core::univariate::UniPoly;
use opa_core::zeros::{classify_bidisk, univariate_roots, ClassifyConfig, Verdict};
use opa_core::{BiPoly, ExponentPair, GaussianRational};

fn light() -> ClassifyConfig {
    ClassifyConfig { torus_samples: 512, disk_grid: 48, ..ClassifyConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn univariate_roots_have_small_residuals(c in prop::collection::vec((-9.0f64..9.0, -9.0f64..9.0), 2..9)) {
        let coeffs: Vec<Complex64> = c.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        prop_assume!(coeffs.last().unwrap().norm() > 1e-3);
        let roots = univariate_roots(&coeffs).unwrap();
        prop_assert_eq!(roots.len(), coeffs.len() - 1);
        let scale = coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for r in roots {
            let v = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * r + a);
            let size = coeffs.iter().enumerate().map(|(k, a)| a.norm() * r.norm().powi(k as i32)).sum::<f64>();
            prop_assert!(v.norm() <= 1e-8 * scale.max(size), "residual {}", v.norm());
        }
    }

    #[test]
    fn univariate_opa_roots_lie_outside_closed_disk(h in univariate(8), n in 1usize..9) {
        let f = compose_with_monomial(&UniPoly::new(h), 1);
        let exps: Vec<ExponentPair> = (0..=n as u32).map(|a| ExponentPair::new(a, 0)).collect();
        let opa = solve_opa_in_span(&f, &exps).unwrap();
        prop_assert!(opa.depends_only_on_z());
        if opa.total_degree().unwrap_or(0) > 0 {
            let (deg, _) = opa.bidegree().unwrap();
            let coeffs: Vec<Complex64> = (0..=deg).map(|a| opa.coeff(ExponentPair::new(a, 0)).to_complex64()).collect();
            for r in univariate_roots(&coeffs).unwrap() {
                prop_assert!(r.norm() > 1.0 + 1e-9, "root modulus {}", r.norm());
            }
        }
    }

    #[test]
    fn classification_is_scale_invariant(p in nonzero_bipoly(2, 4), k in -6i32..6) {
        let c = GaussianRational::real(num_rational::BigRational::from_float(2f64.powi(k)).unwrap());
        let cfg = light();
        let a = classify_bidisk(&p, &cfg).unwrap();
        let b = classify_bidisk(&p.scale(&c), &cfg).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.margin.to_bits(), b.margin.to_bits());
    }

    #[test]
    fn classification_is_deterministic(p in origin_bipoly(2, 4)) {
        let cfg = light();
        prop_assert_eq!(classify_bidisk(&p, &cfg).unwrap(), classify_bidisk(&p, &cfg).unwrap());
    }

    #[test]
    fn open_zero_witnesses_are_inside(p in nonzero_bipoly(2, 4)) {
        let r = classify_bidisk(&p, &light()).unwrap();
        if r.verdict == Verdict::ZeroInOpenBidisk {
            let w = r.witness.unwrap();
            prop_assert!(w.z().norm() < 1.0 && w.w().norm() < 1.0);
            let scale = p.terms().map(|(_, c)| c.to_complex64().norm()).fold(0.0, f64::max);
            prop_assert!(p.evaluate_c64(w.z(), w.w()).norm() < 1e-6 * scale);
        }
    }

    #[test]
    fn disguised_univariate_opas(h in univariate(3), k in 1u64..10, n in 0usize..12) {
        let f = compose_with_monomial(&UniPoly::new(h), k);
        let opa = solve_opa(&f, n).unwrap().poly;
        prop_assert!(supported_on_powers(&opa, k));
        prop_assert_eq!(classify_bidisk(&opa, &light()).unwrap().verdict, Verdict::StronglyStable);
    }
}

#[test]
fn products_of_stable_factors_stay_stable() {
    let a = BiPoly::from_int_terms(&[(0, 0, 3), (1, 0, 1)]);
    let b = BiPoly::from_int_terms(&[(0, 0, 4), (0, 1, -1), (1, 1, 1)]);
    let r = classify_bidisk(&a.multiply(&b), &ClassifyConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::StronglyStable);
    assert!((r.margin - 1.0).abs() < 1e-6);
}
