use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use opa_core::detrep::{
    augment, combine, expand, expand_coefficients, max_coefficient_gap, multiply_coefficients, operator_norm,
    sample_strict_contraction, DetRep,
};
use opa_core::zeros::{classify_bidisk, ClassifyConfig, Verdict};

fn rep(n: usize, nz: usize, seed: u64, cap: f64) -> DetRep {
    let c = sample_strict_contraction(n, seed, cap).unwrap();
    DetRep::new(Complex64::new(1.0, 0.0), c, (nz.min(n), n - nz.min(n))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn expansion_agrees_with_direct_determinant(
        n in 1usize..=8,
        nz in 0usize..=8,
        seed in any::<u64>(),
        zr in -1.2f64..1.2, zi in -1.2f64..1.2, wr in -1.2f64..1.2, wi in -1.2f64..1.2,
    ) {
        let r = rep(n, nz, seed, 0.9);
        let coeffs = expand_coefficients(&r).unwrap();
        let z = Complex64::new(zr, zi);
        let w = Complex64::new(wr, wi);
        let via: Complex64 = coeffs.iter().map(|(&(a, b), c)| c * z.powu(a) * w.powu(b)).sum();
        prop_assert!((via - r.evaluate(z, w)).norm() < 1e-9);
    }

    #[test]
    fn sampled_norms_match_the_cap(n in 1usize..=8, seed in any::<u64>(), cap in 0.01f64..0.999) {
        let c = sample_strict_contraction(n, seed, cap).unwrap();
        prop_assert!((operator_norm(&c) - cap).abs() <= 1e-10 * cap.max(1.0));
    }

    #[test]
    fn augmentation_is_invisible(n in 1usize..=5, nz in 0usize..=5, seed in any::<u64>(), extra in 0usize..4) {
        let r = rep(n, nz, seed, 0.8);
        let a = augment(&r, extra);
        prop_assert_eq!(a.dim(), n + extra);
        prop_assert!(max_coefficient_gap(&expand_coefficients(&a).unwrap(), &expand_coefficients(&r).unwrap()) < 1e-12);
        prop_assert_eq!(expand(&a).unwrap(), expand(&r).unwrap());
    }

    #[test]
    fn block_diagonal_multiplies(n in 1usize..=4, m in 1usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = rep(n, n / 2, s1, 0.7);
        let b = rep(m, m.div_ceil(2), s2, 0.6);
        let lhs = expand_coefficients(&combine(&a, &b)).unwrap();
        let rhs = multiply_coefficients(&expand_coefficients(&a).unwrap(), &expand_coefficients(&b).unwrap());
        prop_assert!(max_coefficient_gap(&lhs, &rhs) < 1e-10);
    }
}

#[test]
fn strict_contractions_give_strongly_stable_polynomials() {
    let cfg = ClassifyConfig::default();
    for seed in 0..50u64 {
        let n = 2 + (seed % 3) as usize;
        let r = rep(n, n - 1, seed, 0.95);
        let p = expand(&r).unwrap();
        let report = classify_bidisk(&p, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::StronglyStable, "seed {seed}: {report:?}");
    }
}

#[test]
fn contraction_with_norm_one_touches_the_torus() {
    let c = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
    let r = DetRep::new(Complex64::new(2.0, 0.0), c, (1, 1)).unwrap();
    let p = expand(&r).unwrap();
    assert_eq!(classify_bidisk(&p, &ClassifyConfig::default()).unwrap().verdict, Verdict::StableNotStrong);
}
