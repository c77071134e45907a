use num_complex::Complex64;
use proptest::prelude::*;
use rug::Float;

use cubicmop::mop::{build, diagonal_rational};
use cubicmop::zeros::{
    classify, companion_roots_f64, conjugate_mirror_distance, expected_origin_multiplicity,
    expected_positive_count, find_zeros, interlace_check, interlace_sorted, positive_real_zeros,
    ray_class, rotation_symmetry_check, RayClass, DEFAULT_TOL_ARG,
};
use cubicmop::{BigComplex, Polynomial, Precision};

fn p(d: u32) -> Precision {
    Precision::new(d).unwrap()
}

fn hausdorff_f64(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|u| y.iter().map(|v| (u - v).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

#[test]
fn mod_three_table() {
    let pos: Vec<usize> = (0..=8).map(expected_positive_count).collect();
    let orig: Vec<usize> = (0..=8).map(expected_origin_multiplicity).collect();
    assert_eq!(pos, [0, 0, 1, 2, 2, 3, 4, 4, 5]);
    assert_eq!(orig, [0, 2, 1, 0, 2, 1, 0, 2, 1]);
}

#[test]
fn diagonal_structure_small_n() {
    let prec = p(60);
    let mut prev = None;
    for n in 1..=24 {
        let z = find_zeros(&build(n, n, prec).unwrap(), prec).unwrap();
        assert_eq!(z.count(), 2 * n);
        assert_eq!(z.roots.len() + z.origin_multiplicity, 2 * n);
        let rep = classify(&z, DEFAULT_TOL_ARG, Some(n));
        assert_eq!(rep.diagonal_table_ok, Some(true), "n = {n}");
        assert_eq!(rep.off_ray, 0);
        assert!(rotation_symmetry_check(&z) < 1e-20);
        if let Some(q) = &prev {
            assert!(interlace_check(q, &z), "n = {n}");
        }
        prev = Some(z);
    }
}

#[test]
fn origin_multiplicity_is_exact_on_the_rational_path() {
    for n in 0..30 {
        let q = diagonal_rational(n);
        let trailing = q.iter().take_while(|c| c.cmp0().is_eq()).count();
        assert_eq!(trailing, expected_origin_multiplicity(n));
    }
}

#[test]
fn companion_cross_check() {
    let prec = p(60);
    for (k, l) in [(6, 6), (4, 9), (9, 4), (12, 0), (3, 17)] {
        let q = build(k, l, prec).unwrap();
        let z = find_zeros(&q, prec).unwrap();
        let mut mine: Vec<Complex64> = z.roots.iter().map(|r| r.to_c64()).collect();
        mine.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), z.origin_multiplicity));
        let eig = companion_roots_f64(&q).unwrap();
        assert_eq!(eig.len(), mine.len());
        assert!(hausdorff_f64(&mine, &eig) < 1e-6, "({k},{l})");
    }
}

#[test]
fn newton_residuals_are_tiny() {
    let prec = p(60);
    let z = find_zeros(&build(20, 20, prec).unwrap(), prec).unwrap();
    assert!(z.max_newton_residual() < prec.tol(10));
}

#[test]
fn off_diagonal_mirror() {
    let prec = p(60);
    let a = find_zeros(&build(7, 30, prec).unwrap(), prec).unwrap();
    let b = find_zeros(&build(30, 7, prec).unwrap(), prec).unwrap();
    let d = conjugate_mirror_distance(&a, &b).unwrap();
    assert!(d < 1e-20);
    let ra = classify(&a, DEFAULT_TOL_ARG, None);
    let rb = classify(&b, DEFAULT_TOL_ARG, None);
    assert_eq!(ra.line_counts[1], 7);
    assert_eq!(ra.off_ray_lower, 30);
    assert_eq!(rb.line_counts[2], 7);
    assert_eq!(rb.off_ray_upper, 30);
}

#[test]
fn one_sided_polynomial_has_an_s_curve() {
    let prec = p(60);
    let z = find_zeros(&build(45, 0, prec).unwrap(), prec).unwrap();
    assert_eq!(z.count(), 45);
    let rep = classify(&z, DEFAULT_TOL_ARG, None);
    assert!(rep.off_ray > 30);
}

#[test]
fn ray_tags() {
    let prec = p(40);
    let w = BigComplex::cis_pi(2, 3, prec);
    assert_eq!(ray_class(&BigComplex::from_f64(2.0, 0.0, prec), 1e-10), RayClass::Gamma0);
    assert_eq!(ray_class(&BigComplex::from_f64(-2.0, 0.0, prec), 1e-10), RayClass::MinusGamma0);
    assert_eq!(ray_class(&w, 1e-10), RayClass::Gamma1);
    assert_eq!(ray_class(&-w.conj(), 1e-10), RayClass::MinusGamma2);
    assert_eq!(ray_class(&BigComplex::from_f64(1.0, 1.0, prec), 1e-10), RayClass::OffRay);
    assert_eq!(RayClass::MinusGamma1.line(), Some(1));
    assert_eq!(RayClass::OffRay.line(), None);
}

#[test]
fn interlace_negative_control() {
    let f = |v: &[f64]| v.iter().map(|&x| Float::with_val(64, x)).collect::<Vec<_>>();
    assert!(interlace_sorted(&f(&[3.0, 1.0]), &f(&[3.5, 2.0, 0.5])));
    assert!(!interlace_sorted(&f(&[3.0, 1.0]), &f(&[3.5, 0.8, 0.5])));
}

#[test]
fn positive_zeros_descend() {
    let prec = p(60);
    let z = find_zeros(&build(30, 30, prec).unwrap(), prec).unwrap();
    let pos = positive_real_zeros(&z, DEFAULT_TOL_ARG);
    assert_eq!(pos.len(), expected_positive_count(30));
    assert!(pos.windows(2).all(|w| w[0] > w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn roots_of_products_are_recovered(rs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12)) {
        let prec = p(50);
        let mut q = Polynomial::one(prec);
        for &(a, b) in &rs {
            let r = BigComplex::from_f64(a, b, prec);
            let neg = -r;
            q = q.shift_up().add_scaled(&q, &neg);
        }
        // skip nearly repeated roots, whose conditioning the tolerance does not cover
        let mut min_gap = f64::INFINITY;
        for i in 0..rs.len() {
            for j in 0..i {
                let d = ((rs[i].0 - rs[j].0).powi(2) + (rs[i].1 - rs[j].1).powi(2)).sqrt();
                min_gap = min_gap.min(d);
            }
        }
        prop_assume!(min_gap > 1e-3);
        let z = find_zeros(&q, prec).unwrap();
        let mut got: Vec<Complex64> = z.roots.iter().map(|r| r.to_c64()).collect();
        got.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), z.origin_multiplicity));
        let want: Vec<Complex64> = rs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        prop_assert_eq!(got.len(), want.len());
        prop_assert!(hausdorff_f64(&got, &want) < 1e-12);
    }
}
