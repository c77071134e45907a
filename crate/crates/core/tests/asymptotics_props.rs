use num_complex::Complex64;
use proptest::prelude::*;
use rug::Float;

use cubicmop::asymptotics::{
    big_f, cubic_residual, density_v, density_v_f64, endpoint, endpoint_f64, ks_distance, phi,
    ratio_convergence, stieltjes_empirical, support_distance, DensityModel,
};
use cubicmop::mop::build;
use cubicmop::zeros::{empirical_measure, find_zeros};
use cubicmop::{BigComplex, Error, Precision};

fn p(d: u32) -> Precision {
    Precision::new(d).unwrap()
}

fn c(re: f64, im: f64) -> BigComplex {
    BigComplex::from_f64(re, im, p(50))
}

#[test]
fn origin_and_endpoint_values() {
    let prec = p(50);
    let v0 = density_v(&Float::with_val(prec.bits(), 0)).unwrap();
    assert!((v0.to_f64() - 0.198788).abs() < 1e-6);
    assert!(density_v(&endpoint(prec)).unwrap().abs() < prec.tol(20));
    assert!((endpoint_f64() - 2.25f64.cbrt()).abs() < 1e-15);
}

#[test]
fn total_mass_is_one_third_per_ray() {
    let m = DensityModel::new();
    assert!((3.0 * m.segment_mass() - 1.0).abs() < 1e-10);
}

#[test]
fn density_is_nonnegative_on_a_grid() {
    let m = DensityModel::new();
    for row in m.grid(2001) {
        assert!(row.v >= 0.0, "v({}) = {}", row.x, row.v);
        assert_eq!(row.v3, 3.0 * row.v);
    }
}

#[test]
fn square_root_vanishing_at_the_endpoint() {
    let e = endpoint_f64();
    let pts: Vec<(f64, f64)> = [1e-4, 3e-5, 1e-5, 3e-6, 1e-6]
        .iter()
        .map(|&s: &f64| (s.ln(), density_v_f64(e - s).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((0.45..=0.55).contains(&slope), "{slope}");
}

#[test]
fn large_argument_behaviour() {
    for theta in [0.0f64, 0.5, 1.7, 2.9, -1.2] {
        let x = c(1e3 * theta.cos(), 1e3 * theta.sin());
        let ph = phi(&x).unwrap();
        let r = (&ph / &x.square()).to_c64();
        assert!((r - 1.0).norm() < 1e-5, "theta {theta}: {r}");
        let xf = (&x * &big_f(&x).unwrap()).to_c64();
        assert!((xf - 2.0).norm() < 1e-5, "theta {theta}: {xf}");
    }
}

#[test]
fn phi_is_continuous_along_arcs() {
    for radius in [1.6f64, 2.5, 6.0] {
        let steps = 720;
        let mut prev: Option<Complex64> = None;
        for i in 0..=steps {
            let th = std::f64::consts::TAU * i as f64 / steps as f64;
            let x = Complex64::from_polar(radius, th);
            if support_distance(x) < 1e-3 {
                prev = None;
                continue;
            }
            let v = phi(&c(x.re, x.im)).unwrap().to_c64();
            if let Some(q) = prev {
                // |Phi'| ~ 2|x| away from the support
                assert!((v - q).norm() < 40.0 * radius * radius * std::f64::consts::TAU / steps as f64);
            }
            prev = Some(v);
        }
    }
}

#[test]
fn phi_refuses_points_on_the_support() {
    let w = BigComplex::cis_pi(2, 3, p(50));
    let on = w.scale(&Float::with_val(p(50).bits(), 0.7));
    assert!(matches!(phi(&on), Err(Error::BranchAmbiguity(_))));
    assert!(density_v(&Float::with_val(p(50).bits(), -0.1)).is_err());
}

#[test]
fn stieltjes_transform_of_zeros_approaches_half_f() {
    let prec = p(256);
    let x = Complex64::new(2.0, 1.0);
    let f = big_f(&c(2.0, 1.0)).unwrap().to_c64() / 2.0;
    let mut last = f64::INFINITY;
    for n in [50, 150] {
        let z = find_zeros(&build(n, n, prec).unwrap(), prec).unwrap();
        let s = stieltjes_empirical(&z.roots, z.origin_multiplicity, n, x);
        let d = (s - f).norm();
        assert!(d < 0.02 && d < last, "n = {n}: {d}");
        last = d;
    }
}

#[test]
fn ks_distance_shrinks() {
    let prec = p(120);
    let m = DensityModel::new();
    let mut last = 1.0;
    for n in [30, 90] {
        let z = find_zeros(&build(n, n, prec).unwrap(), prec).unwrap();
        let x = empirical_measure(&z, n);
        let d = ks_distance(&x, &m).unwrap();
        assert!(d < last, "n = {n}: {d}");
        last = d;
    }
    assert!(ks_distance(&[], &m).is_err());
}

#[test]
fn ratio_limit_at_moderate_degree() {
    let prec = p(80);
    for (re, im) in [(2.0, 0.0), (1.0, 1.0)] {
        let x = BigComplex::from_f64(re, im, prec);
        let d40 = ratio_convergence(40, &x, prec).unwrap();
        let d10 = ratio_convergence(10, &x, prec).unwrap();
        assert!(d40 < d10);
        assert!(d40 < 0.1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_solves_the_cubic(r in 1.5f64..20.0, th in -3.1f64..3.1) {
        let x = Complex64::from_polar(r, th);
        prop_assume!(support_distance(x) > 1e-3);
        let bx = c(x.re, x.im);
        let ph = phi(&bx).unwrap();
        prop_assert!(cubic_residual(&bx, &ph) <= p(50).tol(20));
    }

    #[test]
    fn f_commutes_with_conjugation(r in 0.2f64..10.0, th in 0.05f64..3.1) {
        let x = Complex64::from_polar(r, th);
        prop_assume!(support_distance(x) > 1e-3 && support_distance(x.conj()) > 1e-3);
        let a = big_f(&c(x.re, x.im)).unwrap();
        let b = big_f(&c(x.re, -x.im)).unwrap();
        prop_assert!((&a.conj() - &b).abs() <= p(50).tol(15));
    }

    #[test]
    fn f_is_rotation_covariant(r in 0.2f64..10.0, th in 0.05f64..1.0) {
        // the weight is invariant under x -> omega x, so F(omega x) = F(x) / omega
        let x = Complex64::from_polar(r, th);
        let w = BigComplex::cis_pi(2, 3, p(50));
        let bx = c(x.re, x.im);
        let rotated = &w * &bx;
        prop_assume!(support_distance(x) > 1e-3 && support_distance(rotated.to_c64()) > 1e-3);
        let a = big_f(&bx).unwrap();
        let b = big_f(&rotated).unwrap();
        prop_assert!((&(&b * &w) - &a).abs() <= p(50).tol(15));
    }

    #[test]
    fn cdf_is_monotone(a in 0.0f64..1.31, b in 0.0f64..1.31) {
        let m = DensityModel::new();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(m.cdf(lo) <= m.cdf(hi) + 1e-14);
    }
}
