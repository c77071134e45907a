use rug::Float;

use cubicmop::coeffs::general_t_sequence;
use cubicmop::moments::ContourPair;
use cubicmop::painleve::{
    alt_dpi_residual, compat_residual_s1, compat_residual_s2, moment_derivative_residual,
    moment_ode_residual, pii_residual, pii_standard_residual, s2_from, tau_identity_check,
    toda_residual, verification_report,
};
use cubicmop::{BigComplex, Error, Precision};

fn p(d: u32) -> Precision {
    Precision::new(d).unwrap()
}

fn f(x: f64) -> Float {
    Float::with_val(p(60).bits(), x)
}

fn ratio(a: &Float, b: &Float) -> f64 {
    Float::with_val(64, a / b).to_f64()
}

#[test]
fn compatibility_conditions_hold() {
    let prec = p(60);
    let xs = [BigComplex::from_f64(0.3, -0.7, prec), BigComplex::from_f64(-2.0, 0.5, prec)];
    for pair in [ContourPair::G01, ContourPair::G02] {
        for tv in [0.0, 0.5, -0.5] {
            for n in 1..=8 {
                let s1 = compat_residual_s1(n, &f(tv), &xs, pair, prec).unwrap();
                let s2 = compat_residual_s2(n, &f(tv), &xs, pair, prec).unwrap();
                assert!(s1 <= prec.tol(15) && s2 <= prec.tol(15), "n = {n}, t = {tv}");
            }
        }
    }
    assert!(compat_residual_s2(0, &f(0.0), &xs, ContourPair::G01, prec).is_err());
}

#[test]
fn s2_detects_perturbation() {
    let prec = p(60);
    let s = general_t_sequence(6, ContourPair::G01, &f(0.5), prec).unwrap();
    let xs = [BigComplex::from_f64(1.0, 0.0, prec)];
    let mut beta = s.beta.clone();
    beta[4] = &beta[4] + &BigComplex::from_f64(0.0, 1e-8, prec);
    assert!(s2_from(&beta, &s.gamma2, 3, &xs) >= 1e-10);
}

#[test]
fn finite_differences_converge_at_second_order() {
    let prec = p(60);
    let (h1, h2) = (f(1e-3), f(1e-4));
    for tv in [0.0, 0.5, -0.5] {
        for n in [1, 4, 10] {
            let (a1, b1) = toda_residual(n, &f(tv), &h1, ContourPair::G02, prec).unwrap();
            let (a2, b2) = toda_residual(n, &f(tv), &h2, ContourPair::G02, prec).unwrap();
            assert!((80.0..=120.0).contains(&ratio(&a1, &a2)));
            assert!((80.0..=120.0).contains(&ratio(&b1, &b2)));
            let q1 = pii_residual(n, &f(tv), &h1, ContourPair::G02, prec).unwrap();
            let q2 = pii_residual(n, &f(tv), &h2, ContourPair::G02, prec).unwrap();
            assert!((80.0..=120.0).contains(&ratio(&q1, &q2)));
            let s1 = pii_standard_residual(n, &f(tv), &h1, ContourPair::G02, prec).unwrap();
            let s2 = pii_standard_residual(n, &f(tv), &h2, ContourPair::G02, prec).unwrap();
            assert!((80.0..=120.0).contains(&ratio(&s1, &s2)));
        }
    }
}

#[test]
fn shifted_constant_term_is_detected() {
    // beta'' against 2 beta^3 - (2t/3) beta + 2n/3: off by exactly 1/3
    let prec = p(60);
    let (n, h) = (3, 1e-4);
    let b: Vec<BigComplex> = [-h, 0.0, h]
        .iter()
        .map(|&d| general_t_sequence(n, ContourPair::G01, &f(0.5 + d), prec).unwrap().beta[n].clone())
        .collect();
    let d2 = (&(&b[0] + &b[2]) - &b[1].scale_i64(2)).div_real(&f(h * h));
    let cube = (&b[1].square() * &b[1]).scale_i64(2);
    let lin = b[1].scale(&f(1.0 / 3.0));
    let wrong = &(&cube - &lin) + &BigComplex::from_f64(2.0 * n as f64 / 3.0, 0.0, prec);
    let gap = (&d2 - &wrong).abs().to_f64();
    assert!((gap - 1.0 / 3.0).abs() < 1e-6, "{gap}");
    let right = pii_residual(n, &f(0.5), &f(h), ContourPair::G01, prec).unwrap();
    assert!(right < 1e-6);
}

#[test]
fn oversized_step_is_rejected() {
    let prec = p(60);
    let big = f(0.05);
    assert!(matches!(toda_residual(2, &f(0.0), &big, ContourPair::G01, prec), Err(Error::Domain(_))));
    assert!(pii_standard_residual(2, &f(0.0), &big, ContourPair::G01, prec).is_err());
    assert!(moment_ode_residual(ContourPair::G01, &f(0.0), &big, prec).is_err());
}

#[test]
fn alternative_dpi_holds() {
    let prec = p(60);
    for tv in [0.0, 0.5, -0.5] {
        let s = general_t_sequence(12, ContourPair::G01, &f(tv), prec).unwrap();
        for n in 1..12 {
            assert!(alt_dpi_residual(&s, n).unwrap() <= s.precision_used.tol(15));
        }
        assert!(alt_dpi_residual(&s, 0).is_err());
    }
}

#[test]
fn tau_identity_up_to_eight() {
    let prec = p(80);
    for pair in [ContourPair::G01, ContourPair::G02] {
        for tv in [0.0, 0.5, -0.5] {
            for n in 0..=8 {
                assert!(tau_identity_check(n, &f(tv), pair, prec).unwrap() <= 1e-12);
            }
        }
    }
}

#[test]
fn moment_deformation_equations() {
    let prec = p(60);
    for tv in [0.0, 0.5, -1.0] {
        let r1 = moment_ode_residual(ContourPair::G01, &f(tv), &f(1e-3), prec).unwrap();
        let r2 = moment_ode_residual(ContourPair::G01, &f(tv), &f(1e-4), prec).unwrap();
        assert!((80.0..=120.0).contains(&ratio(&r1, &r2)), "t = {tv}");
        for k in [0, 1, 4] {
            let d = moment_derivative_residual(ContourPair::G02, k, &f(tv), &f(1e-4), prec).unwrap();
            assert!(d < 1e-6);
        }
    }
}

#[test]
fn report_passes_on_the_standard_grid() {
    let recs = verification_report(10, &[0.0, 0.5, -0.5], ContourPair::G01, p(60)).unwrap();
    assert!(recs.iter().all(|r| r.pass), "{:?}", recs.iter().find(|r| !r.pass));
    assert!(recs.iter().any(|r| r.check.contains("PII standard")));
}
