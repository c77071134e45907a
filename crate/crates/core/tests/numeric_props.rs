use proptest::prelude::*;
use rug::Float;

use cubicmop::numeric::{gamma, gamma_third, parse_real};
use cubicmop::{BigComplex, Polynomial, Precision};

fn p(d: u32) -> Precision {
    Precision::new(d).unwrap()
}

fn poly_from(coeffs: &[(f64, f64)], prec: Precision) -> Polynomial {
    Polynomial::new(coeffs.iter().map(|&(a, b)| BigComplex::from_f64(a, b, prec)).collect(), prec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_matches_mpfr(x in 0.05f64..30.0) {
        let prec = p(50);
        let xf = Float::with_val(prec.bits(), x);
        let mine = gamma(&xf, prec).unwrap();
        let reference = Float::with_val(prec.bits() + 64, Float::with_val(prec.bits() + 64, x).gamma_ref());
        let rel = Float::with_val(prec.bits(), &mine - &reference).abs() / reference.abs();
        prop_assert!(rel <= prec.tol(2), "x = {x}: {}", rel.to_f64());
    }

    #[test]
    fn eval_refines_with_precision(
        coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..25),
        re in -1.5f64..1.5,
        im in -1.5f64..1.5,
    ) {
        let lo = p(40);
        let hi = lo.doubled();
        let q_lo = poly_from(&coeffs, lo);
        let q_hi = poly_from(&coeffs, hi);
        let v_lo = q_lo.eval(&BigComplex::from_f64(re, im, lo));
        let v_hi = q_hi.eval(&BigComplex::from_f64(re, im, hi));
        // sum |c_j| |x|^j bounds the rounding error of Horner's rule
        let r = (re * re + im * im).sqrt();
        let mut bound = 0.0;
        for (j, (a, b)) in coeffs.iter().enumerate() {
            bound += (a * a + b * b).sqrt() * r.powi(j as i32);
        }
        let diff = (&v_lo.with_bits(hi.bits()) - &v_hi).abs();
        prop_assert!(diff.to_f64() <= (bound + 1.0) * coeffs.len() as f64 * 1e-38);
    }

    #[test]
    fn derivative_of_power(n in 0usize..=50) {
        let prec = p(40);
        let d = Polynomial::monomial(n, prec).derivative();
        if n == 0 {
            prop_assert!(d.is_zero());
        } else {
            prop_assert_eq!(d.degree(), n - 1);
            prop_assert_eq!(d.leading().re.to_f64(), n as f64);
            prop_assert!(d.coeffs()[..n - 1].iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn division_inverts_multiplication(a in -5.0f64..5.0, b in -5.0f64..5.0, c in 0.1f64..5.0, d in -5.0f64..5.0) {
        let prec = p(60);
        let x = BigComplex::from_f64(a, b, prec);
        let y = BigComplex::from_f64(c, d, prec);
        let back = &(&x * &y) / &y;
        prop_assert!((&back - &x).abs() <= prec.tol(3));
        let s = y.sqrt();
        prop_assert!((&s.square() - &y).abs() <= prec.tol(3));
        let r = y.cbrt();
        prop_assert!((&(&r.square() * &r) - &y).abs() <= prec.tol(3));
    }

    #[test]
    fn rationals_parse_exactly(num in -1000i64..1000, den in 1i64..1000) {
        let prec = p(50);
        let v = parse_real(&format!("{num}/{den}"), prec).unwrap();
        let expect = Float::with_val(prec.bits(), num) / den;
        prop_assert_eq!(v, expect);
    }
}

#[test]
fn gamma_third_digits() {
    let prec = p(60);
    let g1 = gamma_third(1, prec).unwrap();
    let g2 = gamma_third(2, prec).unwrap();
    // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt 3
    let pi = Float::with_val(prec.bits(), rug::float::Constant::Pi);
    let refl = pi * 2u32 / Float::with_val(prec.bits(), 3).sqrt();
    assert!(Float::with_val(prec.bits(), &g1 * &g2 - refl).abs() < prec.tol(3));
    assert!(g1.to_string_radix(10, Some(20)).starts_with("2.678938534707747633"));
}

#[test]
fn precision_below_floor_is_rejected() {
    assert!(Precision::new(29).is_err());
    assert!(Precision::new(30).is_ok());
}
