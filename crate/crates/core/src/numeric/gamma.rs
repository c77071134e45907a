use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rug::Float;

use super::precision::Precision;
use crate::error::{Error, Result};

/// Gamma function for real `x > 0` to `prec` digits.
///
/// The argument is reduced into `(0, 1]`; there `Gamma(x)` is the lower
/// incomplete integral up to `T`, with `T` chosen so the discarded upper tail
/// is below `10^{-prec-10}`. The lower part is the everywhere-positive series
/// `T^x e^{-T} sum_k T^k / (x (x+1) ... (x+k))`.
pub fn gamma(x: &Float, prec: Precision) -> Result<Float> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain(format!(
            "gamma is only provided for positive finite arguments, got {}",
            x.to_f64()
        )));
    }
    let work = prec.guarded(12);
    let bits = work.bits();
    let mut y = Float::with_val(bits, x);
    let mut factor = Float::with_val(bits, 1);
    while y > 1 {
        y -= 1;
        factor *= &y;
    }
    let g = gamma_unit(&y, work)?;
    Ok(Float::with_val(prec.bits(), g * factor))
}

fn gamma_unit(x: &Float, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let t_f = (prec.digits() as f64 + 10.0) * std::f64::consts::LN_10 + 10.0;
    let t = Float::with_val(bits, t_f.ceil());
    let eps = prec.tol(0);
    let mut term = Float::with_val(bits, 1) / x;
    let mut sum = term.clone();
    let mut denom = Float::with_val(bits, x);
    let limit = (40.0 * t_f) as usize + 1000;
    let mut k = 0usize;
    loop {
        k += 1;
        denom += 1;
        term *= &t;
        term /= &denom;
        sum += &term;
        if k as f64 > 2.0 * t_f && term < Float::with_val(bits, &sum * &eps) {
            break;
        }
        if k > limit {
            return Err(Error::SeriesDivergence {
                context: "gamma".into(),
                terms: k,
            });
        }
    }
    let pre = Float::with_val(bits, t.ln_ref()) * x - &t;
    Ok(sum * pre.exp())
}

type Cache = RwLock<HashMap<(u32, u32), Float>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Gamma(j/3)` for `j >= 1`, memoized per `(j, digits)`.
pub fn gamma_third(j: u32, prec: Precision) -> Result<Float> {
    if j == 0 {
        return Err(Error::Domain("Gamma(0) is a pole".into()));
    }
    let key = (j, prec.digits());
    if let Some(v) = cache().read().expect("gamma cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = if j > 3 {
        // Gamma(j/3) = ((j-3)/3) Gamma((j-3)/3)
        let lower = gamma_third(j - 3, prec)?;
        Float::with_val(prec.bits(), lower * (j - 3)) / 3u32
    } else {
        let x = Float::with_val(prec.guarded(12).bits(), j) / 3u32;
        gamma(&x, prec)?
    };
    cache()
        .write()
        .expect("gamma cache poisoned")
        .insert(key, v.clone());
    Ok(v)
}

/// `b_0 = Gamma(2/3) / Gamma(1/3)`.
pub fn b0(prec: Precision) -> Result<Float> {
    let g1 = gamma_third(1, prec)?;
    let g2 = gamma_third(2, prec)?;
    Ok(Float::with_val(prec.bits(), g2 / g1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, prec: Precision, slack: i32) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d <= Float::with_val(a.prec(), b.abs_ref()) * prec.tol(slack)
    }

    #[test]
    fn matches_mpfr_gamma() {
        for digits in [30u32, 60, 200] {
            let p = Precision::new(digits).unwrap();
            for x in [0.1f64, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 2.5, 7.25] {
                let xf = Float::with_val(p.bits(), x);
                let ours = gamma(&xf, p).unwrap();
                let theirs = Float::with_val(p.bits(), xf.gamma_ref());
                assert!(close(&ours, &theirs, p, 1), "x={x} digits={digits}");
            }
        }
    }

    #[test]
    fn reflection_formula_for_thirds() {
        // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt(3)
        let p = Precision::new(120).unwrap();
        let prod = Float::with_val(p.bits(), gamma_third(1, p).unwrap() * gamma_third(2, p).unwrap());
        let pi = Float::with_val(p.bits(), rug::float::Constant::Pi);
        let expect = pi * 2u32 / Float::with_val(p.bits(), 3).sqrt();
        assert!(close(&prod, &expect, p, 1));
    }

    #[test]
    fn known_value_and_recurrence() {
        let p = Precision::new(40).unwrap();
        let g = gamma_third(1, p).unwrap();
        let s = g.to_string_radix(10, Some(38));
        assert!(s.starts_with("2.678938534707747633655692940974677644"), "{s}");
        let g4 = gamma_third(4, p).unwrap();
        let expect = Float::with_val(p.bits(), &g / 3u32);
        assert!(close(&g4, &expect, p, 1));
        let g3 = gamma_third(3, p).unwrap();
        assert!(close(&g3, &Float::with_val(p.bits(), 1), p, 1));
    }

    #[test]
    fn rejects_non_positive() {
        let p = Precision::default();
        assert!(gamma(&Float::with_val(p.bits(), 0), p).is_err());
        assert!(gamma(&Float::with_val(p.bits(), -1.5), p).is_err());
        assert!(gamma_third(0, p).is_err());
    }

    #[test]
    fn b0_value() {
        let p = Precision::new(30).unwrap();
        let b = b0(p).unwrap();
        assert!((b.to_f64() - 0.505468).abs() < 1e-6);
    }
}
