//! Limit objects for the diagonal polynomials: the ratio limit `Phi`, the
//! Cauchy transform `F = 3 x^2 - 3 Phi` and the zero density `v` on each of
//! the three segments `omega^j [0, (9/4)^{1/3}]`.

use num_complex::Complex64;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mop::build;
use crate::numeric::{omega, BigComplex, Precision};

/// Distance from the support below which `phi` refuses to pick a branch.
pub const SUPPORT_GUARD: f64 = 1e-12;

/// `(9/4)^{1/3}`.
pub fn endpoint(prec: Precision) -> Float {
    let bits = prec.bits();
    (Float::with_val(bits, 9) / 4u32).cbrt()
}

pub fn endpoint_f64() -> f64 {
    (2.25f64).cbrt()
}

/// Distance from `x` to the star `union_j omega^j [0, E]`.
pub fn support_distance(x: Complex64) -> f64 {
    let e = endpoint_f64();
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut best = f64::INFINITY;
    let mut y = x;
    for _ in 0..3 {
        let s = y.re.clamp(0.0, e);
        best = best.min((y - Complex64::new(s, 0.0)).norm());
        y *= w.conj();
    }
    best
}

/// The three roots of `z^3 - 3 x z + 3 = 0` by Cardano:
/// `omega^k U + omega^{-k} x / U` with `U^3 = (-3 + sqrt(9 - 4 x^3))/2`.
pub fn cubic_roots(x: &BigComplex) -> [BigComplex; 3] {
    let bits = x.prec();
    let prec = precision_from_bits(bits);
    let x3 = x.powu(3);
    let nine = BigComplex::from_real(Float::with_val(bits, 9));
    let disc = (&nine - &x3.scale_i64(4)).sqrt();
    let m3 = BigComplex::from_real(Float::with_val(bits, -3));
    // choose the larger |u| for stability of x / U
    let u1 = (&m3 + &disc).div_real(&Float::with_val(bits, 2));
    let u2 = (&m3 - &disc).div_real(&Float::with_val(bits, 2));
    let u = if u1.norm_sqr() >= u2.norm_sqr() { u1 } else { u2 };
    let big_u = u.cbrt();
    let w = omega(prec);
    let w2 = w.conj();
    let ws = [BigComplex::one_bits(bits), w.clone(), w2.clone()];
    let wi = [BigComplex::one_bits(bits), w2, w];
    let xu = x / &big_u;
    [0, 1, 2].map(|k| &(&ws[k] * &big_u) + &(&wi[k] * &xu))
}

fn precision_from_bits(bits: u32) -> Precision {
    let digits = ((bits.saturating_sub(8)) as f64 / std::f64::consts::LOG2_10).floor() as u32;
    Precision::new(digits.max(Precision::MIN_DIGITS)).expect("clamped")
}

fn cubic_roots_f64(x: Complex64) -> [Complex64; 3] {
    let disc = (Complex64::new(9.0, 0.0) - 4.0 * x * x * x).sqrt();
    let u1 = (-3.0 + disc) / 2.0;
    let u2 = (-3.0 - disc) / 2.0;
    let u = if u1.norm_sqr() >= u2.norm_sqr() { u1 } else { u2 };
    let bu = u.cbrt();
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let xu = x / bu;
    [bu + xu, w * bu + w.conj() * xu, w.conj() * bu + w * xu]
}

fn nearest(cands: &[Complex64; 3], target: Complex64) -> (usize, f64, f64) {
    let mut d: Vec<(usize, f64)> = cands.iter().enumerate().map(|(i, c)| (i, (c - target).norm())).collect();
    d.sort_by(|a, b| a.1.total_cmp(&b.1));
    (d[0].0, d[0].1, d[1].1)
}

/// The branch `z(x) = 1/x + 1/(3x^4) + ...` followed in hardware precision
/// along the ray from a large-`|x|` anchor to `x`, with step halving when the
/// nearest Cardano root is not clearly separated from the next one.
fn z_branch_f64(x: Complex64) -> Result<Complex64> {
    let r = x.norm();
    let dir = x / r;
    let anchor = r.max(4.0) * 2.0;
    let mut s = anchor;
    let xa = dir * s;
    let mut z = 1.0 / xa + 1.0 / (3.0 * xa.powu(4));
    let mut h = s * 0.05;
    let mut guard = 0;
    while s > r {
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::BranchAmbiguity(format!("continuation stalled at {x}")));
        }
        let next = (s - h).max(r);
        let roots = cubic_roots_f64(dir * next);
        let (i, d0, d1) = nearest(&roots, z);
        if d0 * 3.0 < d1 || h < 1e-14 * r.max(1.0) {
            z = roots[i];
            s = next;
            h = (h * 1.5).min(s * 0.05).max(1e-15);
        } else {
            h *= 0.5;
        }
    }
    Ok(z)
}

fn check_off_support(x: Complex64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain("phi needs a finite argument".into()));
    }
    if support_distance(x) <= SUPPORT_GUARD {
        return Err(Error::BranchAmbiguity(format!(
            "x = {x} lies on the support of the limiting zero distribution"
        )));
    }
    Ok(())
}

/// The root `z(x)` of `z^3 - 3 x z + 3 = 0` that behaves like `1/x` at
/// infinity, at the precision of `x`.
pub fn z_branch(x: &BigComplex) -> Result<BigComplex> {
    let xc = x.to_c64();
    check_off_support(xc)?;
    let approx = z_branch_f64(xc)?;
    let roots = cubic_roots(x);
    let cands = [roots[0].to_c64(), roots[1].to_c64(), roots[2].to_c64()];
    let (i, _, _) = nearest(&cands, approx);
    let mut z = roots[i].clone();
    // two Newton steps clean up the Cardano rounding
    let three = BigComplex::from_real(Float::with_val(x.prec(), 3));
    for _ in 0..2 {
        let z2 = z.square();
        let f = &(&(&z2 * &z) - &(x * &z).scale_i64(3)) + &three;
        let df = (&z2 - x).scale_i64(3);
        if df.is_zero() {
            break;
        }
        z = &z - &(&f / &df);
    }
    Ok(z)
}

/// `Phi(x) = 1 / z(x)^2`.
pub fn phi(x: &BigComplex) -> Result<BigComplex> {
    let z = z_branch(x)?;
    Ok(z.square().recip())
}

/// `|Phi - (x - 1/(3 Phi))^2| / max(1, |Phi|)`.
pub fn cubic_residual(x: &BigComplex, phi_x: &BigComplex) -> Float {
    let bits = x.prec();
    let inv = phi_x.recip().div_real(&Float::with_val(bits, 3));
    let rhs = (x - &inv).square();
    let mut s = phi_x.abs();
    if s < 1 {
        s = Float::with_val(bits, 1);
    }
    (phi_x - &rhs).abs() / s
}

/// `F(x) = 3 x^2 - 3 Phi(x)`.
pub fn big_f(x: &BigComplex) -> Result<BigComplex> {
    let p = phi(x)?;
    Ok((&x.square() - &p).scale_i64(3))
}

fn cbrt_real(x: &Float) -> Float {
    Float::with_val(x.prec(), x.cbrt_ref())
}

/// `a(x), b(x) = ((3 -+ sqrt(9 - 4x^3))/2)^{1/3}` for `x` in `[0, E]`.
fn ab_pair(x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let x3 = Float::with_val(bits, x * x) * x;
    let mut disc = Float::with_val(bits, 9) - x3 * 4u32;
    // the rounded endpoint leaves a discriminant at rounding level
    let floor = Float::with_val(bits, 9) * precision_from_bits(bits).tol(5);
    if disc <= floor {
        disc = Float::with_val(bits, 0);
    }
    let s = disc.sqrt();
    let a = cbrt_real(&((Float::with_val(bits, 3) - &s) / 2u32));
    let b = cbrt_real(&((Float::with_val(bits, 3) + &s) / 2u32));
    (a, b)
}

/// Zero density on one segment:
/// `v(x) = (sqrt 3 / (4 pi)) (1 + x (a + b)) (b - a)`.
pub fn density_v(x: &Float) -> Result<Float> {
    let bits = x.prec();
    let e = (Float::with_val(bits, 9) / 4u32).cbrt();
    if *x < 0 || *x > e {
        return Err(Error::Domain(format!(
            "density is supported on [0, (9/4)^(1/3)], got {}",
            x.to_f64()
        )));
    }
    let (a, b) = ab_pair(x);
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let c = Float::with_val(bits, 3).sqrt() / (pi * 4u32);
    let sum = Float::with_val(bits, &a + &b);
    let diff = Float::with_val(bits, &b - &a);
    Ok(c * (Float::with_val(bits, x * sum) + 1u32) * diff)
}

/// Hardware-precision density for quadrature.
pub fn density_v_f64(x: f64) -> f64 {
    let e = endpoint_f64();
    if !(0.0..=e).contains(&x) {
        return 0.0;
    }
    let d = 9.0 - 4.0 * x * x * x;
    let s = if d <= 36.0 * f64::EPSILON { 0.0 } else { d.sqrt() };
    let a = ((3.0 - s) / 2.0).cbrt();
    let b = ((3.0 + s) / 2.0).cbrt();
    3f64.sqrt() / (4.0 * std::f64::consts::PI) * (1.0 + x * (a + b)) * (b - a)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int_x^E v`, computed through `x = E - s^2` which removes the square-root
/// behaviour at the endpoint.
pub fn tail_mass(x: f64, tol: f64) -> f64 {
    let e = endpoint_f64();
    if x >= e {
        return 0.0;
    }
    let x = x.max(0.0);
    let smax = (e - x).sqrt();
    integrate(|s| 2.0 * s * density_v_f64(e - s * s), 0.0, smax, tol)
}

/// `int_0^E v`, one third of the total mass.
pub fn segment_mass(tol: f64) -> f64 {
    tail_mass(0.0, tol)
}

/// Limit density with its evaluators.
#[derive(Clone, Debug)]
pub struct DensityModel {
    pub endpoint: f64,
    mass: f64,
}

impl Default for DensityModel {
    fn default() -> Self {
        DensityModel::new()
    }
}

impl DensityModel {
    pub fn new() -> Self {
        DensityModel {
            endpoint: endpoint_f64(),
            mass: segment_mass(1e-14),
        }
    }

    pub fn v(&self, x: f64) -> f64 {
        density_v_f64(x)
    }

    pub fn phi(&self, x: &BigComplex) -> Result<BigComplex> {
        phi(x)
    }

    pub fn big_f(&self, x: &BigComplex) -> Result<BigComplex> {
        big_f(x)
    }

    /// Mass of one segment (`1/3` in the limit).
    pub fn segment_mass(&self) -> f64 {
        self.mass
    }

    /// CDF of `v` on `[0, E]` normalized to mass one; exactly 0 and 1 at the
    /// ends.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.endpoint {
            return 1.0;
        }
        1.0 - tail_mass(x, 1e-13) / self.mass
    }

    /// `(x, v(x), 3 v(x))` on `points` equally spaced nodes of `[0, E]`.
    pub fn grid(&self, points: usize) -> Vec<DensityRow> {
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let x = if i + 1 == n { self.endpoint } else { self.endpoint * i as f64 / (n - 1) as f64 };
                let v = self.v(x);
                DensityRow { x, v, v3: 3.0 * v }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct DensityRow {
    pub x: f64,
    pub v: f64,
    pub v3: f64,
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// the model CDF.
pub fn ks_distance(samples: &[Float], model: &DensityModel) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS distance of an empty sample".into()));
    }
    let mut xs: Vec<f64> = samples.iter().map(Float::to_f64).collect();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let c = model.cdf(x);
        d = d.max(c - i as f64 / m).max((i + 1) as f64 / m - c);
    }
    Ok(d)
}

/// `|n^{-2/3} P_{n,n}(n^{1/3} x) / P_{n-1,n-1}(n^{1/3} x) - Phi(x)|`.
pub fn ratio_convergence(n: usize, x: &BigComplex, prec: Precision) -> Result<Float> {
    if n == 0 {
        return Err(Error::Domain("ratio needs n >= 1".into()));
    }
    let target = phi(&x.with_prec(prec))?;
    let pn = build(n, n, prec)?;
    let pm = build(n - 1, n - 1, prec)?;
    Ok((&ratio_value(&pn, &pm, n, x, prec) - &target).abs())
}

/// `n^{-2/3} P_n(n^{1/3} x) / P_{n-1}(n^{1/3} x)` for given polynomials.
pub fn ratio_value(pn: &crate::numeric::Polynomial, pm: &crate::numeric::Polynomial, n: usize, x: &BigComplex, prec: Precision) -> BigComplex {
    let bits = prec.bits();
    let s = Float::with_val(bits, n).cbrt();
    let x = x.with_prec(prec);
    let num = pn.eval_scaled(&x, &s);
    let den = pm.eval_scaled(&x, &s);
    (&num / &den).div_real(&Float::with_val(bits, s.square_ref()))
}

/// `(1/2n) sum_j 1/(x - z_j / n^{1/3})` over all `2n` zeros (origin included).
pub fn stieltjes_empirical(roots: &[BigComplex], origin_multiplicity: usize, n: usize, x: Complex64) -> Complex64 {
    let s = (n as f64).cbrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in roots {
        acc += 1.0 / (x - r.to_c64() / s);
    }
    acc += origin_multiplicity as f64 / x;
    acc / (2.0 * n as f64)
}
