//! Checks of the deformation structure in `t`: ladder-operator
//! compatibility, the Toda flow, Painlevé II in both normalizations and the
//! Hankel (tau function) form of `beta_n(t)`.

use rug::Float;
use serde::Serialize;

use crate::coeffs::{general_t_sequence, GeneralSequence};
use crate::error::{Error, Result};
use crate::moments::{moment_t, ContourPair, HankelOracle};
use crate::numeric::{BigComplex, Precision};

/// Largest admissible finite-difference step.
pub const MAX_STEP: f64 = 1e-2;

/// `A_n(x) = 3 (x + beta_n)` and `B_n = 3 gamma^2_n` at one `(n, t)`.
#[derive(Clone, Debug)]
pub struct LadderData {
    pub n: usize,
    pub t: Float,
    /// ascending coefficients of `A_n`; the leading one is exactly 3
    pub a_n: [BigComplex; 2],
    pub b_n: BigComplex,
}

impl LadderData {
    pub fn new(seq: &GeneralSequence, n: usize) -> Self {
        let prec = seq.precision_used;
        LadderData {
            n,
            t: seq.t.clone(),
            a_n: [seq.beta[n].scale_i64(3), BigComplex::from_real(Float::with_val(prec.bits(), 3))],
            b_n: seq.gamma2[n].scale_i64(3),
        }
    }

    pub fn a_at(&self, x: &BigComplex) -> BigComplex {
        &(&self.a_n[1] * x) + &self.a_n[0]
    }
}

fn seq_for(n_max: usize, t: &Float, pair: ContourPair, prec: Precision) -> Result<GeneralSequence> {
    general_t_sequence(n_max, pair, t, prec)
}

fn rel(r: &BigComplex, scale: Float) -> Float {
    let bits = r.prec();
    let s = if scale < 1 { Float::with_val(bits, 1) } else { scale };
    r.abs() / s
}

/// `max_x |B_{n+1} + B_n - (x - beta_n) A_n(x) + v'(x)|` relative to the size
/// of the terms, with `v'(x) = 3x^2 - t`, from explicit sequences.
pub fn s1_from(beta: &[BigComplex], gamma2: &[BigComplex], n: usize, t: &Float, xs: &[BigComplex]) -> Float {
    let bits = beta[n].prec();
    let mut worst = Float::with_val(bits, 0);
    let tc = BigComplex::from_real(Float::with_val(bits, t));
    for x in xs {
        let x = x.with_bits(bits);
        let a = (&x + &beta[n]).scale_i64(3);
        let xb = &x - &beta[n];
        let vp = &x.square().scale_i64(3) - &tc;
        let bsum = (&gamma2[n + 1] + &gamma2[n]).scale_i64(3);
        let prod = &xb * &a;
        let r = &(&bsum - &prod) + &vp;
        let scale = Float::with_val(bits, bsum.abs() + prod.abs()) + vp.abs();
        let v = rel(&r, scale);
        if v > worst {
            worst = v;
        }
    }
    worst
}

/// `max_x |1 + (x - beta_n)(B_{n+1} - B_n) - gamma^2_{n+1} A_{n+1} + gamma^2_n A_{n-1}|`
/// relative to the size of the terms; needs `n >= 1`.
pub fn s2_from(beta: &[BigComplex], gamma2: &[BigComplex], n: usize, xs: &[BigComplex]) -> Float {
    let bits = beta[n].prec();
    let one = BigComplex::one_bits(bits);
    let mut worst = Float::with_val(bits, 0);
    for x in xs {
        let x = x.with_bits(bits);
        let lhs = &one + &(&(&x - &beta[n]) * &(&gamma2[n + 1] - &gamma2[n]).scale_i64(3));
        let up = &gamma2[n + 1] * &(&x + &beta[n + 1]).scale_i64(3);
        let down = &gamma2[n] * &(&x + &beta[n - 1]).scale_i64(3);
        let r = &(&lhs - &up) + &down;
        let scale = Float::with_val(bits, lhs.abs() + up.abs()) + down.abs();
        let v = rel(&r, scale);
        if v > worst {
            worst = v;
        }
    }
    worst
}

/// First compatibility condition at `(n, t)` on `pair`.
pub fn compat_residual_s1(n: usize, t: &Float, xs: &[BigComplex], pair: ContourPair, prec: Precision) -> Result<Float> {
    let s = seq_for(n + 1, t, pair, prec)?;
    Ok(s1_from(&s.beta, &s.gamma2, n, t, xs))
}

/// Second compatibility condition at `(n, t)`, `n >= 1`.
pub fn compat_residual_s2(n: usize, t: &Float, xs: &[BigComplex], pair: ContourPair, prec: Precision) -> Result<Float> {
    if n == 0 {
        return Err(Error::Domain("second compatibility condition needs n >= 1".into()));
    }
    let s = seq_for(n + 1, t, pair, prec)?;
    Ok(s2_from(&s.beta, &s.gamma2, n, xs))
}

fn check_step(h: &Float) -> Result<()> {
    if *h <= 0 || *h > MAX_STEP {
        return Err(Error::Domain(format!(
            "finite-difference step must lie in (0, {MAX_STEP}], got {}",
            h.to_f64()
        )));
    }
    Ok(())
}

/// Sequences at `t + j h` for `j` in `offsets`.
fn stencil(n_max: usize, t: &Float, h: &Float, offsets: &[i32], pair: ContourPair, prec: Precision) -> Result<Vec<GeneralSequence>> {
    let bits = prec.guarded(10).bits();
    offsets
        .iter()
        .map(|&j| {
            let tj = Float::with_val(bits, h * j) + t;
            seq_for(n_max, &tj, pair, prec)
        })
        .collect()
}

/// Residuals of `d gamma^2_n/dt = gamma^2_n (beta_n - beta_{n-1})` and
/// `d beta_n/dt = gamma^2_{n+1} - gamma^2_n` with central differences.
pub fn toda_residual(n: usize, t: &Float, h: &Float, pair: ContourPair, prec: Precision) -> Result<(Float, Float)> {
    check_step(h)?;
    if n == 0 {
        return Err(Error::Domain("Toda residual needs n >= 1".into()));
    }
    let st = stencil(n + 1, t, h, &[-1, 0, 1], pair, prec)?;
    let (m, c, p) = (&st[0], &st[1], &st[2]);
    let bits = prec.bits();
    let two_h = Float::with_val(bits, h * 2u32);
    let dg = (&p.gamma2[n] - &m.gamma2[n]).div_real(&two_h);
    let rhs1 = &c.gamma2[n] * &(&c.beta[n] - &c.beta[n - 1]);
    let db = (&p.beta[n] - &m.beta[n]).div_real(&two_h);
    let rhs2 = &c.gamma2[n + 1] - &c.gamma2[n];
    Ok(((&dg - &rhs1).abs(), (&db - &rhs2).abs()))
}

fn second_diff(m: &BigComplex, c: &BigComplex, p: &BigComplex, h: &Float) -> BigComplex {
    let bits = c.prec();
    let h2 = Float::with_val(bits, h * h);
    (&(m + p) - &c.scale_i64(2)).div_real(&h2)
}

/// `2 b^3 - (2t/3) b + (2n+1)/3`.
fn pii_rhs(b: &BigComplex, t: &Float, n: usize) -> BigComplex {
    let bits = b.prec();
    let cube = &b.square() * b;
    let lin = b.scale(&(Float::with_val(bits, t * 2u32) / 3u32));
    let k = BigComplex::from_real(Float::with_val(bits, 2 * n + 1) / 3u32);
    &(&cube.scale_i64(2) - &lin) + &k
}

/// Painlevé II in the recurrence normalization:
/// `|beta_n'' - (2 beta_n^3 - (2t/3) beta_n + (2n+1)/3)|` by a three-point
/// second difference.
pub fn pii_residual(n: usize, t: &Float, h: &Float, pair: ContourPair, prec: Precision) -> Result<Float> {
    check_step(h)?;
    let st = stencil(n, t, h, &[-1, 0, 1], pair, prec)?;
    let d2 = second_diff(&st[0].beta[n], &st[1].beta[n], &st[2].beta[n], h);
    Ok((&d2 - &pii_rhs(&st[1].beta[n], t, n)).abs())
}

/// `(3/2)^{1/3}`.
pub fn pii_scale(prec: Precision) -> Float {
    (Float::with_val(prec.bits(), 3) / 2u32).cbrt()
}

/// Standard Painlevé II `y'' = 2 y^3 + s y + alpha`, `alpha = n + 1/2`, for
/// `y(s) = a beta_n(-a s)` with `a = (3/2)^{1/3}`, at `s`.
pub fn pii_standard_residual(n: usize, s: &Float, h: &Float, pair: ContourPair, prec: Precision) -> Result<Float> {
    check_step(h)?;
    let bits = prec.guarded(10).bits();
    let a = pii_scale(prec.guarded(10));
    let mut ys = Vec::with_capacity(3);
    for j in [-1i32, 0, 1] {
        let sj = Float::with_val(bits, h * j) + s;
        let tj = Float::with_val(bits, -(&a * sj));
        let seq = seq_for(n, &tj, pair, prec)?;
        ys.push(seq.beta[n].scale(&a).with_prec(prec));
    }
    let d2 = second_diff(&ys[0], &ys[1], &ys[2], h);
    let y = &ys[1];
    let cube = (&y.square() * y).scale_i64(2);
    let lin = y.scale(&Float::with_val(prec.bits(), s));
    let alpha = BigComplex::from_real(Float::with_val(prec.bits(), n) + 0.5);
    let rhs = &(&cube + &lin) + &alpha;
    Ok((&d2 - &rhs).abs())
}

/// `|n/(beta_n+beta_{n-1}) + (n+1)/(beta_{n+1}+beta_n) + 3 beta_n^2 - t|`
/// relative to the terms, `n >= 1`.
pub fn alt_dpi_residual(seq: &GeneralSequence, n: usize) -> Result<Float> {
    if n == 0 || n + 1 > seq.n_max {
        return Err(Error::Domain(format!("needs 1 <= n <= N-1, got {n}")));
    }
    let bits = seq.precision_used.bits();
    let b = &seq.beta;
    let nn = BigComplex::from_real(Float::with_val(bits, n));
    let n1 = BigComplex::from_real(Float::with_val(bits, n + 1));
    let t1 = &nn / &(&b[n] + &b[n - 1]);
    let t2 = &n1 / &(&b[n + 1] + &b[n]);
    let t3 = b[n].square().scale_i64(3);
    let tc = BigComplex::from_real(Float::with_val(bits, &seq.t));
    let r = &(&(&t1 + &t2) + &t3) - &tc;
    let scale = Float::with_val(bits, t1.abs() + t2.abs()) + t3.abs() + tc.abs();
    Ok(rel(&r, scale))
}

/// `|beta_n(t)` from Hankel determinants of `m_j(t)` minus the recurrence
/// value`|`.
pub fn tau_identity_check(n: usize, t: &Float, pair: ContourPair, prec: Precision) -> Result<Float> {
    let oracle = HankelOracle::new(pair, n, t, prec)?;
    let seq = seq_for(n, t, pair, prec)?;
    Ok((&oracle.beta[n] - &seq.beta[n]).abs())
}

/// `|m_0''(t) - (t/3) m_0(t)|` with a three-point second difference.
pub fn moment_ode_residual(pair: ContourPair, t: &Float, h: &Float, prec: Precision) -> Result<Float> {
    check_step(h)?;
    let bits = prec.guarded(10).bits();
    let tol = prec.tol(-10);
    let mut ms = Vec::new();
    for j in [-1i32, 0, 1] {
        let tj = Float::with_val(bits, h * j) + t;
        ms.push(moment_t(pair, 0, &tj, &tol, prec)?);
    }
    let d2 = second_diff(&ms[0], &ms[1], &ms[2], h);
    let rhs = ms[1].scale(&(Float::with_val(prec.bits(), t) / 3u32));
    Ok((&d2 - &rhs).abs())
}

/// `|central difference of m_k - m_{k+1}(t)|`; the term-by-term derivative
/// of the moment series is `m_{k+1}`.
pub fn moment_derivative_residual(pair: ContourPair, k: i64, t: &Float, h: &Float, prec: Precision) -> Result<Float> {
    check_step(h)?;
    let bits = prec.guarded(10).bits();
    let tol = prec.tol(-10);
    let tp = Float::with_val(bits, t + h);
    let tm = Float::with_val(bits, t - h);
    let mp = moment_t(pair, k, &tp, &tol, prec)?;
    let mm = moment_t(pair, k, &tm, &tol, prec)?;
    let fd = (&mp - &mm).div_real(&Float::with_val(prec.bits(), h * 2u32));
    let exact = moment_t(pair, k + 1, t, &tol, prec)?;
    Ok((&fd - &exact).abs())
}

/// One line of the verification report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub n: usize,
    pub t: f64,
    pub h: Option<f64>,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Ratio of the residuals at `h` and `h/10`, accepted in `[80, 120]`.
fn order_record(check: &str, n: usize, t: f64, coarse: &Float, fine: &Float) -> CheckRecord {
    let ratio = Float::with_val(64, coarse / fine).to_f64();
    CheckRecord {
        check: format!("{check} h^2 ratio"),
        n,
        t,
        h: Some(1e-3),
        residual: ratio,
        bound: 100.0,
        pass: (80.0..=120.0).contains(&ratio),
    }
}

fn bound_record(check: &str, n: usize, t: f64, h: Option<f64>, r: &Float, bound: &Float) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        n,
        t,
        h,
        residual: Float::with_val(64, r).to_f64(),
        bound: Float::with_val(64, bound).to_f64(),
        pass: r <= bound,
    }
}

/// The full deformation check grid: `n <= n_max`, `t` in `ts`, steps `1e-3`
/// and `1e-4`.
pub fn verification_report(n_max: usize, ts: &[f64], pair: ContourPair, prec: Precision) -> Result<Vec<CheckRecord>> {
    let bits = prec.bits();
    let mut out = Vec::new();
    let h1 = Float::with_val(bits, 1e-3);
    let h2 = Float::with_val(bits, 1e-4);
    let xs = [
        BigComplex::from_f64(0.0, 0.0, prec),
        BigComplex::from_f64(1.0, 0.0, prec),
        BigComplex::from_f64(0.0, 1.0, prec),
    ];
    for &tv in ts {
        let t = Float::with_val(bits, tv);
        let seq = seq_for(n_max + 1, &t, pair, prec)?;
        let bound = seq.precision_used.tol(15);
        for n in 0..=n_max {
            let r = s1_from(&seq.beta, &seq.gamma2, n, &t, &xs);
            out.push(bound_record("S1", n, tv, None, &r, &bound));
            if n >= 1 {
                let r = s2_from(&seq.beta, &seq.gamma2, n, &xs);
                out.push(bound_record("S2", n, tv, None, &r, &bound));
                let r = alt_dpi_residual(&seq, n)?;
                out.push(bound_record("alternative dP-I", n, tv, None, &r, &bound));
                let (a1, b1) = toda_residual(n, &t, &h1, pair, prec)?;
                let (a2, b2) = toda_residual(n, &t, &h2, pair, prec)?;
                out.push(order_record("Toda gamma2", n, tv, &a1, &a2));
                out.push(order_record("Toda beta", n, tv, &b1, &b2));
            }
            let p1 = pii_residual(n, &t, &h1, pair, prec)?;
            let p2 = pii_residual(n, &t, &h2, pair, prec)?;
            out.push(order_record("PII", n, tv, &p1, &p2));
            let q1 = pii_standard_residual(n, &t, &h1, pair, prec)?;
            let q2 = pii_standard_residual(n, &t, &h2, pair, prec)?;
            out.push(order_record("PII standard", n, tv, &q1, &q2));
        }
        for n in 0..=n_max.min(8) {
            let r = tau_identity_check(n, &t, pair, prec)?;
            out.push(bound_record("tau identity", n, tv, None, &r, &Float::with_val(bits, 1e-12)));
        }
    }
    Ok(out)
}
