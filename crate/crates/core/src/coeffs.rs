//! Recurrence coefficients from the string equations.
//!
//! The positive solution of the `t = 0` system is a separatrix: forward
//! recursion loses roughly one decimal digit per step, so the recursion is
//! restarted from scratch at doubled precision whenever positivity is in
//! doubt.

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{moment_t, ContourPair};
use crate::numeric::{b0, e_pi_3, format_real, BigComplex, Precision};

/// Default ceiling for the adaptive precision schedule, in digits.
pub const DEFAULT_CAP: u32 = 4096;

/// Extra indices past `N` that must stay positive before index `N` is
/// trusted. Errors grow about tenfold per step, so this buys ~30 digits.
pub const LOOKAHEAD: usize = 32;

/// Real sequences `a_n, b_n` of the `t = 0` system.
#[derive(Clone, Debug, PartialEq)]
pub struct AbSequence {
    pub n_max: usize,
    pub a: Vec<Float>,
    pub b: Vec<Float>,
    pub precision_used: Precision,
    pub certified: bool,
}

/// Complex sequences `beta_n(t), gamma^2_n(t)` on one contour pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSequence {
    pub n_max: usize,
    pub pair: ContourPair,
    pub t: Float,
    pub beta: Vec<BigComplex>,
    pub gamma2: Vec<BigComplex>,
    pub precision_used: Precision,
    pub certified: bool,
}

fn schedule(p0: Precision, cap: u32) -> Vec<Precision> {
    let mut out = vec![p0];
    let mut p = p0;
    while p.doubled().digits() <= cap {
        p = p.doubled();
        out.push(p);
    }
    out
}

/// Forward run at fixed precision; `Err(index)` on the first index where
/// `a_{n+1}` or `b_n` drops below `10^{30-p}`.
fn ab_run(len: usize, prec: Precision) -> Result<std::result::Result<(Vec<Float>, Vec<Float>), usize>> {
    let bits = prec.bits();
    let thresh = prec.tol(30);
    let mut a = Vec::with_capacity(len + 1);
    let mut b = Vec::with_capacity(len + 1);
    a.push(Float::with_val(bits, 0));
    b.push(b0(prec)?);
    for n in 0..len {
        if b[n] <= thresh {
            return Ok(Err(n));
        }
        let an1 = Float::with_val(bits, b[n].square_ref()) - &a[n];
        if an1 <= thresh {
            return Ok(Err(n + 1));
        }
        let bn1 = Float::with_val(bits, n + 1) / (Float::with_val(bits, &an1 * 3u32)) - &b[n];
        a.push(an1);
        b.push(bn1);
    }
    if b[len] <= thresh {
        return Ok(Err(len));
    }
    Ok(Ok((a, b)))
}

/// Certified `a_0..a_N`, `b_0..b_N` starting at `p0` digits, doubling up to
/// `cap` digits.
pub fn ab_sequence_with_cap(n_max: usize, p0: Precision, cap: u32) -> Result<AbSequence> {
    let mut last_fail = 0;
    let mut last_p = p0;
    for p in schedule(p0, cap) {
        last_p = p;
        match ab_run(n_max + LOOKAHEAD, p)? {
            Ok((mut a, mut b)) => {
                a.truncate(n_max + 1);
                b.truncate(n_max + 1);
                return Ok(AbSequence {
                    n_max,
                    a,
                    b,
                    precision_used: p,
                    certified: true,
                });
            }
            Err(idx) => last_fail = idx,
        }
    }
    Err(Error::PositivityLost {
        index: last_fail,
        digits: last_p.digits(),
        cap,
    })
}

pub fn ab_sequence(n_max: usize, p0: Precision) -> Result<AbSequence> {
    ab_sequence_with_cap(n_max, p0, DEFAULT_CAP)
}

impl AbSequence {
    /// Largest relative residual of both string equations over all indices
    /// where both neighbours are available.
    pub fn string_residual(&self) -> Float {
        let bits = self.precision_used.bits();
        let mut worst = Float::with_val(bits, 0);
        for n in 0..self.n_max {
            let b2 = Float::with_val(bits, self.b[n].square_ref());
            let r = Float::with_val(bits, &self.a[n] + &self.a[n + 1]) - &b2;
            let r = r.abs() / b2;
            if r > worst {
                worst = r;
            }
        }
        for n in 1..=self.n_max {
            let s = Float::with_val(bits, &self.b[n] + &self.b[n - 1]) * &self.a[n] * 3u32;
            let r = (s - n as u32).abs() / n as u32;
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    /// `a_n e^{-i pi/3}`-style phased data for the `G01` pair.
    pub fn phased(&self, pair: ContourPair, prec: Precision) -> (Vec<BigComplex>, Vec<BigComplex>) {
        let e = match pair {
            ContourPair::G01 => e_pi_3(prec),
            ContourPair::G02 => e_pi_3(prec).conj(),
        };
        let ec = e.conj();
        let beta = self.b.iter().map(|b| e.scale(b)).collect();
        let gamma2 = self.a.iter().map(|a| ec.scale(a)).collect();
        (beta, gamma2)
    }
}

/// `|n/(b_{n-1}+b_n) + (n+1)/(b_n+b_{n+1}) - 3 b_n^2|`.
pub fn dpi_residual(seq: &AbSequence, n: usize) -> Result<Float> {
    if n == 0 || n + 1 > seq.n_max {
        return Err(Error::Domain(format!(
            "dP-I residual needs 1 <= n <= N-1, got n = {n}, N = {}",
            seq.n_max
        )));
    }
    let bits = seq.precision_used.bits();
    let b = &seq.b;
    let t1 = Float::with_val(bits, n) / Float::with_val(bits, &b[n - 1] + &b[n]);
    let t2 = Float::with_val(bits, n + 1) / Float::with_val(bits, &b[n] + &b[n + 1]);
    let t3 = Float::with_val(bits, b[n].square_ref()) * 3u32;
    Ok((t1 + t2 - t3).abs())
}

/// Limit constants `1/(2 3^{2/3})` and `3^{-1/3}`.
pub fn limit_constants(prec: Precision) -> (Float, Float) {
    let bits = prec.bits();
    let c3 = Float::with_val(bits, 3).cbrt();
    let a = Float::with_val(bits, 1) / (Float::with_val(bits, c3.square_ref()) * 2u32);
    let b = Float::with_val(bits, 1) / c3;
    (a, b)
}

/// `|a_n/n^{2/3} - 1/(2 3^{2/3})|` and `|b_n/n^{1/3} - 3^{-1/3}|`, indexed by
/// `n`; index 0 is `None` since `n^{2/3}` vanishes there.
#[derive(Clone, Debug)]
pub struct LimitDeviation {
    pub dev_a: Vec<Option<Float>>,
    pub dev_b: Vec<Option<Float>>,
}

pub fn limit_deviation(seq: &AbSequence) -> Result<LimitDeviation> {
    if seq.n_max < 10 {
        return Err(Error::Domain(format!(
            "limit deviation needs N >= 10, got {}",
            seq.n_max
        )));
    }
    let bits = seq.precision_used.bits();
    let (ca, cb) = limit_constants(seq.precision_used);
    let mut dev_a = vec![None];
    let mut dev_b = vec![None];
    for n in 1..=seq.n_max {
        let c = Float::with_val(bits, n).cbrt();
        let c2 = Float::with_val(bits, c.square_ref());
        dev_a.push(Some((Float::with_val(bits, &seq.a[n] / &c2) - &ca).abs()));
        dev_b.push(Some((Float::with_val(bits, &seq.b[n] / &c) - &cb).abs()));
    }
    Ok(LimitDeviation { dev_a, dev_b })
}

enum RunOutcome {
    Done(Vec<BigComplex>, Vec<BigComplex>),
    Collapsed(usize),
}

fn general_run(n_max: usize, pair: ContourPair, t: &Float, prec: Precision) -> Result<RunOutcome> {
    let bits = prec.bits();
    let tol = prec.tol(-10);
    let m0 = moment_t(pair, 0, t, &tol, prec)?;
    let m1 = moment_t(pair, 1, t, &tol, prec)?;
    let t3 = BigComplex::from_real(Float::with_val(bits, t / 3u32));
    let mut scale = Float::with_val(bits, t.abs_ref());
    if scale < 1 {
        scale = Float::with_val(bits, 1);
    }
    let thresh = prec.tol(30) * scale;
    let mut beta = vec![&m1 / &m0];
    let mut gamma2 = vec![BigComplex::zero(prec)];
    for n in 0..n_max {
        let g = &(&t3 - &beta[n].square()) - &gamma2[n];
        if g.abs() < thresh {
            return Ok(RunOutcome::Collapsed(n + 1));
        }
        let num = BigComplex::from_real(Float::with_val(bits, n + 1));
        let b = &(&num / &g.scale_i64(3)) - &beta[n];
        gamma2.push(g);
        beta.push(b);
    }
    Ok(RunOutcome::Done(beta, gamma2))
}

fn max_rel_discrepancy(lo: &[BigComplex], hi: &[BigComplex], bits: u32) -> Float {
    let mut worst = Float::with_val(bits, 0);
    for (x, y) in lo.iter().zip(hi) {
        let mut s = y.abs();
        if s < 1 {
            s = Float::with_val(bits, 1);
        }
        let d = (&x.with_bits(bits) - y).abs() / s;
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// `beta_n(t), gamma^2_n(t)` for `n <= N` on `pair`.
///
/// A run at `p` digits is accepted when no `gamma^2` collapsed below
/// `10^{30-p} max(1,|t|)` and a shadow run at `2p` digits (extended by
/// [`LOOKAHEAD`] indices) agrees with it to `10^{15-p0}` relative.
pub fn general_t_sequence_with_cap(n_max: usize, pair: ContourPair, t: &Float, p0: Precision, cap: u32) -> Result<GeneralSequence> {
    let len = n_max + LOOKAHEAD;
    let accept = p0.tol(15);
    let mut last_fail = 0;
    let mut last_p = p0;
    for p in schedule(p0, cap) {
        last_p = p;
        let shadow_p = p.doubled();
        let lo = match general_run(len, pair, t, p)? {
            RunOutcome::Done(b, g) => (b, g),
            RunOutcome::Collapsed(i) => {
                last_fail = i;
                continue;
            }
        };
        let hi = match general_run(len, pair, t, shadow_p)? {
            RunOutcome::Done(b, g) => (b, g),
            RunOutcome::Collapsed(i) => {
                last_fail = i;
                continue;
            }
        };
        let bits = shadow_p.bits();
        let d1 = max_rel_discrepancy(&lo.0, &hi.0, bits);
        let d2 = max_rel_discrepancy(&lo.1, &hi.1, bits);
        if d1 <= accept && d2 <= accept {
            let (mut beta, mut gamma2) = hi;
            beta.truncate(n_max + 1);
            gamma2.truncate(n_max + 1);
            return Ok(GeneralSequence {
                n_max,
                pair,
                t: Float::with_val(shadow_p.bits(), t),
                beta: beta.into_iter().map(|c| c.with_prec(p)).collect(),
                gamma2: gamma2.into_iter().map(|c| c.with_prec(p)).collect(),
                precision_used: p,
                certified: true,
            });
        }
        last_fail = first_divergence(&lo.0, &hi.0, &accept, bits).unwrap_or(len);
    }
    Err(Error::Degenerate {
        index: last_fail,
        digits: last_p.digits(),
        cap,
    })
}

fn first_divergence(lo: &[BigComplex], hi: &[BigComplex], accept: &Float, bits: u32) -> Option<usize> {
    lo.iter().zip(hi).position(|(x, y)| {
        let mut s = y.abs();
        if s < 1 {
            s = Float::with_val(bits, 1);
        }
        (&x.with_bits(bits) - y).abs() / s > *accept
    })
}

pub fn general_t_sequence(n_max: usize, pair: ContourPair, t: &Float, p0: Precision) -> Result<GeneralSequence> {
    general_t_sequence_with_cap(n_max, pair, t, p0, DEFAULT_CAP)
}

impl GeneralSequence {
    /// Largest relative residual of both general-`t` string equations.
    pub fn string_residual(&self) -> Float {
        let bits = self.precision_used.bits();
        let t3 = BigComplex::from_real(Float::with_val(bits, &self.t / 3u32));
        let mut worst = Float::with_val(bits, 0);
        for n in 0..self.n_max {
            let b2 = self.beta[n].square();
            let sum = &(&(&self.gamma2[n + 1] + &b2) + &self.gamma2[n]) - &t3;
            let scale = Float::with_val(bits, self.gamma2[n + 1].abs() + b2.abs()) + self.gamma2[n].abs() + t3.abs();
            let r = sum.abs() / scale;
            if r > worst {
                worst = r;
            }
        }
        for n in 1..=self.n_max {
            let s = (&self.gamma2[n] * &(&self.beta[n - 1] + &self.beta[n])).scale_i64(3);
            let nn = BigComplex::from_real(Float::with_val(bits, n));
            let r = (&s - &nn).abs() / n as u32;
            if r > worst {
                worst = r;
            }
        }
        worst
    }
}

/// Recurrence data on both pairs up to a common index, the input of the
/// nearest-neighbour coefficients and of the polynomial constructions.
#[derive(Clone, Debug)]
pub struct PairRecurrence {
    pub t: Float,
    pub precision: Precision,
    /// `[G01, G02]`
    pub beta: [Vec<BigComplex>; 2],
    pub gamma2: [Vec<BigComplex>; 2],
}

impl PairRecurrence {
    pub fn from_ab(seq: &AbSequence, prec: Precision) -> Self {
        let (b1, g1) = seq.phased(ContourPair::G01, prec);
        let (b2, g2) = seq.phased(ContourPair::G02, prec);
        PairRecurrence {
            t: Float::with_val(prec.bits(), 0),
            precision: prec,
            beta: [b1, b2],
            gamma2: [g1, g2],
        }
    }

    pub fn from_general(s1: &GeneralSequence, s2: &GeneralSequence, prec: Precision) -> Self {
        let r = |v: &[BigComplex]| v.iter().map(|c| c.with_prec(prec)).collect::<Vec<_>>();
        PairRecurrence {
            t: Float::with_val(prec.bits(), &s1.t),
            precision: prec,
            beta: [r(&s1.beta), r(&s2.beta)],
            gamma2: [r(&s1.gamma2), r(&s2.gamma2)],
        }
    }

    /// Data to index `m_max` at weight parameter `t`; uses the real `t = 0`
    /// system when `t` vanishes.
    pub fn compute(m_max: usize, t: &Float, prec: Precision) -> Result<Self> {
        let p0 = prec.guarded(10);
        if t.is_zero() {
            let seq = ab_sequence(m_max, p0)?;
            Ok(Self::from_ab(&seq, prec))
        } else {
            let s1 = general_t_sequence(m_max, ContourPair::G01, t, p0)?;
            let s2 = general_t_sequence(m_max, ContourPair::G02, t, p0)?;
            Ok(Self::from_general(&s1, &s2, prec))
        }
    }

    pub fn len(&self) -> usize {
        self.beta[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta[0].is_empty()
    }

    fn idx(pair: ContourPair) -> usize {
        match pair {
            ContourPair::G01 => 0,
            ContourPair::G02 => 1,
        }
    }

    pub fn beta(&self, pair: ContourPair, n: usize) -> &BigComplex {
        &self.beta[Self::idx(pair)][n]
    }

    pub fn gamma2(&self, pair: ContourPair, n: usize) -> &BigComplex {
        &self.gamma2[Self::idx(pair)][n]
    }
}

/// One row of a coefficient table export.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AbRow {
    pub n: usize,
    pub a: String,
    pub b: String,
    pub a_scaled: Option<String>,
    pub b_scaled: Option<String>,
}

impl AbSequence {
    /// `(n, a_n, b_n, a_n/n^{2/3}, b_n/n^{1/3})` rows with `digits`
    /// significant digits.
    pub fn rows(&self, digits: u32) -> Vec<AbRow> {
        let bits = self.precision_used.bits();
        (0..=self.n_max)
            .map(|n| {
                let (sa, sb) = if n == 0 {
                    (None, None)
                } else {
                    let c = Float::with_val(bits, n).cbrt();
                    let c2 = Float::with_val(bits, c.square_ref());
                    (
                        Some(format_real(&Float::with_val(bits, &self.a[n] / &c2), digits)),
                        Some(format_real(&Float::with_val(bits, &self.b[n] / &c), digits)),
                    )
                };
                AbRow {
                    n,
                    a: format_real(&self.a[n], digits),
                    b: format_real(&self.b[n], digits),
                    a_scaled: sa,
                    b_scaled: sb,
                }
            })
            .collect()
    }
}
