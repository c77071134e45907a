//! Type II multiple orthogonal polynomials `P_{k,l}`: orthogonal to
//! `x^0..x^{k-1}` on `Gamma_0 ∪ Gamma_1` and to `x^0..x^{l-1}` on
//! `Gamma_0 ∪ Gamma_2` against `e^{-x^3 + t x}`.
//!
//! Two independent constructions are provided. [`build`] starts from an
//! ordinary orthogonal polynomial `P_{0,m}` (or `P_{m,0}`) and applies the
//! raising operator `Q -> (x^2 - t/3) Q - Q'/3` `min(k,l)` times;
//! [`build_via_nn`] walks the nearest-neighbour recurrences out from
//! `P_{0,0} = 1`.

use std::collections::BTreeMap;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::coeffs::{ab_sequence, AbSequence, PairRecurrence};
use crate::error::{Error, Result};
use crate::moments::{ContourPair, MomentTable};
use crate::numeric::{b0, e_pi_3, format_real, parse_real, BigComplex, Polynomial, Precision};

/// Default bound on `k + l`.
pub const DEGREE_CAP: usize = 1500;

/// Guard digits used inside the constructions.
const GUARD: u32 = 20;

/// Coefficients of `x P_{k,l} = P_{k+1,l} + c P_{k,l} + a P_{k-1,l} + b P_{k,l-1}`
/// and `x P_{k,l} = P_{k,l+1} + d P_{k,l} + a P_{k-1,l} + b P_{k,l-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NNCoeffs {
    pub k: usize,
    pub l: usize,
    pub c: BigComplex,
    pub d: BigComplex,
    pub a: BigComplex,
    pub b: BigComplex,
}

/// Closed-form `t = 0` coefficients from the real sequences `a_m, b_m`.
/// `seq` must reach index `|k - l|`.
pub fn nn_coeffs_from(k: usize, l: usize, seq: &AbSequence, prec: Precision) -> Result<NNCoeffs> {
    let n = k.min(l);
    let m = k.abs_diff(l);
    if seq.n_max < m {
        return Err(Error::Domain(format!(
            "coefficient sequence reaches {} but index {m} is needed",
            seq.n_max
        )));
    }
    let bits = prec.bits();
    let e = e_pi_3(prec);
    let ec = e.conj();
    let am = Float::with_val(bits, &seq.a[m]);
    let bm = Float::with_val(bits, &seq.b[m]);
    let nf = Float::with_val(bits, n);
    let out = if m == 0 {
        // (n / (3 sqrt 3)) Gamma(1/3)/Gamma(2/3)
        let s = nf / (Float::with_val(bits, 3).sqrt() * 3u32) / b0(prec)?;
        let ib = BigComplex::imag(s);
        NNCoeffs {
            k,
            l,
            c: e.scale(&bm),
            d: ec.scale(&bm),
            a: -ib.clone(),
            b: ib,
        }
    } else {
        let bm1 = Float::with_val(bits, &seq.b[m - 1]);
        let small = Float::with_val(bits, &nf * &am) / m as u32;
        let large = Float::with_val(bits, (n + m) as u32) * &am / m as u32;
        if k <= l {
            NNCoeffs {
                k,
                l,
                c: -ec.scale(&bm1),
                d: ec.scale(&bm),
                a: -e.scale(&small),
                b: e.scale(&large),
            }
        } else {
            NNCoeffs {
                k,
                l,
                c: e.scale(&bm),
                d: -e.scale(&bm1),
                a: ec.scale(&large),
                b: -ec.scale(&small),
            }
        }
    };
    Ok(out)
}

/// [`nn_coeffs_from`] with its own certified sequence.
pub fn nn_coeffs(k: usize, l: usize, prec: Precision) -> Result<NNCoeffs> {
    let seq = ab_sequence(k.abs_diff(l) + 1, prec.guarded(10))?;
    nn_coeffs_from(k, l, &seq, prec)
}

/// General-`t` coefficients from the recurrence data of both pairs.
///
/// `(n, n+m)` family, `m > 0`: `c = -beta^{(2)}_{m-1}`, `d = beta^{(2)}_m`,
/// `a = -(n/m) gamma2^{(2)}_m`, `b = ((n+m)/m) gamma2^{(2)}_m`. The mirrored
/// family swaps the roles of the pairs and of `c, d` and of `a, b`.
/// Diagonal: `c = beta^{(1)}_0`, `d = beta^{(2)}_0`,
/// `b = -a = (n/3) / (beta^{(2)}_0 - beta^{(1)}_0)`.
pub fn nn_coeffs_t_from(k: usize, l: usize, rec: &PairRecurrence) -> Result<NNCoeffs> {
    let n = k.min(l);
    let m = k.abs_diff(l);
    if rec.len() <= m {
        return Err(Error::Domain(format!(
            "recurrence data reaches {} but index {m} is needed",
            rec.len().saturating_sub(1)
        )));
    }
    let prec = rec.precision;
    let bits = prec.bits();
    use ContourPair::{G01, G02};
    if m == 0 {
        let b1 = rec.beta(G01, 0);
        let b2 = rec.beta(G02, 0);
        let den = b2 - b1;
        if den.abs() <= prec.tol(10) {
            return Err(Error::Domain(
                "beta_0 coincides on both pairs; diagonal coefficient is undefined".into(),
            ));
        }
        let num = BigComplex::from_real(Float::with_val(bits, n) / 3u32);
        let bb = &num / &den;
        return Ok(NNCoeffs {
            k,
            l,
            c: b1.clone(),
            d: b2.clone(),
            a: -bb.clone(),
            b: bb,
        });
    }
    let small = Float::with_val(bits, n) / m as u32;
    let large = Float::with_val(bits, n + m) / m as u32;
    Ok(if k <= l {
        let g = rec.gamma2(G02, m);
        NNCoeffs {
            k,
            l,
            c: -rec.beta(G02, m - 1),
            d: rec.beta(G02, m).clone(),
            a: -g.scale(&small),
            b: g.scale(&large),
        }
    } else {
        let g = rec.gamma2(G01, m);
        NNCoeffs {
            k,
            l,
            c: rec.beta(G01, m).clone(),
            d: -rec.beta(G01, m - 1),
            a: g.scale(&large),
            b: -g.scale(&small),
        }
    })
}

/// [`nn_coeffs_t_from`] with freshly computed recurrence data.
pub fn nn_coeffs_t(k: usize, l: usize, t: &Float, prec: Precision) -> Result<NNCoeffs> {
    let rec = PairRecurrence::compute(k.abs_diff(l) + 1, t, prec)?;
    nn_coeffs_t_from(k, l, &rec)
}

/// A construction request.
#[derive(Clone, Debug)]
pub struct MopRequest {
    pub k: usize,
    pub l: usize,
    pub t: Float,
    pub precision: Precision,
}

impl MopRequest {
    pub fn new(k: usize, l: usize, t: Float, precision: Precision) -> Result<Self> {
        check_cap(k, l, DEGREE_CAP)?;
        Ok(MopRequest { k, l, t, precision })
    }

    pub fn build(&self) -> Result<Polynomial> {
        build_t(self.k, self.l, &self.t, self.precision)
    }
}

fn check_cap(k: usize, l: usize, cap: usize) -> Result<()> {
    if k + l > cap {
        return Err(Error::Domain(format!(
            "degree k + l = {} exceeds the cap {cap}",
            k + l
        )));
    }
    Ok(())
}

/// Integer polynomial `R_n` with `P_{n,n} = R_n / 3^n` at `t = 0`, from
/// `R_n = 3 x^2 R_{n-1} - R_{n-1}'`, `R_0 = 1`.
pub fn diagonal_integer(n: usize) -> Vec<Integer> {
    let mut r = vec![Integer::from(1)];
    for _ in 0..n {
        let deg = r.len() - 1;
        let mut next = vec![Integer::new(); deg + 3];
        for (j, c) in r.iter().enumerate() {
            next[j + 2] += Integer::from(c * 3u32);
            if j >= 1 {
                next[j - 1] -= Integer::from(c * j as u32);
            }
        }
        r = next;
    }
    r
}

/// Exact rational coefficients of `P_{n,n}` at `t = 0`, ascending.
pub fn diagonal_rational(n: usize) -> Vec<Rational> {
    let den = Integer::from(Integer::u_pow_u(3, n as u32));
    diagonal_integer(n)
        .into_iter()
        .map(|c| Rational::from((c, den.clone())))
        .collect()
}

/// `p_m` on `pair` from the three-term recurrence.
fn ordinary(m: usize, pair: ContourPair, rec: &PairRecurrence, prec: Precision) -> Polynomial {
    let mut prev = Polynomial::new(vec![BigComplex::zero(prec)], prec);
    let mut cur = Polynomial::one(prec);
    for j in 0..m {
        let xb = cur.shift_up();
        let next = xb
            .add_scaled(&cur, &-rec.beta(pair, j))
            .add_scaled(&prev, &-rec.gamma2(pair, j));
        prev = cur;
        cur = next;
    }
    cur
}

/// `Q -> (x^2 - t/3) Q - Q'/3`.
fn raise(q: &Polynomial, t3: &BigComplex) -> Polynomial {
    let prec = q.precision();
    let d = q.derivative();
    let x2q = q.shift_up().shift_up();
    let third = BigComplex::from_real(Float::with_val(prec.bits(), -1) / 3u32);
    let mut out = x2q.add_scaled(&d, &third);
    if !t3.is_zero() {
        out = out.add_scaled(q, &-t3);
    }
    Polynomial::monic(out.into_coeffs(), prec).expect("raising keeps the leading term")
}

/// `P_{k,l}` at `t = 0`.
pub fn build(k: usize, l: usize, prec: Precision) -> Result<Polynomial> {
    let zero = Float::with_val(prec.bits(), 0);
    build_t(k, l, &zero, prec)
}

/// `P_{k,l}` for the weight `e^{-x^3 + t x}`.
pub fn build_t(k: usize, l: usize, t: &Float, prec: Precision) -> Result<Polynomial> {
    check_cap(k, l, DEGREE_CAP)?;
    if k == l && t.is_zero() {
        return Ok(Polynomial::from_rationals(&diagonal_rational(k), prec));
    }
    let work = prec.guarded(GUARD);
    let m = k.abs_diff(l);
    let rec = PairRecurrence::compute(m, t, work)?;
    Ok(build_with(k, l, &rec)?.with_precision(prec))
}

/// [`build_t`] from given recurrence data (of length at least `|k-l|+1`),
/// at the data's precision.
pub fn build_with(k: usize, l: usize, rec: &PairRecurrence) -> Result<Polynomial> {
    let prec = rec.precision;
    let m = k.abs_diff(l);
    if rec.len() <= m {
        return Err(Error::Domain(format!("recurrence data too short for m = {m}")));
    }
    let pair = if l >= k { ContourPair::G02 } else { ContourPair::G01 };
    let mut q = ordinary(m, pair, rec, prec);
    let t3 = BigComplex::from_real(Float::with_val(prec.bits(), &rec.t / 3u32));
    for _ in 0..k.min(l) {
        q = raise(&q, &t3);
    }
    Ok(q)
}

/// `P_{k,l}` from the nearest-neighbour recurrences at `t = 0`.
pub fn build_via_nn(k: usize, l: usize, prec: Precision) -> Result<Polynomial> {
    let zero = Float::with_val(prec.bits(), 0);
    build_via_nn_t(k, l, &zero, prec)
}

/// Nearest-neighbour construction for general `t`.
///
/// Nodes are generated level by level in `s = i + j`, restricted to the band
/// `j - i in [min(0,d) - 2, max(0,d) + 2]` with `d = l - k`, keeping two
/// levels. A node `(i, j)` comes from the second relation at `(i, j-1)` when
/// all three of its inputs lie in the band, otherwise from the first
/// relation at `(i-1, j)`; edge nodes use the only relation available.
/// Inputs outside the quadrant carry a vanishing coefficient.
pub fn build_via_nn_t(k: usize, l: usize, t: &Float, prec: Precision) -> Result<Polynomial> {
    check_cap(k, l, DEGREE_CAP)?;
    let work = prec.guarded(GUARD);
    let d = l as i64 - k as i64;
    let lo = d.min(0) - 2;
    let hi = d.max(0) + 2;
    let m_need = (lo.unsigned_abs().max(hi.unsigned_abs()) + 1) as usize;
    let rec = PairRecurrence::compute(m_need, t, work)?;
    let table = NNTable::new(&rec, m_need)?;
    let zero = Polynomial::new(vec![BigComplex::zero(work)], work);

    // level s-1 and level s, keyed by e = j - i
    let mut older: BTreeMap<i64, Polynomial> = BTreeMap::new();
    let mut level: BTreeMap<i64, Polynomial> = BTreeMap::new();
    level.insert(0, Polynomial::one(work));
    let target = (k + l) as i64;
    for s in 0..target {
        let mut next = BTreeMap::new();
        let s1 = s + 1;
        let mut e = -s1;
        while e <= s1 {
            if e >= lo && e <= hi {
                let i = (s1 - e) / 2;
                let j = (s1 + e) / 2;
                let get = |map: &BTreeMap<i64, Polynomial>, key: i64, valid: bool| -> Polynomial {
                    if valid {
                        map.get(&key).cloned().unwrap_or_else(|| zero.clone())
                    } else {
                        zero.clone()
                    }
                };
                let use_second = i == 0 || (j > 0 && e - 2 >= lo);
                let p = if use_second {
                    // from (i, j-1): P_{i,j} = x P - d P - a P_{i-1,j-1} - b P_{i,j-2}
                    let nn = table.get(i as usize, (j - 1) as usize);
                    let src = level.get(&(e - 1)).cloned().unwrap_or_else(|| zero.clone());
                    let pa = get(&older, e, i >= 1 && j >= 1);
                    let pb = get(&older, e - 2, j >= 2);
                    src.shift_up()
                        .add_scaled(&src, &-&nn.d)
                        .add_scaled(&pa, &-&nn.a)
                        .add_scaled(&pb, &-&nn.b)
                } else {
                    // from (i-1, j): P_{i,j} = x P - c P - a P_{i-2,j} - b P_{i-1,j-1}
                    let nn = table.get((i - 1) as usize, j as usize);
                    let src = level.get(&(e + 1)).cloned().unwrap_or_else(|| zero.clone());
                    let pa = get(&older, e + 2, i >= 2);
                    let pb = get(&older, e, i >= 1 && j >= 1);
                    src.shift_up()
                        .add_scaled(&src, &-&nn.c)
                        .add_scaled(&pa, &-&nn.a)
                        .add_scaled(&pb, &-&nn.b)
                };
                next.insert(e, p);
            }
            e += 2;
        }
        older = std::mem::replace(&mut level, next);
    }
    let p = level
        .remove(&d)
        .ok_or_else(|| Error::Inconsistent(format!("node ({k},{l}) was not reached")))?;
    Ok(Polynomial::monic(p.into_coeffs(), work)?.with_precision(prec))
}

/// Coefficients depend on `(n, m)` only through `n` linearly, so a table of
/// the `m`-dependent pieces is enough for every node of the band.
struct NNTable<'a> {
    rec: &'a PairRecurrence,
}

impl<'a> NNTable<'a> {
    fn new(rec: &'a PairRecurrence, m_need: usize) -> Result<Self> {
        if rec.len() <= m_need {
            return Err(Error::Domain("recurrence data too short for the band".into()));
        }
        Ok(NNTable { rec })
    }

    fn get(&self, k: usize, l: usize) -> NNCoeffs {
        nn_coeffs_t_from(k, l, self.rec).expect("band stays within the data")
    }
}

/// Largest relative orthogonality defect of `P` against the first `k`
/// powers on `G01` and the first `l` on `G02`: each `|sum_j p_j m_{i+j}|` is
/// divided by the largest `|p_j m_{i+j}|`.
pub fn orthogonality_residual(p: &Polynomial, k: usize, l: usize, t: &Float) -> Result<Float> {
    if p.degree() != k + l {
        return Err(Error::Domain(format!(
            "polynomial has degree {}, expected {}",
            p.degree(),
            k + l
        )));
    }
    let prec = p.precision();
    let bits = prec.bits();
    let kmax = p.degree() + k.max(l);
    let mut worst = Float::with_val(bits, 0);
    for (pair, count) in [(ContourPair::G01, k), (ContourPair::G02, l)] {
        if count == 0 {
            continue;
        }
        let table = MomentTable::new(pair, t, kmax, prec)?;
        for i in 0..count {
            let mut sum = BigComplex::zero(prec);
            let mut largest = Float::with_val(bits, 0);
            for (j, c) in p.coeffs().iter().enumerate() {
                let term = c * table.get(i + j);
                let a = term.abs();
                if a > largest {
                    largest = a;
                }
                sum += &term;
            }
            if largest.is_zero() {
                continue;
            }
            let r = sum.abs() / largest;
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}

/// Max-coefficient residuals `(r1, r2)` of both nearest-neighbour relations
/// at `(k, l)`, built from [`build_with`] at the data's precision.
pub fn recurrence_residual(k: usize, l: usize, rec: &PairRecurrence, nn: &NNCoeffs) -> Result<(Float, Float)> {
    let prec = rec.precision;
    let zero = Polynomial::new(vec![BigComplex::zero(prec)], prec);
    let p = build_with(k, l, rec)?;
    let pk1 = build_with(k + 1, l, rec)?;
    let pl1 = build_with(k, l + 1, rec)?;
    let pa = if k >= 1 { build_with(k - 1, l, rec)? } else { zero.clone() };
    let pb = if l >= 1 { build_with(k, l - 1, rec)? } else { zero };
    let xp = p.shift_up();
    let rhs1 = pk1.add_scaled(&p, &nn.c).add_scaled(&pa, &nn.a).add_scaled(&pb, &nn.b);
    let rhs2 = pl1.add_scaled(&p, &nn.d).add_scaled(&pa, &nn.a).add_scaled(&pb, &nn.b);
    let r1 = xp.sub(&rhs1);
    let r2 = xp.sub(&rhs2);
    let scale = {
        let mut s = xp.max_abs_coeff();
        if s < 1 {
            s = Float::with_val(prec.bits(), 1);
        }
        s
    };
    Ok((r1.max_abs_coeff() / &scale, r2.max_abs_coeff() / scale))
}

/// JSON export of a polynomial with its request metadata.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyExport {
    pub k: usize,
    pub l: usize,
    pub t: String,
    pub precision: Precision,
    pub coeffs: Vec<[String; 2]>,
}

impl PolyExport {
    pub fn new(p: &Polynomial, k: usize, l: usize, t: &Float) -> Self {
        PolyExport {
            k,
            l,
            t: format_real(t, p.precision().digits()),
            precision: p.precision(),
            coeffs: p.to_pairs(),
        }
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        Polynomial::from_pairs(&self.coeffs, self.precision)
    }

    pub fn t_value(&self) -> Result<Float> {
        parse_real(&self.t, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(60).unwrap()
    }

    fn rat(v: &[(i64, i64)]) -> Polynomial {
        let qs: Vec<Rational> = v.iter().map(|&(a, b)| Rational::from((a, b))).collect();
        Polynomial::from_rationals(&qs, p())
    }

    #[test]
    fn small_diagonal_polynomials() {
        assert_eq!(build(0, 0, p()).unwrap(), Polynomial::one(p()));
        assert_eq!(build(1, 1, p()).unwrap(), Polynomial::monomial(2, p()));
        assert_eq!(build(2, 2, p()).unwrap(), rat(&[(0, 1), (-2, 3), (0, 1), (0, 1), (1, 1)]));
        assert_eq!(
            build(3, 3, p()).unwrap(),
            rat(&[(2, 9), (0, 1), (0, 1), (-2, 1), (0, 1), (0, 1), (1, 1)])
        );
    }

    #[test]
    fn p10_is_linear_factor() {
        let q = build_via_nn(1, 0, p()).unwrap();
        let beta0 = e_pi_3(p()).scale(&b0(p()).unwrap());
        assert_eq!(q.degree(), 1);
        assert!((&q.coeffs()[0] + &beta0).abs() < p().tol(2));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(build(800, 701, p()).is_err());
        let zero = Float::with_val(p().bits(), 0);
        assert!(MopRequest::new(1000, 600, zero, p()).is_err());
    }

    #[test]
    fn diagonal_a_coefficient_value() {
        let nn = nn_coeffs(1, 1, p()).unwrap();
        assert!(nn.a.re.is_zero());
        assert!((nn.a.im.to_f64() + 0.380736379287403).abs() < 1e-14, "{}", nn.a.im.to_f64());
    }

    #[test]
    fn negative_control_orthogonality() {
        let zero = Float::with_val(p().bits(), 0);
        let q = rat(&[(1, 1), (0, 1), (1, 1)]);
        assert!(orthogonality_residual(&q, 1, 1, &zero).unwrap() > 1e-3);
        let x2 = Polynomial::monomial(2, p());
        assert!(orthogonality_residual(&x2, 1, 1, &zero).unwrap() < p().tol(25));
    }
}
