//! Contour moments of `e^{-x^3 + t x}` and the Hankel-determinant recurrence
//! oracle built from them.
//!
//! Each ray `Gamma_j = {arg z = 2 pi j / 3}` is oriented so that
//! `int_{Gamma_0} x^k e^{-x^3} dx = Gamma((k+1)/3)/3` and
//! `int_{Gamma_j} x^k e^{-x^3} dx = -omega^{j(k+1)} Gamma((k+1)/3)/3` for
//! `j = 1, 2`. This is the only sign choice that reproduces the published
//! first recurrence coefficients of both pairs (see the tests); it is not
//! stated anywhere as a formula.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gamma_third, omega, BigComplex, Precision};

/// The two admissible unions of rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContourPair {
    /// `Gamma_0 ∪ Gamma_1`
    G01,
    /// `Gamma_0 ∪ Gamma_2`
    G02,
}

impl ContourPair {
    pub fn ray(self) -> u32 {
        match self {
            ContourPair::G01 => 1,
            ContourPair::G02 => 2,
        }
    }

    pub fn other(self) -> ContourPair {
        match self {
            ContourPair::G01 => ContourPair::G02,
            ContourPair::G02 => ContourPair::G01,
        }
    }
}

/// `omega^r` with `r` reduced mod 3, built exactly from its three values.
fn omega_pow(r: u64, prec: Precision) -> BigComplex {
    match r % 3 {
        0 => BigComplex::one(prec),
        1 => omega(prec),
        _ => omega(prec).conj(),
    }
}

/// `int_{Gamma_j} x^k e^{-x^3} dx` on a single ray, `j` in `0..3`.
pub fn ray_moment(j: u32, k: u64, prec: Precision) -> Result<BigComplex> {
    if j > 2 {
        return Err(Error::Domain(format!("ray index must be 0, 1 or 2, got {j}")));
    }
    let g = gamma_third(k as u32 + 1, prec)? / 3u32;
    if j == 0 {
        return Ok(BigComplex::from_real(g));
    }
    let w = omega_pow(j as u64 * (k + 1), prec);
    Ok(-w.scale(&g))
}

/// `m_k = int x^k e^{-x^3} dx` over the pair at `t = 0`.
pub fn moment(pair: ContourPair, k: i64, prec: Precision) -> Result<BigComplex> {
    if k < 0 {
        return Err(Error::Domain(format!("moment index must be non-negative, got {k}")));
    }
    let k = k as u64;
    let r = (pair.ray() as u64 * (k + 1)) % 3;
    if r == 0 {
        return Ok(BigComplex::zero(prec));
    }
    let g = gamma_third(k as u32 + 1, prec)? / 3u32;
    let one = BigComplex::one(prec);
    Ok((&one - &omega_pow(r, prec)).scale(&g))
}

const SERIES_CAP: usize = 200_000;

/// `m_k(t) = sum_j t^j/j! m_{k+j}(0)`, stopped when the current term bound is
/// below `tol * 1e-5` and the ratio-test tail bound is below `tol`.
pub fn moment_t(pair: ContourPair, k: i64, t: &Float, tol: &Float, prec: Precision) -> Result<BigComplex> {
    if k < 0 {
        return Err(Error::Domain(format!("moment index must be non-negative, got {k}")));
    }
    if *tol <= 0 {
        return Err(Error::Domain("series tolerance must be positive".into()));
    }
    if t.is_zero() {
        return moment(pair, k, prec);
    }
    let mut guard = 20u32;
    loop {
        let work = prec.guarded(guard);
        let (sum, max_term) = moment_series(pair, k as u64, t, tol, work)?;
        // Re-run with more digits when the summands dwarf the result.
        let lost = match (crate::numeric::log10_abs(&max_term), crate::numeric::log10_abs(&sum.abs())) {
            (Some(a), Some(b)) => (a - b).max(0.0),
            (Some(_), None) => f64::INFINITY,
            _ => 0.0,
        };
        if lost + 5.0 < guard as f64 || guard > 4 * prec.digits() + 200 {
            return Ok(sum.with_prec(prec));
        }
        guard = if lost.is_finite() { lost.ceil() as u32 + 25 } else { guard * 2 };
    }
}

fn moment_series(pair: ContourPair, k: u64, t: &Float, tol: &Float, work: Precision) -> Result<(BigComplex, Float)> {
    let bits = work.bits();
    let lo = 64u32;
    let sqrt3 = Float::with_val(lo, 3).sqrt();
    let abs_t = Float::with_val(lo, t.abs_ref());
    let tol_term = Float::with_val(lo, tol) / 100_000u32;
    let tol_lo = Float::with_val(lo, tol);
    let mut sum = BigComplex::zero(work);
    let mut coef = Float::with_val(bits, 1);
    let mut max_term = Float::with_val(lo, 0);
    let mut j = 0usize;
    loop {
        let idx = k + j as u64;
        let m = moment(pair, idx as i64, work)?;
        let term = m.scale(&coef);
        let mag = Float::with_val(lo, term.abs());
        if mag > max_term {
            max_term = mag;
        }
        sum += &term;
        // upper bounds for |term_j| and |term_{j+1}| via |1 - omega^r| <= sqrt 3
        let g_j = Float::with_val(lo, gamma_third(idx as u32 + 1, work)?);
        let g_next = Float::with_val(lo, gamma_third(idx as u32 + 2, work)?);
        let coef_lo = Float::with_val(lo, coef.abs_ref());
        let bound_j = Float::with_val(lo, &coef_lo * &g_j) * &sqrt3 / 3u32;
        let q = Float::with_val(lo, &abs_t * &g_next) / &g_j / (j as u32 + 1);
        if q < 1 {
            let next = Float::with_val(lo, &bound_j * &q);
            let tail = Float::with_val(lo, &next / (Float::with_val(lo, 1) - &q));
            if bound_j < tol_term && tail < tol_lo {
                return Ok((sum, max_term));
            }
        }
        j += 1;
        if j > SERIES_CAP {
            return Err(Error::SeriesDivergence {
                context: format!("moment_t(k={k}, t={})", t.to_f64()),
                terms: j,
            });
        }
        coef *= t;
        coef /= j as u32;
    }
}

/// Moments `m_0(t), ..., m_K(t)` on one pair.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub pair: ContourPair,
    pub t: Float,
    pub m: Vec<BigComplex>,
    pub precision: Precision,
}

impl MomentTable {
    pub fn new(pair: ContourPair, t: &Float, kmax: usize, prec: Precision) -> Result<Self> {
        let mut m = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            if t.is_zero() {
                m.push(moment(pair, k as i64, prec)?);
            } else {
                let scale = gamma_third(k as u32 + 1, prec)? / 3u32;
                let tol = scale * prec.tol(-10);
                m.push(moment_t(pair, k as i64, t, &tol, prec)?);
            }
        }
        Ok(MomentTable {
            pair,
            t: Float::with_val(prec.bits(), t),
            m,
            precision: prec,
        })
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn get(&self, k: usize) -> &BigComplex {
        &self.m[k]
    }
}

/// Determinant by Gaussian elimination with partial (modulus) pivoting. Also
/// returns the Hadamard bound `prod_i |row_i|` used to judge resolution.
pub fn determinant(mut a: Vec<Vec<BigComplex>>, prec: Precision) -> (BigComplex, Float) {
    let n = a.len();
    let bits = prec.bits();
    let mut hadamard = Float::with_val(bits, 1);
    for row in &a {
        let mut s = Float::with_val(bits, 0);
        for c in row {
            s += c.norm_sqr();
        }
        hadamard *= s.sqrt();
    }
    if n == 0 {
        return (BigComplex::one(prec), hadamard);
    }
    let mut det = BigComplex::one(prec);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col][col].norm_sqr();
        for (r, row) in a.iter().enumerate().skip(col + 1) {
            let v = row[col].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_zero() {
            return (BigComplex::zero(prec), hadamard);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        let inv = pivot.recip();
        let (top, rest) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in rest.iter_mut() {
            let f = &row[col] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let d = &prow[c] * &f;
                row[c] -= &d;
            }
        }
    }
    (det, hadamard)
}

/// Recurrence coefficients from Hankel determinants of a moment table.
#[derive(Clone, Debug)]
pub struct HankelOracle {
    pub pair: ContourPair,
    /// `beta_n` for `n = 0..=nmax`
    pub beta: Vec<BigComplex>,
    /// `gamma^2_n` for `n = 0..=nmax`, with `gamma^2_0 = 0`
    pub gamma2: Vec<BigComplex>,
    /// Hankel determinants `Delta_0 = 1, ..., Delta_{nmax+1}`
    pub delta_det: Vec<BigComplex>,
    /// `delta_n`, the coefficient of `x^{n-1}` in the monic `p_n`
    pub delta: Vec<BigComplex>,
    pub precision: Precision,
}

impl HankelOracle {
    /// Eliminates at `w = 2p` digits and fails if any needed `Delta_n` is
    /// below `10^{20-w}` times its Hadamard bound, i.e. when the Hankel
    /// matrix is too ill-conditioned to resolve at `w` digits.
    pub fn new(pair: ContourPair, nmax: usize, t: &Float, prec: Precision) -> Result<Self> {
        let work = prec.doubled();
        let table = MomentTable::new(pair, t, 2 * nmax + 2, work)?;
        Self::from_table(&table, nmax, prec)
    }

    pub fn from_table(table: &MomentTable, nmax: usize, prec: Precision) -> Result<Self> {
        let work = table.precision;
        if table.len() < 2 * nmax + 2 {
            return Err(Error::Domain(format!(
                "moment table of length {} is too short for n = {nmax}",
                table.len()
            )));
        }
        let threshold = work.tol(20);
        let mut dets = vec![BigComplex::one(work)];
        let mut stars = vec![BigComplex::zero(work)];
        for n in 1..=nmax + 1 {
            let h: Vec<Vec<BigComplex>> = (0..n)
                .map(|i| (0..n).map(|j| table.get(i + j).clone()).collect())
                .collect();
            let (d, bound) = determinant(h, work);
            if d.abs() <= Float::with_val(work.bits(), &bound * &threshold) {
                return Err(Error::PrecisionExhausted {
                    context: format!("Hankel determinant Delta_{n}"),
                    digits: prec.digits(),
                });
            }
            let hs: Vec<Vec<BigComplex>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let col = if j + 1 == n { n } else { j };
                            table.get(i + col).clone()
                        })
                        .collect()
                })
                .collect();
            let (s, _) = determinant(hs, work);
            dets.push(d);
            stars.push(s);
        }
        let delta: Vec<BigComplex> = (0..=nmax + 1)
            .map(|n| if n == 0 { BigComplex::zero(work) } else { -(&stars[n] / &dets[n]) })
            .collect();
        let mut beta = Vec::with_capacity(nmax + 1);
        let mut gamma2 = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            beta.push((&delta[n] - &delta[n + 1]).with_prec(prec));
            if n == 0 {
                gamma2.push(BigComplex::zero(prec));
            } else {
                let num = &dets[n + 1] * &dets[n - 1];
                gamma2.push((&num / &dets[n].square()).with_prec(prec));
            }
        }
        Ok(HankelOracle {
            pair: table.pair,
            beta,
            gamma2,
            delta_det: dets.into_iter().map(|d| d.with_prec(prec)).collect(),
            delta: delta.into_iter().map(|d| d.with_prec(prec)).collect(),
            precision: prec,
        })
    }
}

/// `(beta_n, gamma^2_n)` from Hankel determinants of the moments on `pair`.
pub fn hankel_recurrence_oracle(pair: ContourPair, n: usize, t: &Float, prec: Precision) -> Result<(BigComplex, BigComplex)> {
    let o = HankelOracle::new(pair, n, t, prec)?;
    Ok((o.beta[n].clone(), o.gamma2[n].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{b0, e_pi_3};

    fn p() -> Precision {
        Precision::new(60).unwrap()
    }

    fn near(a: &BigComplex, b: &BigComplex, tol: &Float) -> bool {
        (a - b).abs() <= *tol
    }

    #[test]
    fn m0_on_g02_closed_form() {
        let m = moment(ContourPair::G02, 0, p()).unwrap();
        let g = gamma_third(1, p()).unwrap() / 3u32;
        let one = BigComplex::one(p());
        let expect = (&one - &omega(p()).square()).scale(&g);
        assert!(near(&m, &expect, &p().tol(2)));
        let c = m.to_c64();
        assert!((c.re - 1.339469).abs() < 1e-5, "{c}");
        assert!((c.im - 0.773343).abs() < 1e-5, "{c}");
    }

    #[test]
    fn first_ratio_pins_orientation() {
        let r = &moment(ContourPair::G01, 1, p()).unwrap() / &moment(ContourPair::G01, 0, p()).unwrap();
        let expect = e_pi_3(p()).scale(&b0(p()).unwrap());
        assert!(near(&r, &expect, &p().tol(3)));
        let r2 = &moment(ContourPair::G02, 1, p()).unwrap() / &moment(ContourPair::G02, 0, p()).unwrap();
        assert!(near(&r2, &expect.conj(), &p().tol(3)));
    }

    #[test]
    fn single_ray_second_moment() {
        let m = ray_moment(0, 2, p()).unwrap();
        let third = Float::with_val(p().bits(), 1) / 3u32;
        assert!(near(&m, &BigComplex::from_real(third), &p().tol(2)));
    }

    #[test]
    fn negative_index_rejected() {
        assert!(moment(ContourPair::G01, -1, p()).is_err());
        let t = Float::with_val(p().bits(), 0.5);
        assert!(moment_t(ContourPair::G01, -2, &t, &p().tol(0), p()).is_err());
    }

    #[test]
    fn pairs_are_conjugate() {
        let t = Float::with_val(p().bits(), 0.5);
        for k in 0..8 {
            let a = moment_t(ContourPair::G01, k, &t, &p().tol(0), p()).unwrap();
            let b = moment_t(ContourPair::G02, k, &t, &p().tol(0), p()).unwrap();
            assert!(near(&a, &b.conj(), &p().tol(4)), "k={k}");
        }
    }

    #[test]
    fn second_moment_identity_at_general_t() {
        // integration by parts: m_2(t) = (t/3) m_0(t)
        for tv in [-1.0, 0.5, 2.0] {
            let t = Float::with_val(p().bits(), tv);
            let m0 = moment_t(ContourPair::G02, 0, &t, &p().tol(0), p()).unwrap();
            let m2 = moment_t(ContourPair::G02, 2, &t, &p().tol(0), p()).unwrap();
            let rhs = m0.scale(&Float::with_val(p().bits(), &t / 3u32));
            assert!(near(&m2, &rhs, &p().tol(4)), "t={tv}");
        }
    }

    #[test]
    fn oracle_first_coefficient() {
        let zero = Float::with_val(p().bits(), 0);
        let (beta, g2) = hankel_recurrence_oracle(ContourPair::G01, 0, &zero, p()).unwrap();
        let expect = e_pi_3(p()).scale(&b0(p()).unwrap());
        assert!(near(&beta, &expect, &p().tol(3)));
        assert!(g2.is_zero());
        let (beta2, _) = hankel_recurrence_oracle(ContourPair::G02, 0, &zero, p()).unwrap();
        assert!(near(&beta2, &beta.conj(), &p().tol(3)));
    }

    #[test]
    fn determinant_of_small_matrix() {
        let c = |re: f64, im: f64| BigComplex::from_f64(re, im, p());
        let a = vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, 3.0), c(4.0, 0.0)]];
        let (d, _) = determinant(a, p());
        assert!(near(&d, &c(4.0, -2.0), &p().tol(2)));
    }
}
