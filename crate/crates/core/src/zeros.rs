//! Zeros of `P_{k,l}`: simultaneous Aberth–Ehrlich iteration at the working
//! precision, Newton polishing at twice that, and the ray bookkeeping.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{format_real, log10_abs, omega, BigComplex, Polynomial, Precision};

/// Sweep limit of the simultaneous iteration.
pub const MAX_SWEEPS: usize = 1000;

/// Default tolerance, in radians, for placing a root on a ray line.
pub const DEFAULT_TOL_ARG: f64 = 1e-10;

/// Where a root sits relative to the three rays `Gamma_j = {arg z = 2 pi j/3}`
/// and their opposites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RayClass {
    #[serde(rename = "G0")]
    Gamma0,
    #[serde(rename = "G1")]
    Gamma1,
    #[serde(rename = "G2")]
    Gamma2,
    #[serde(rename = "-G0")]
    MinusGamma0,
    #[serde(rename = "-G1")]
    MinusGamma1,
    #[serde(rename = "-G2")]
    MinusGamma2,
    #[serde(rename = "off")]
    OffRay,
}

impl RayClass {
    /// Index of the line (`0, 1, 2`) containing the ray, if any.
    pub fn line(self) -> Option<usize> {
        match self {
            RayClass::Gamma0 | RayClass::MinusGamma0 => Some(0),
            RayClass::Gamma1 | RayClass::MinusGamma1 => Some(1),
            RayClass::Gamma2 | RayClass::MinusGamma2 => Some(2),
            RayClass::OffRay => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RayClass::Gamma0 => "G0",
            RayClass::Gamma1 => "G1",
            RayClass::Gamma2 => "G2",
            RayClass::MinusGamma0 => "-G0",
            RayClass::MinusGamma1 => "-G1",
            RayClass::MinusGamma2 => "-G2",
            RayClass::OffRay => "off",
        }
    }
}

/// Nonzero roots with certificates, plus the multiplicity of the root at 0.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub degree: usize,
    pub roots: Vec<BigComplex>,
    /// `|P(z)|` at the polishing precision
    pub residuals: Vec<Float>,
    /// `|P(z)/P'(z)|` at the polishing precision
    pub newton_residuals: Vec<Float>,
    pub origin_multiplicity: usize,
    pub precision: Precision,
    pub sweeps: usize,
}

/// `P(x) = x^shift R(x^stride)` with `R` stored densely.
struct Strided {
    shift: usize,
    stride: usize,
    r: Vec<BigComplex>,
    /// `|r_j|` at 64 bits, for the rounding-error bound
    mags: Vec<Float>,
}

fn is_negligible(c: &BigComplex, cutoff: &Float) -> bool {
    c.is_zero() || c.abs() <= *cutoff
}

impl Strided {
    fn new(p: &Polynomial, prec: Precision, cutoff: &Float) -> Self {
        let cs = p.coeffs();
        let shift = cs
            .iter()
            .take_while(|c| is_negligible(c, cutoff))
            .count()
            .min(p.degree());
        let tail = &cs[shift..];
        let deg = tail.len() - 1;
        let mut stride = 0usize;
        for (j, c) in tail.iter().enumerate().skip(1) {
            if !is_negligible(c, cutoff) {
                stride = gcd(stride, j);
            }
        }
        if stride == 0 {
            stride = deg.max(1);
        }
        let r: Vec<BigComplex> = (0..=deg / stride)
            .map(|i| tail[i * stride].with_prec(prec))
            .collect();
        let mags = r.iter().map(|c| Float::with_val(64, c.abs())).collect();
        Strided { shift, stride, r, mags }
    }

    fn reduced_degree(&self) -> usize {
        (self.r.len() - 1) * self.stride
    }

    /// `(Q(z), Q'(z))` with `Q(x) = R(x^stride)`.
    fn eval(&self, z: &BigComplex) -> (BigComplex, BigComplex) {
        let bits = self.r[0].prec();
        let z = z.with_bits(bits);
        let g = self.stride;
        let zg1 = if g > 1 { z.powu(g as u32 - 1) } else { BigComplex::one_bits(bits) };
        let w = &zg1 * &z;
        let d = self.r.len() - 1;
        let mut p = self.r[d].clone();
        let mut dp = BigComplex::zero_bits(bits);
        let mut scratch = (Float::new(bits), Float::new(bits));
        for c in self.r[..d].iter().rev() {
            dp.horner_step(&w, &p, &mut scratch);
            p.horner_step(&w, c, &mut scratch);
        }
        let dq = (&dp * &zg1).scale_i64(g as i64);
        (p, dq)
    }

    /// `sum |r_j| |z|^{g j}` at 64 bits.
    fn magnitude(&self, z: &BigComplex) -> Float {
        let az = Float::with_val(64, z.abs());
        let w = Float::with_val(64, az.pow_u(self.stride as u32));
        let mut acc = Float::with_val(64, &self.mags[self.mags.len() - 1]);
        for m in self.mags[..self.mags.len() - 1].iter().rev() {
            acc *= &w;
            acc += m;
        }
        acc
    }
}

trait PowU {
    fn pow_u(&self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(&self, e: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Initial estimates from the upper convex hull of `(j, log10 |q_j|)`: each
/// hull edge of width `w` contributes `w` points on a circle of the edge's
/// radius, rotated by a fixed offset to avoid symmetric starts.
fn initial_guesses(q: &Polynomial) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, c)| log10_abs(&c.abs()).map(|lg| (j, lg)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(q.degree());
    for (seg, win) in hull.windows(2).enumerate() {
        let (j0, y0) = win[0];
        let (j1, y1) = win[1];
        let w = j1 - j0;
        let radius = 10f64.powf((y0 - y1) / w as f64);
        let offset = 0.4 + 0.7 * seg as f64;
        for i in 0..w {
            let theta = 2.0 * PI * i as f64 / w as f64 + offset;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

fn to_big(z: Complex64, prec: Precision) -> BigComplex {
    BigComplex::from_f64(z.re, z.im, prec)
}

/// All zeros of `p`, iterating at `prec` and polishing at `2 prec`.
pub fn find_zeros(p: &Polynomial, prec: Precision) -> Result<ZeroSet> {
    if p.degree() == 0 {
        return Err(Error::Domain("find_zeros needs degree at least 1".into()));
    }
    let scale = p.max_abs_coeff();
    let cutoff = Float::with_val(prec.bits(), &scale * prec.tol(25));
    let work = Strided::new(p, prec, &cutoff);
    let shift = work.shift;
    let reduced = work.reduced_degree();
    let mut result = ZeroSet {
        degree: p.degree(),
        roots: Vec::new(),
        residuals: Vec::new(),
        newton_residuals: Vec::new(),
        origin_multiplicity: shift,
        precision: prec,
        sweeps: 0,
    };
    if reduced == 0 {
        return Ok(result);
    }
    let q = {
        let cs: Vec<BigComplex> = (0..=reduced)
            .map(|j| {
                if j % work.stride == 0 {
                    work.r[j / work.stride].clone()
                } else {
                    BigComplex::zero(prec)
                }
            })
            .collect();
        Polynomial::new(cs, prec)
    };
    let guesses = initial_guesses(&q);
    let mut z: Vec<BigComplex> = guesses.iter().map(|&g| to_big(g, prec)).collect();
    let mut done = vec![false; reduced];
    let eps = prec.tol(3);
    let step_tol = prec.tol(4);
    let mut sweeps = 0;
    while done.iter().any(|d| !d) {
        if sweeps >= MAX_SWEEPS {
            let unconverged = done.iter().enumerate().filter(|(_, d)| !**d).map(|(i, _)| i).collect();
            return Err(Error::NoConvergence {
                iterations: sweeps,
                unconverged,
            });
        }
        sweeps += 1;
        let snap: Vec<Complex64> = z.iter().map(BigComplex::to_c64).collect();
        let updates: Vec<Option<(BigComplex, bool)>> = (0..reduced)
            .into_par_iter()
            .map(|i| {
                if done[i] {
                    return None;
                }
                let (v, dv) = work.eval(&z[i]);
                let bound = Float::with_val(64, work.magnitude(&z[i]) * &eps) * (reduced as u32);
                if Float::with_val(64, v.abs()) <= bound {
                    return Some((z[i].clone(), true));
                }
                if dv.is_zero() {
                    let nudge = BigComplex::from_f64(1e-3, 1e-3, prec);
                    return Some((&z[i] + &nudge, false));
                }
                let newton = &v / &dv;
                let nc = newton.to_c64();
                let zi = snap[i];
                let mut rep = Complex64::new(0.0, 0.0);
                for (j, &zj) in snap.iter().enumerate() {
                    if j != i {
                        let diff = zi - zj;
                        if diff.norm_sqr() > 0.0 {
                            rep += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - nc * rep;
                let step = if denom.is_finite() && denom.norm() > 1e-300 {
                    let dn = BigComplex::from_f64(denom.re, denom.im, prec);
                    &newton / &dn
                } else {
                    newton
                };
                let next = &z[i] - &step;
                let small = step.abs() <= Float::with_val(prec.bits(), next.abs() * &step_tol);
                Some((next, small))
            })
            .collect();
        for (i, u) in updates.into_iter().enumerate() {
            if let Some((zi, conv)) = u {
                z[i] = zi;
                done[i] = conv;
            }
        }
    }
    result.sweeps = sweeps;

    // polish every root at twice the precision
    let hi = prec.doubled();
    let hi_poly = Strided::new(&p.with_precision(hi), hi, &Float::with_val(hi.bits(), &cutoff));
    let polished: Vec<(BigComplex, Float, Float)> = z
        .par_iter()
        .map(|zi| polish(&hi_poly, zi, shift, hi))
        .collect();
    for (root, res, nres) in polished {
        result.roots.push(root.with_prec(prec));
        result.residuals.push(res);
        result.newton_residuals.push(nres);
    }
    Ok(result)
}

fn polish(q: &Strided, z0: &BigComplex, shift: usize, hi: Precision) -> (BigComplex, Float, Float) {
    let mut z = z0.with_prec(hi);
    let tol = hi.tol(5);
    let mut last = None::<Float>;
    for _ in 0..12 {
        let (v, dv) = q.eval(&z);
        if dv.is_zero() {
            break;
        }
        let step = &v / &dv;
        let s = step.abs();
        z = &z - &step;
        if s <= Float::with_val(hi.bits(), z.abs() * &tol) {
            break;
        }
        if let Some(l) = &last {
            if s >= *l {
                break;
            }
        }
        last = Some(s);
    }
    let (v, dv) = q.eval(&z);
    // P = z^shift Q, so P/P' = 1 / (shift/z + Q'/Q)
    let zs = z.powu(shift as u32);
    let res = (&v * &zs).abs();
    let nres = if v.is_zero() {
        Float::with_val(hi.bits(), 0)
    } else {
        let inv = &dv / &v;
        let tot = if shift > 0 {
            &inv + &z.recip().scale_i64(shift as i64)
        } else {
            inv
        };
        tot.recip().abs()
    };
    (z, res, nres)
}

impl ZeroSet {
    /// Total number of roots counted with the origin multiplicity.
    pub fn count(&self) -> usize {
        self.roots.len() + self.origin_multiplicity
    }

    pub fn max_newton_residual(&self) -> Float {
        let mut m = Float::with_val(self.precision.doubled().bits(), 0);
        for r in &self.newton_residuals {
            if *r > m {
                m = r.clone();
            }
        }
        m
    }

    /// Argument tolerance for root `i`: the larger of `tol_arg` and the
    /// root's relative error bound.
    fn tol_for(&self, i: usize, tol_arg: f64) -> f64 {
        let z = self.roots[i].abs();
        let r = Float::with_val(64, &self.newton_residuals[i] / z).to_f64();
        tol_arg.max(r * 10.0)
    }

    pub fn ray_classes(&self, tol_arg: f64) -> Vec<RayClass> {
        (0..self.roots.len())
            .map(|i| ray_class(&self.roots[i], self.tol_for(i, tol_arg)))
            .collect()
    }
}

fn angle_dist(a: &Float, b: &Float, two_pi: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b);
    let mut r = d.rem_euclid_ref(two_pi);
    if r > Float::with_val(r.prec(), two_pi / 2u32) {
        r = Float::with_val(r.prec(), two_pi - &r);
    }
    r.to_f64()
}

trait RemEuclid {
    fn rem_euclid_ref(&self, m: &Float) -> Float;
}

impl RemEuclid for Float {
    fn rem_euclid_ref(&self, m: &Float) -> Float {
        let q = Float::with_val(self.prec(), self / m).floor();
        Float::with_val(self.prec(), self - q * m)
    }
}

/// Tag of a nonzero root for a given argument tolerance.
pub fn ray_class(z: &BigComplex, tol_arg: f64) -> RayClass {
    let bits = z.prec();
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let two_pi = Float::with_val(bits, &pi * 2u32);
    let arg = z.arg();
    let tags = [
        (0u32, RayClass::Gamma0, RayClass::MinusGamma0),
        (1, RayClass::Gamma1, RayClass::MinusGamma1),
        (2, RayClass::Gamma2, RayClass::MinusGamma2),
    ];
    for (j, pos, neg) in tags {
        let dir = Float::with_val(bits, &two_pi * j) / 3u32;
        if angle_dist(&arg, &dir, &two_pi) <= tol_arg {
            return pos;
        }
        let opp = Float::with_val(bits, &dir + &pi);
        if angle_dist(&arg, &opp, &two_pi) <= tol_arg {
            return neg;
        }
    }
    RayClass::OffRay
}

/// Expected number of strictly positive zeros of `P_{n,n}`.
pub fn expected_positive_count(n: usize) -> usize {
    match n % 3 {
        0 => 2 * n / 3,
        1 => 2 * (n - 1) / 3,
        _ => 2 * (n - 2) / 3 + 1,
    }
}

/// Expected multiplicity of the zero at the origin of `P_{n,n}`.
pub fn expected_origin_multiplicity(n: usize) -> usize {
    match n % 3 {
        0 => 0,
        1 => 2,
        _ => 1,
    }
}

/// Counts per ray and line.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClassificationReport {
    pub counts: BTreeMap<RayClass, usize>,
    /// roots on the lines through `Gamma_0, Gamma_1, Gamma_2`
    pub line_counts: [usize; 3],
    pub off_ray: usize,
    pub off_ray_upper: usize,
    pub off_ray_lower: usize,
    pub off_ray_real: usize,
    pub origin_multiplicity: usize,
    pub positive_real: usize,
    /// For diagonal input: whether the positive and origin counts match the
    /// mod-3 table.
    pub diagonal_table_ok: Option<bool>,
    pub tags: Vec<RayClass>,
}

impl ClassificationReport {
    pub fn count(&self, c: RayClass) -> usize {
        self.counts.get(&c).copied().unwrap_or(0)
    }
}

/// Classifies the roots; `diagonal_n` enables the count table check for
/// `P_{n,n}`.
pub fn classify(z: &ZeroSet, tol_arg: f64, diagonal_n: Option<usize>) -> ClassificationReport {
    let tags = z.ray_classes(tol_arg);
    let mut counts = BTreeMap::new();
    let mut line_counts = [0usize; 3];
    let (mut up, mut low, mut real) = (0, 0, 0);
    for (root, tag) in z.roots.iter().zip(&tags) {
        *counts.entry(*tag).or_insert(0) += 1;
        match tag.line() {
            Some(j) => line_counts[j] += 1,
            None => {
                if root.im > 0 {
                    up += 1;
                } else if root.im < 0 {
                    low += 1;
                } else {
                    real += 1;
                }
            }
        }
    }
    let positive_real = counts.get(&RayClass::Gamma0).copied().unwrap_or(0);
    let diagonal_table_ok = diagonal_n.map(|n| {
        positive_real == expected_positive_count(n)
            && z.origin_multiplicity == expected_origin_multiplicity(n)
    });
    ClassificationReport {
        off_ray: up + low + real,
        counts,
        line_counts,
        off_ray_upper: up,
        off_ray_lower: low,
        off_ray_real: real,
        origin_multiplicity: z.origin_multiplicity,
        positive_real,
        diagonal_table_ok,
        tags,
    }
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[BigComplex], b: &[BigComplex]) -> Float {
    let bits = a.first().or(b.first()).map_or(64, |z| z.prec());
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            Float::with_val(bits, 0)
        } else {
            Float::with_val(bits, f64::INFINITY)
        };
    }
    let one_way = |xs: &[BigComplex], ys: &[BigComplex]| -> Float {
        let yc: Vec<Complex64> = ys.iter().map(BigComplex::to_c64).collect();
        let mut worst = Float::with_val(bits, 0);
        for x in xs {
            let xc = x.to_c64();
            // nearest few by f64, then exact distance
            let mut idx: Vec<usize> = (0..ys.len()).collect();
            idx.sort_by(|&i, &j| (yc[i] - xc).norm().total_cmp(&(yc[j] - xc).norm()));
            let mut best: Option<Float> = None;
            for &j in idx.iter().take(3) {
                let d = (x - &ys[j]).abs();
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
            let best = best.expect("non-empty");
            if best > worst {
                worst = best;
            }
        }
        worst
    };
    let d1 = one_way(a, b);
    let d2 = one_way(b, a);
    if d1 > d2 {
        d1
    } else {
        d2
    }
}

/// Hausdorff distance between the nonzero roots and their rotation by
/// `omega`.
pub fn rotation_symmetry_check(z: &ZeroSet) -> Float {
    let w = omega(z.precision);
    let rotated: Vec<BigComplex> = z.roots.iter().map(|r| r * &w).collect();
    hausdorff(&z.roots, &rotated)
}

/// Hausdorff distance between the roots of one set and the conjugates of
/// the other; also compares origin multiplicities.
pub fn conjugate_mirror_distance(a: &ZeroSet, b: &ZeroSet) -> Option<Float> {
    if a.origin_multiplicity != b.origin_multiplicity || a.roots.len() != b.roots.len() {
        return None;
    }
    let conj: Vec<BigComplex> = b.roots.iter().map(BigComplex::conj).collect();
    Some(hausdorff(&a.roots, &conj))
}

/// Positive real zeros (class `Gamma_0`), descending.
pub fn positive_real_zeros(z: &ZeroSet, tol_arg: f64) -> Vec<Float> {
    let tags = z.ray_classes(tol_arg);
    let mut xs: Vec<Float> = z
        .roots
        .iter()
        .zip(&tags)
        .filter(|(_, t)| **t == RayClass::Gamma0)
        .map(|(r, _)| r.re.clone())
        .collect();
    xs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    xs
}

/// Interlacing of the positive zeros `x` of `P_{n-1,n-1}` and `y` of
/// `P_{n,n}` (both descending): `x_j < y_j < x_{j-1}` with `x_0 = inf`, and
/// `0 < y_{k+1} < x_k` for a possible extra zero.
pub fn interlace_check(prev: &ZeroSet, cur: &ZeroSet) -> bool {
    let x = positive_real_zeros(prev, DEFAULT_TOL_ARG);
    let y = positive_real_zeros(cur, DEFAULT_TOL_ARG);
    interlace_sorted(&x, &y)
}

pub fn interlace_sorted(x: &[Float], y: &[Float]) -> bool {
    if y.len() != x.len() && y.len() != x.len() + 1 {
        return false;
    }
    for (j, yj) in y.iter().enumerate() {
        if *yj <= 0 {
            return false;
        }
        if j < x.len() && *yj <= x[j] {
            return false;
        }
        if j >= 1 && *yj >= x[j - 1] {
            return false;
        }
    }
    true
}

/// Positive zeros of `P_{n,n}` divided by `n^{1/3}`, ascending.
pub fn empirical_measure(z: &ZeroSet, n: usize) -> Vec<Float> {
    if n == 0 {
        return Vec::new();
    }
    let mut xs = positive_real_zeros(z, DEFAULT_TOL_ARG);
    xs.reverse();
    let bits = z.precision.bits();
    let s = Float::with_val(bits, n).cbrt();
    xs.into_iter().map(|x| Float::with_val(bits, x / &s)).collect()
}

/// Eigenvalues of the companion matrix in hardware precision; a cross-check
/// for degrees below 60.
pub fn companion_roots_f64(p: &Polynomial) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 || d >= 60 {
        return Err(Error::Domain(format!(
            "companion cross-check needs 1 <= degree < 60, got {d}"
        )));
    }
    let lead = p.leading().to_c64();
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for j in 0..d {
        m[(j, d - 1)] = -p.coeffs()[j].to_c64() / lead;
    }
    let eig = m
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Inconsistent("companion Schur form did not converge".into()))?;
    Ok(eig.iter().copied().collect())
}

/// JSON export of a zero set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ZeroExport {
    pub k: usize,
    pub l: usize,
    pub t: String,
    pub precision: Precision,
    pub origin_multiplicity: usize,
    pub roots: Vec<[String; 2]>,
    pub ray_class: Vec<RayClass>,
    /// factor the roots are divided by in `scaled_roots`
    pub scale: String,
    pub scaled_roots: Vec<[String; 2]>,
}

impl ZeroExport {
    pub fn new(z: &ZeroSet, k: usize, l: usize, t: &Float, scale: &Float, digits: u32) -> Self {
        let classes = z.ray_classes(DEFAULT_TOL_ARG);
        let pair = |c: &BigComplex| [format_real(&c.re, digits), format_real(&c.im, digits)];
        ZeroExport {
            k,
            l,
            t: format_real(t, digits),
            precision: z.precision,
            origin_multiplicity: z.origin_multiplicity,
            roots: z.roots.iter().map(pair).collect(),
            ray_class: classes,
            scale: format_real(scale, digits),
            scaled_roots: z.roots.iter().map(|r| pair(&r.div_real(scale))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn p() -> Precision {
        Precision::new(40).unwrap()
    }

    fn rat(v: &[(i64, i64)]) -> Polynomial {
        let qs: Vec<Rational> = v.iter().map(|&(a, b)| Rational::from((a, b))).collect();
        Polynomial::from_rationals(&qs, p())
    }

    #[test]
    fn quartic_with_simple_origin_root() {
        let q = rat(&[(0, 1), (-2, 3), (0, 1), (0, 1), (1, 1)]);
        let z = find_zeros(&q, p()).unwrap();
        assert_eq!(z.origin_multiplicity, 1);
        assert_eq!(z.roots.len(), 3);
        let r = Float::with_val(p().bits(), 2) / 3u32;
        let r = BigComplex::from_real(r.cbrt());
        let w = omega(p());
        let expect = vec![r.clone(), &r * &w, &(&r * &w) * &w];
        assert!(hausdorff(&z.roots, &expect) < p().tol(5));
    }

    #[test]
    fn double_origin_root_only() {
        let z = find_zeros(&Polynomial::monomial(2, p()), p()).unwrap();
        assert_eq!(z.origin_multiplicity, 2);
        assert!(z.roots.is_empty());
    }

    #[test]
    fn sextic_has_two_positive_roots() {
        let q = rat(&[(2, 9), (0, 1), (0, 1), (-2, 1), (0, 1), (0, 1), (1, 1)]);
        let z = find_zeros(&q, p()).unwrap();
        let rep = classify(&z, DEFAULT_TOL_ARG, Some(3));
        assert_eq!(rep.positive_real, 2);
        assert_eq!(rep.diagonal_table_ok, Some(true));
        let pos = positive_real_zeros(&z, DEFAULT_TOL_ARG);
        let s7 = Float::with_val(p().bits(), 7).sqrt() / 3u32;
        let hi = (Float::with_val(p().bits(), 1) + &s7).cbrt();
        let lo = (Float::with_val(p().bits(), 1) - &s7).cbrt();
        assert!(Float::with_val(p().bits(), &pos[0] - &hi).abs() < p().tol(5));
        assert!(Float::with_val(p().bits(), &pos[1] - &lo).abs() < p().tol(5));
    }

    #[test]
    fn count_table() {
        assert_eq!(expected_positive_count(3), 2);
        assert_eq!(expected_positive_count(2), 1);
        assert_eq!(expected_positive_count(1), 0);
        assert_eq!(expected_origin_multiplicity(2), 1);
        for n in 0..100 {
            assert_eq!(3 * expected_positive_count(n) + expected_origin_multiplicity(n), 2 * n);
        }
    }

    #[test]
    fn interlacing_logic() {
        let f = |v: &[f64]| v.iter().map(|&x| Float::with_val(53, x)).collect::<Vec<_>>();
        assert!(interlace_sorted(&f(&[]), &f(&[])));
        assert!(interlace_sorted(&f(&[0.87]), &f(&[1.1, 0.5])));
        assert!(!interlace_sorted(&f(&[0.87]), &f(&[0.8, 0.5])));
        assert!(!interlace_sorted(&f(&[2.0, 1.0]), &f(&[2.5])));
    }

    #[test]
    fn ray_tags() {
        let w = omega(p());
        let one = BigComplex::one(p());
        assert_eq!(ray_class(&one, 1e-10), RayClass::Gamma0);
        assert_eq!(ray_class(&w, 1e-10), RayClass::Gamma1);
        assert_eq!(ray_class(&-w.clone(), 1e-10), RayClass::MinusGamma1);
        assert_eq!(ray_class(&w.conj(), 1e-10), RayClass::Gamma2);
        assert_eq!(ray_class(&-one, 1e-10), RayClass::MinusGamma0);
        let off = BigComplex::from_f64(1.0, 1.0, p());
        assert_eq!(ray_class(&off, 1e-10), RayClass::OffRay);
    }

    #[test]
    fn companion_matches_aberth() {
        let q = rat(&[(3, 1), (-1, 2), (2, 7), (0, 1), (1, 5), (1, 1)]);
        let z = find_zeros(&q, p()).unwrap();
        let c = companion_roots_f64(&q).unwrap();
        for r in &z.roots {
            let rc = r.to_c64();
            let best = c.iter().map(|x| (x - rc).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10);
        }
    }
}
