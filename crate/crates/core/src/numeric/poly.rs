use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::complex::BigComplex;
use super::precision::{format_real, parse_real, Precision};
use crate::error::{Error, Result};

/// Dense polynomial with multiprecision complex coefficients, indexed by
/// ascending power. The zero polynomial is stored as a single zero
/// coefficient and reports degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<BigComplex>,
    prec: Precision,
}

impl Polynomial {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<BigComplex>, prec: Precision) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigComplex::zero(prec));
        }
        let coeffs = coeffs.into_iter().map(|c| c.with_prec(prec)).collect();
        Polynomial { coeffs, prec }
    }

    /// Builds a polynomial whose leading coefficient is exactly one; the
    /// others are divided by the given leading coefficient.
    pub fn monic(coeffs: Vec<BigComplex>, prec: Precision) -> Result<Self> {
        let mut p = Polynomial::new(coeffs, prec);
        let lead = p.coeffs.last().cloned().expect("non-empty");
        if lead.is_zero() {
            return Err(Error::Domain("zero polynomial cannot be made monic".into()));
        }
        let deg = p.degree();
        for c in p.coeffs.iter_mut().take(deg) {
            *c = &*c / &lead;
        }
        p.coeffs[deg] = BigComplex::one(prec);
        Ok(p)
    }

    pub fn from_rationals(coeffs: &[Rational], prec: Precision) -> Self {
        let bits = prec.bits();
        let cs = coeffs
            .iter()
            .map(|q| BigComplex::from_real(Float::with_val(bits, q)))
            .collect();
        Polynomial::new(cs, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Polynomial::new(vec![BigComplex::one(prec)], prec)
    }

    /// `x^n`.
    pub fn monomial(n: usize, prec: Precision) -> Self {
        let mut cs = vec![BigComplex::zero(prec); n + 1];
        cs[n] = BigComplex::one(prec);
        Polynomial { coeffs: cs, prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&BigComplex> {
        self.coeffs.get(j)
    }

    pub fn into_coeffs(self) -> Vec<BigComplex> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_monic(&self) -> bool {
        let lead = &self.coeffs[self.degree()];
        lead.re == 1 && lead.im.is_zero()
    }

    pub fn leading(&self) -> &BigComplex {
        &self.coeffs[self.degree()]
    }

    /// Coefficient of `x^{deg-1}`, or zero when the degree is below one.
    pub fn delta(&self) -> BigComplex {
        let d = self.degree();
        if d >= 1 {
            self.coeffs[d - 1].clone()
        } else {
            BigComplex::zero(self.prec)
        }
    }

    /// Coefficient of `x^{deg-2}`, or zero when the degree is below two.
    pub fn epsilon(&self) -> BigComplex {
        let d = self.degree();
        if d >= 2 {
            self.coeffs[d - 2].clone()
        } else {
            BigComplex::zero(self.prec)
        }
    }

    /// Exact coefficient-wise derivative (multiplication by small integers
    /// is exact in binary floating point up to the working precision).
    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::new(vec![BigComplex::zero(self.prec)], self.prec);
        }
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale_i64(j as i64))
            .collect();
        Polynomial::new(cs, self.prec)
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: &BigComplex) -> BigComplex {
        let bits = self.prec.bits();
        let x = x.with_bits(bits);
        let mut acc = self.coeffs[self.degree()].clone();
        let mut scratch = (Float::new(bits), Float::new(bits));
        for c in self.coeffs.iter().rev().skip(1) {
            acc.horner_step(&x, c, &mut scratch);
        }
        acc
    }

    /// `P(s x)`.
    pub fn eval_scaled(&self, x: &BigComplex, s: &Float) -> BigComplex {
        self.eval(&x.scale(s))
    }

    /// `(P(x), P'(x))` in one Horner pass.
    pub fn eval_with_derivative(&self, x: &BigComplex) -> (BigComplex, BigComplex) {
        let bits = self.prec.bits();
        let x = x.with_bits(bits);
        let d = self.degree();
        let mut p = self.coeffs[d].clone();
        let mut dp = BigComplex::zero_bits(bits);
        let mut scratch = (Float::new(bits), Float::new(bits));
        for c in self.coeffs[..d].iter().rev() {
            dp.horner_step(&x, &p, &mut scratch);
            p.horner_step(&x, c, &mut scratch);
        }
        (p, dp)
    }

    pub fn conj(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(BigComplex::conj).collect(),
            prec: self.prec,
        }
    }

    /// Same coefficients rounded (or padded) to another precision.
    pub fn with_precision(&self, prec: Precision) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c.with_prec(prec)).collect(),
            prec,
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> Float {
        let mut m = Float::with_val(self.prec.bits(), 0);
        for c in &self.coeffs {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// `max_j |p_j - q_j|`, treating missing coefficients as zero.
    pub fn max_diff(&self, other: &Polynomial) -> Float {
        let bits = self.prec.bits().max(other.prec.bits());
        let zero = BigComplex::zero_bits(bits);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut m = Float::with_val(bits, 0);
        for j in 0..n {
            let a = self.coeffs.get(j).unwrap_or(&zero).with_bits(bits);
            let b = other.coeffs.get(j).unwrap_or(&zero);
            let d = (&a - b).abs();
            if d > m {
                m = d;
            }
        }
        m
    }

    /// `max_j |p_j - q_j| / max(1, |q_j|)`.
    pub fn max_rel_diff(&self, other: &Polynomial) -> Float {
        let bits = self.prec.bits().max(other.prec.bits());
        let zero = BigComplex::zero_bits(bits);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut m = Float::with_val(bits, 0);
        for j in 0..n {
            let a = self.coeffs.get(j).unwrap_or(&zero).with_bits(bits);
            let b = other.coeffs.get(j).unwrap_or(&zero);
            let mut scale = b.abs();
            if scale < 1 {
                scale = Float::with_val(bits, 1);
            }
            let d = (&a - b).abs() / scale;
            if d > m {
                m = d;
            }
        }
        m
    }

    /// `x * P`.
    pub fn shift_up(&self) -> Polynomial {
        let mut cs = Vec::with_capacity(self.coeffs.len() + 1);
        cs.push(BigComplex::zero(self.prec));
        cs.extend(self.coeffs.iter().cloned());
        Polynomial::new(cs, self.prec)
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Polynomial, s: &BigComplex) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut cs = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = self
                .coeffs
                .get(j)
                .cloned()
                .unwrap_or_else(|| BigComplex::zero(self.prec));
            if let Some(o) = other.coeffs.get(j) {
                c += &(o * s);
            }
            cs.push(c);
        }
        Polynomial::new(cs, self.prec)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let minus_one = BigComplex::from_f64(-1.0, 0.0, self.prec);
        self.add_scaled(other, &minus_one)
    }

    /// Number of trailing (low-order) coefficients that vanish exactly.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count().min(self.degree())
    }

    /// Ascending `[re, im]` decimal string pairs at full precision.
    pub fn to_pairs(&self) -> Vec<[String; 2]> {
        let digits = self.prec.digits() as u32 + 5;
        self.coeffs
            .iter()
            .map(|c| [format_real(&c.re, digits), format_real(&c.im, digits)])
            .collect()
    }

    pub fn from_pairs(pairs: &[[String; 2]], prec: Precision) -> Result<Self> {
        let mut cs = Vec::with_capacity(pairs.len());
        for [re, im] in pairs {
            cs.push(BigComplex::new(parse_real(re, prec)?, parse_real(im, prec)?));
        }
        if cs.is_empty() {
            return Err(Error::Parse("polynomial with no coefficients".into()));
        }
        Ok(Polynomial::new(cs, prec))
    }
}

/// Serialized polynomial: ascending coefficient pairs plus the precision.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolynomialJson {
    pub precision: Precision,
    pub coeffs: Vec<[String; 2]>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            precision: p.precision(),
            coeffs: p.to_pairs(),
        }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: &PolynomialJson) -> Result<Self> {
        Polynomial::from_pairs(&j.coeffs, j.precision)
    }
}
