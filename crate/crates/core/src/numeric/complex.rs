use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use super::precision::Precision;

/// Multiprecision real scalar (MPFR).
pub type BigReal = Float;

/// Multiprecision complex scalar stored as a pair of MPFR reals.
///
/// Results of binary operations carry the precision of the left operand.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::zero_bits(prec.bits())
    }

    pub fn zero_bits(bits: u32) -> Self {
        BigComplex {
            re: Float::with_val(bits, 0),
            im: Float::with_val(bits, 0),
        }
    }

    pub fn one(prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), 1),
            im: Float::with_val(prec.bits(), 0),
        }
    }

    pub fn one_bits(bits: u32) -> Self {
        BigComplex {
            re: Float::with_val(bits, 1),
            im: Float::with_val(bits, 0),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::with_val(re.prec(), 0);
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), re),
            im: Float::with_val(prec.bits(), im),
        }
    }

    /// Pure imaginary number `i * im`.
    pub fn imag(im: Float) -> Self {
        let re = Float::with_val(im.prec(), 0);
        BigComplex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Rounds both parts to `bits`.
    pub fn with_bits(&self, bits: u32) -> Self {
        BigComplex {
            re: Float::with_val(bits, &self.re),
            im: Float::with_val(bits, &self.im),
        }
    }

    pub fn with_prec(&self, prec: Precision) -> Self {
        self.with_bits(prec.bits())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let bits = self.prec();
        Float::with_val(bits, &self.re * &self.re + &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re * s),
            im: Float::with_val(bits, &self.im * s),
        }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re * s),
            im: Float::with_val(bits, &self.im * s),
        }
    }

    pub fn div_real(&self, s: &Float) -> Self {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re / s),
            im: Float::with_val(bits, &self.im / s),
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: Float::with_val(self.im.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn square(&self) -> Self {
        let bits = self.prec();
        let re = Float::with_val(bits, &self.re * &self.re - &self.im * &self.im);
        let mut im = Float::with_val(bits, &self.re * &self.im);
        im <<= 1;
        BigComplex { re, im }
    }

    pub fn recip(&self) -> Self {
        let bits = self.prec();
        let den = self.norm_sqr();
        BigComplex {
            re: Float::with_val(bits, &self.re / &den),
            im: Float::with_val(bits, -&self.im) / &den,
        }
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::from_real(Float::with_val(self.prec(), 1));
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Principal square root, branch cut along the negative reals.
    pub fn sqrt(&self) -> Self {
        let bits = self.prec();
        if self.is_zero() {
            return BigComplex::zero_bits(bits);
        }
        let r = self.abs();
        if self.re >= 0 {
            let s = Float::with_val(bits, &r + &self.re) / 2u32;
            let s = s.sqrt();
            let im = Float::with_val(bits, &self.im / &s) / 2u32;
            BigComplex { re: s, im }
        } else {
            let s = Float::with_val(bits, &r - &self.re) / 2u32;
            let s = s.sqrt();
            let re = Float::with_val(bits, self.im.abs_ref()) / &s / 2u32;
            let im = if self.im.is_sign_negative() { -s } else { s };
            BigComplex { re, im }
        }
    }

    /// Principal cube root `|z|^{1/3} e^{i arg(z)/3}`.
    pub fn cbrt(&self) -> Self {
        let bits = self.prec();
        if self.is_zero() {
            return BigComplex::zero_bits(bits);
        }
        if self.im.is_zero() && self.re > 0 {
            return BigComplex::from_real(Float::with_val(bits, self.re.cbrt_ref()));
        }
        let r = self.abs().cbrt();
        let theta = self.arg() / 3u32;
        BigComplex::polar(&r, &theta)
    }

    pub fn polar(r: &Float, theta: &Float) -> Self {
        let bits = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(bits, theta).sin_cos(Float::new(bits));
        BigComplex {
            re: c * r,
            im: s * r,
        }
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Float) -> Self {
        let one = Float::with_val(theta.prec(), 1);
        Self::polar(&one, theta)
    }

    /// `e^{i pi num/den}`, generated at the requested precision each call.
    pub fn cis_pi(num: i32, den: u32, prec: Precision) -> Self {
        let pi = Float::with_val(prec.bits(), Constant::Pi);
        let theta = pi * num / den;
        Self::cis(&theta)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `self <- self * z + c`, the Horner step, reusing two scratch values.
    pub fn horner_step(&mut self, z: &BigComplex, c: &BigComplex, scratch: &mut (Float, Float)) {
        use rug::Assign;
        scratch.0.assign(&self.re * &z.re - &self.im * &z.im);
        scratch.1.assign(&self.re * &z.im + &self.im * &z.re);
        std::mem::swap(&mut self.re, &mut scratch.0);
        std::mem::swap(&mut self.im, &mut scratch.1);
        self.re += &c.re;
        self.im += &c.im;
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re + &rhs.re),
            im: Float::with_val(bits, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re - &rhs.re),
            im: Float::with_val(bits, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let bits = self.prec();
        BigComplex {
            re: Float::with_val(bits, &self.re * &rhs.re - &self.im * &rhs.im),
            im: Float::with_val(bits, &self.re * &rhs.im + &self.im * &rhs.re),
        }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &'a BigComplex) -> BigComplex {
        let bits = self.prec();
        let den = rhs.norm_sqr();
        let re = Float::with_val(bits, &self.re * &rhs.re + &self.im * &rhs.im);
        let im = Float::with_val(bits, &self.im * &rhs.re - &self.re * &rhs.im);
        BigComplex {
            re: re / &den,
            im: im / &den,
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> AddAssign<&'a BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &'a BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &'a BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a BigComplex> for BigComplex {
    fn mul_assign(&mut self, rhs: &'a BigComplex) {
        *self = &*self * rhs;
    }
}

/// Primitive cube root of unity `omega = e^{2 pi i/3}`.
pub fn omega(prec: Precision) -> BigComplex {
    let bits = prec.bits();
    let s3 = Float::with_val(bits, 3).sqrt() / 2u32;
    BigComplex {
        re: Float::with_val(bits, -0.5),
        im: s3,
    }
}

/// `e^{i pi/3}` (and its conjugate via `.conj()`).
pub fn e_pi_3(prec: Precision) -> BigComplex {
    let bits = prec.bits();
    let s3 = Float::with_val(bits, 3).sqrt() / 2u32;
    BigComplex {
        re: Float::with_val(bits, 0.5),
        im: s3,
    }
}

pub fn pi(prec: Precision) -> Float {
    Float::with_val(prec.bits(), Constant::Pi)
}
