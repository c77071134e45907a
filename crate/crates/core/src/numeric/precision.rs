use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits.
///
/// Every routine takes the precision explicitly; nothing is global. The
/// binary precision handed to MPFR is `ceil(digits * log2(10))` plus a few
/// guard bits, so one rounding has relative error below `10^{-digits}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_DIGITS: u32 = 60;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    pub fn bits(self) -> u32 {
        (self.0 as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// `self` plus `extra` guard digits.
    pub fn guarded(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }

    pub fn doubled(self) -> Precision {
        Precision(self.0 * 2)
    }

    /// `10^{offset - digits}`, i.e. a tolerance expressed relative to this
    /// precision, e.g. `tol(15)` is `10^{15-p}`.
    pub fn tol(self, offset: i32) -> Float {
        pow10(offset - self.0 as i32, self)
    }

    pub fn float(self, value: f64) -> Float {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(self) -> Float {
        Float::with_val(self.bits(), 0)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_DIGITS)
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

/// `10^exp` at the given precision. Works far outside the `f64` range.
pub fn pow10(exp: i32, prec: Precision) -> Float {
    let ten = Float::with_val(prec.bits(), 10);
    use rug::ops::Pow;
    ten.pow(exp)
}

/// Parses a decimal literal (e.g. `"0.5"`, `"-1/2"` is not accepted) exactly
/// rounded to `prec`.
pub fn parse_real(text: &str, prec: Precision) -> Result<Float> {
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        let q = rug::Rational::from((num, den));
        return Ok(Float::with_val(prec.bits(), &q));
    }
    let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
    Ok(Float::with_val(prec.bits(), parsed))
}

/// Decimal rendering with `digits` significant digits. Deterministic and
/// locale-free.
pub fn format_real(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

/// Upper bound on `log10 |x|`, or `None` for zero.
pub fn log10_abs(x: &Float) -> Option<f64> {
    if x.is_zero() || !x.is_finite() {
        return None;
    }
    let (mant, exp) = x.to_f64_exp();
    Some(mant.abs().log10() + exp as f64 * std::f64::consts::LOG10_2)
}
