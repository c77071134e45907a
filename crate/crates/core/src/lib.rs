//! Multiple orthogonal polynomials for the cubic weight `e^{-x^3}` on pairs
//! of rays in the complex plane: recurrence data, zeros and their limits.

pub mod asymptotics;
pub mod coeffs;
pub mod error;
pub mod moments;
pub mod mop;
pub mod numeric;
pub mod painleve;
pub mod zeros;

pub use error::{Error, Result};
pub use numeric::{BigComplex, BigReal, Polynomial, Precision};
