//! Multiprecision scalars, the Gamma function and dense polynomials.

pub mod complex;
pub mod gamma;
pub mod poly;
pub mod precision;

pub use complex::{e_pi_3, omega, pi, BigComplex, BigReal};
pub use gamma::{b0, gamma, gamma_third};
pub use poly::{Polynomial, PolynomialJson};
pub use precision::{format_real, log10_abs, parse_real, pow10, Precision};
