//! Special functions used by the identities: Riemann zeta on the real line and in
//! the critical strip, its derivative, integer-order upper incomplete gamma,
//! the exponential integral, erf, and the Dawson kernel 1F1(1; 3/2; -z).
//!
//! Every function returns a quiet error outside its domain rather than NaN.

mod erf;
mod gamma;
mod zeta;

pub use erf::{dawson, erf, erfc, erfcx, kummer_1f1_half};
pub use gamma::{expint_ei_neg, factorial, upper_incomplete_gamma_int, MAX_FACTORIAL};
pub use zeta::{zeta_complex, zeta_int, zeta_prime, zeta_real, ComplexValue, ZETA_CACHE_MAX};
