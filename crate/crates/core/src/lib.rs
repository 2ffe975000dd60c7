//! Numerics around the Gram series, Moebius-weighted exponential series and the
//! Riesz function, together with a harness that checks identities connecting them
//! by evaluating both sides independently.
//!
//! Layout:
//! - [`arithmetic`]: sieve tables, prime counts, prime sums, prime zeta.
//! - [`specfun`]: zeta, incomplete gamma, exponential integral, erf and Dawson.
//! - [`series`]: Moebius-weighted series and the zeta-zero sum.
//! - [`quadrature`]: adaptive, semi-infinite and oscillatory integration.
//! - [`verify`]: the check registry and `run_all`.
//! - [`report`]: JSON report assembly.

pub mod arithmetic;
mod error;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod specfun;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
