//! Moebius-weighted series, the Gram series and its relatives, and the
//! zeta-zero sum.
//!
//! Conditionally convergent Moebius series are never truncated naively. Each one
//! is rewritten into an absolutely convergent form using sum mu(n)/n = 0, summed
//! directly up to a cut N, and completed by a tail expansion in the Dirichlet
//! tails sum_{n>N} mu(n) n^{-m} (see [`tails`]), with a rigorous remainder bound.

mod gram;
mod incgamma;
mod mobius;
pub(crate) mod tails;
mod zeros;

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::arithmetic::SieveTables;
use crate::error::{config, Result};

pub use gram::{gram_h, gram_h_double};
pub use incgamma::{incgamma_series, IncGammaForm};
pub use mobius::{
    delta_exp, hprime, laplace_truncated_exp, lorentz_sum, mobius_laplace_sum, mobius_power_sum,
    mobius_reciprocal_shift, riesz_core,
};
pub use zeros::{
    zero_sum_f, zero_sum_paired, zero_sum_terms, ZeroSum, ZeroTable, ZetaZero, IMAG_RESIDUE_MAX, ZEROS_ENV,
};

use tails::MobiusTails;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// A series value with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    /// Rigorous (or, where noted, conservative) bound on |value - exact|.
    pub error_bound: f64,
    /// Number of terms summed directly.
    pub terms: usize,
}

/// Truncation policy shared by all series evaluators.
///
/// Cloning is cheap; clones share the sieve and the lazily built tail table.
#[derive(Debug, Clone)]
pub struct SeriesConfig {
    tol: f64,
    max_terms: usize,
    sieve: Arc<SieveTables>,
    tails: Arc<OnceLock<MobiusTails>>,
}

impl SeriesConfig {
    pub fn new(sieve: Arc<SieveTables>) -> Self {
        let max_terms = DEFAULT_MAX_TERMS.min(sieve.limit());
        SeriesConfig {
            tol: DEFAULT_TOL,
            max_terms,
            sieve,
            tails: Arc::new(OnceLock::new()),
        }
    }

    pub fn with_tol(&self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(config(format!("tolerance {tol} must be positive and finite")));
        }
        Ok(SeriesConfig { tol, ..self.clone() })
    }

    pub fn with_max_terms(&self, max_terms: usize) -> Result<Self> {
        if max_terms == 0 || max_terms > self.sieve.limit() {
            return Err(config(format!(
                "max_terms {max_terms} must lie in 1..={}",
                self.sieve.limit()
            )));
        }
        Ok(SeriesConfig { max_terms, ..self.clone() })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn sieve(&self) -> &SieveTables {
        &self.sieve
    }

    pub fn sieve_arc(&self) -> &Arc<SieveTables> {
        &self.sieve
    }

    pub(crate) fn tails(&self) -> &MobiusTails {
        self.tails.get_or_init(|| MobiusTails::build(&self.sieve))
    }
}
