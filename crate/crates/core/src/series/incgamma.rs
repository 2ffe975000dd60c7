//! The incomplete-gamma series
//! sum_{n>=1} s^{-n-1} Gamma(n+1, s log 2) / (n n! zeta(n+1))
//! in its raw form and in the finite-sum form
//! 2^{-s} sum_{n>=1} s^{-n-1}/(n zeta(n+1)) sum_{k<=n} (s log 2)^k/k!.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{domain, precision, Result};
use crate::series::{Estimate, SeriesConfig};
use crate::specfun::{factorial, upper_incomplete_gamma_int, zeta_int, MAX_FACTORIAL};
use crate::sum::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IncGammaForm {
    /// Terms through `upper_incomplete_gamma_int`.
    Raw,
    /// Terms through the truncated exponential series.
    FiniteSum,
}

/// Evaluates the series for s > 1 in the requested form.
///
/// Stops once the bound on the remaining terms drops below tol/100. The ratio of
/// consecutive terms is at most (1/s + log 2/(n+1)) zeta(n+1)/zeta(n+2).
pub fn incgamma_series(s: f64, form: IncGammaForm, cfg: &SeriesConfig) -> Result<Estimate> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(domain(format!("incgamma_series: s = {s} must be finite and > 1")));
    }
    let x = s * LN_2;
    let two_pow = (-x).exp();
    let cut = cfg.tol() * 1e-2;
    let mut acc = Neumaier::new();
    // Finite-sum form state: x^k/k! and its running sum.
    let mut power = 1.0;
    let mut partial = 1.0;
    let mut s_pow = 1.0 / s;
    for n in 1..=MAX_FACTORIAL {
        let nf = n as f64;
        s_pow /= s;
        let zeta = zeta_int(n as usize + 1);
        let term = match form {
            IncGammaForm::Raw => {
                s_pow * upper_incomplete_gamma_int(n, x)? / (nf * factorial(n)? * zeta)
            }
            IncGammaForm::FiniteSum => {
                power *= x / nf;
                partial += power;
                two_pow * s_pow * partial / (nf * zeta)
            }
        };
        acc.add(term);
        let q = (1.0 / s + LN_2 / (nf + 1.0)) * zeta / zeta_int(n as usize + 2);
        if q < 1.0 {
            let rest = term * q / (1.0 - q);
            if rest < cut {
                return Ok(Estimate { value: acc.value(), error_bound: rest, terms: n as usize });
            }
        }
    }
    Err(precision(format!(
        "incgamma_series({s}): no convergence within {MAX_FACTORIAL} terms"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_sieve;
    use crate::series::gram_h;
    use std::sync::Arc;

    fn cfg() -> SeriesConfig {
        SeriesConfig::new(Arc::new(build_sieve(100).unwrap()))
    }

    #[test]
    fn forms_agree() {
        for s in [1.5, 2.0, 5.0, 30.0] {
            let a = incgamma_series(s, IncGammaForm::Raw, &cfg()).unwrap().value;
            let b = incgamma_series(s, IncGammaForm::FiniteSum, &cfg()).unwrap().value;
            assert!(((a - b) / b).abs() < 1e-12, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn diagonal_terms_give_gram_at_two() {
        // k = n terms only: 2^{-s} s^{-1} sum (log 2)^n/(n n! zeta(n+1)).
        let s = 3.0;
        let mut p = 1.0;
        let mut acc = 0.0;
        for n in 1..60 {
            p *= LN_2 / n as f64;
            acc += (s * LN_2).powi(n) / s.powi(n + 1) / (n as f64 * zeta_int(n as usize + 1))
                * (p / LN_2.powi(n));
        }
        let diag = acc * 2f64.powf(-s);
        let expect = (gram_h(2.0, &cfg()).unwrap().value - 1.0) / (s * 2f64.powf(s));
        assert!((diag - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn rejects_s_at_most_one() {
        assert!(incgamma_series(1.0, IncGammaForm::Raw, &cfg()).is_err());
    }
}
