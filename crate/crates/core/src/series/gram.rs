//! The Gram series H(x) = 1 + sum_{n>=1} (log x)^n / (n n! zeta(n+1)).

use crate::error::{domain, precision, Result};
use crate::series::{Estimate, SeriesConfig};
use crate::specfun::zeta_int;
use crate::sum::Neumaier;

/// Sums `term(n)` for n = 1, 2, ... until a term falls below `cut` past the
/// peak of (log x)^n / n!, returning the sum and the last term.
fn sum_until_small(
    what: &str,
    log_x: f64,
    cfg: &SeriesConfig,
    mut term: impl FnMut(usize) -> f64,
) -> Result<Estimate> {
    let cut = cfg.tol() * 1e-2;
    let mut acc = Neumaier::new();
    acc.add(1.0);
    for n in 1..=cfg.max_terms() {
        let t = term(n);
        acc.add(t);
        let nf = n as f64;
        if nf > log_x && t.abs() < cut {
            // Ratio of consecutive terms is below log x / (n+1) from here on.
            let q = log_x / (nf + 1.0);
            return Ok(Estimate {
                value: acc.value(),
                error_bound: t.abs() * q / (1.0 - q),
                terms: n,
            });
        }
    }
    Err(precision(format!("{what}: no convergence within {} terms", cfg.max_terms())))
}

/// Gram's series for Riemann's R(x), x >= 1.
pub fn gram_h(x: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(domain(format!("gram_h: x = {x} must be finite and >= 1")));
    }
    let log_x = x.ln();
    if log_x == 0.0 {
        return Ok(Estimate { value: 1.0, error_bound: 0.0, terms: 0 });
    }
    // power = (log x)^n / n!, updated incrementally.
    let mut power = 1.0;
    sum_until_small("gram_h", log_x, cfg, |n| {
        power *= log_x / n as f64;
        power / (n as f64 * zeta_int(n + 1))
    })
}

/// The same series written as the double sum over the split log x = log 2 + log(x/2):
/// 1 + sum_n 1/(n zeta(n+1)) sum_{k=0}^{n} (log 2)^k (log(x/2))^{n-k} / (k! (n-k)!).
///
/// No binomial collapse is applied; comparing with [`gram_h`] checks it.
pub fn gram_h_double(x: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(domain(format!("gram_h_double: x = {x} must be finite and > 2")));
    }
    let a = std::f64::consts::LN_2;
    let b = (x / 2.0).ln();
    // a_pow[k] = a^k/k!, b_pow[j] = b^j/j!
    let mut a_pow = vec![1.0];
    let mut b_pow = vec![1.0];
    sum_until_small("gram_h_double", x.ln(), cfg, |n| {
        let nf = n as f64;
        a_pow.push(a_pow[n - 1] * a / nf);
        b_pow.push(b_pow[n - 1] * b / nf);
        let inner: f64 = (0..=n).map(|k| a_pow[k] * b_pow[n - k]).collect::<Neumaier>().value();
        inner / (nf * zeta_int(n + 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_sieve;
    use std::sync::Arc;

    fn cfg() -> SeriesConfig {
        SeriesConfig::new(Arc::new(build_sieve(1000).unwrap()))
    }

    #[test]
    fn gram_at_one_is_one() {
        assert_eq!(gram_h(1.0, &cfg()).unwrap().value, 1.0);
    }

    #[test]
    fn gram_at_100_against_fifty_term_oracle() {
        // Independent oracle: zeta(n+1) by a long direct sum plus integral tail.
        let zeta = |s: f64| {
            let n = 20_000;
            let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
            head + (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
        };
        let l = 100f64.ln();
        let mut oracle = 1.0;
        let mut p = 1.0;
        for n in 1..=50 {
            p *= l / n as f64;
            oracle += p / (n as f64 * zeta(n as f64 + 1.0));
        }
        let h = gram_h(100.0, &cfg()).unwrap().value;
        assert!((h - oracle).abs() < 1e-6, "{h} vs {oracle}");
        assert!((h - 25.662).abs() < 0.01);
    }

    #[test]
    fn double_sum_matches_single() {
        for x in [2.5, 3.0, 4.0, 10.0, 100.0, 1e6] {
            let s = gram_h(x, &cfg()).unwrap().value;
            let d = gram_h_double(x, &cfg()).unwrap().value;
            assert!(((s - d) / s).abs() < 1e-12, "x={x}: {s} vs {d}");
        }
    }

    #[test]
    fn double_sum_domain() {
        assert!(matches!(gram_h_double(2.0, &cfg()), Err(crate::Error::Domain(_))));
        assert!(gram_h(0.5, &cfg()).is_err());
    }
}
