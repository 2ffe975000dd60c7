//! Moebius-weighted series.
//!
//! Each summand f(n) is expanded as sum_m c_m n^{-m} for large n and handed to
//! [`mobius_sum_with_tail`]. Series that only converge conditionally are first
//! rewritten with sum mu(n)/n = 0.

use crate::error::{domain, Result};
use crate::series::tails::{geometric_remainder, mobius_sum_with_tail, MAX_POWER};
use crate::series::{Estimate, SeriesConfig};

const TOP: usize = MAX_POWER;

/// Coefficients of n^{-m}, m = 0..=TOP, of g(n) * h(n) given those of g and h.
fn product(g: &[f64; TOP + 1], h: &[f64; TOP + 1]) -> [f64; TOP + 1] {
    let mut out = [0.0; TOP + 1];
    for (i, gi) in g.iter().enumerate() {
        for (j, hj) in h.iter().enumerate().take(TOP + 1 - i) {
            out[i + j] += gi * hj;
        }
    }
    out
}

/// Coefficients of expm1(z/n) = sum_{j>=1} z^j / (j! n^j).
fn expm1_coeffs(z: f64) -> [f64; TOP + 1] {
    let mut c = [0.0; TOP + 1];
    let mut p = 1.0;
    for (j, cj) in c.iter_mut().enumerate().skip(1) {
        p *= z / j as f64;
        *cj = p;
    }
    c
}

/// Coefficients of 1/(r n + 1) = sum_{i>=1} (-1)^{i-1} r^{-i} n^{-i}.
fn shifted_reciprocal_coeffs(r: f64) -> [f64; TOP + 1] {
    let mut c = [0.0; TOP + 1];
    let mut p = -1.0;
    for ci in c.iter_mut().skip(1) {
        p *= -1.0 / r;
        *ci = p;
    }
    c
}

/// sum_{j >= top} u^j/(j! j), bounded by e^u u^top / (top! top).
fn exp_series_remainder(u: f64, top: usize) -> f64 {
    let mut p = 1.0;
    for j in 1..=top {
        p *= u / j as f64;
    }
    u.exp() * p / top as f64
}

fn check_finite(what: &str, pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !v.is_finite() {
            return Err(domain(format!("{what}: {name} = {v} is not finite")));
        }
    }
    Ok(())
}

/// Ramanujan's density (1/(x log x)) sum mu(n) x^{1/n}/n, evaluated as
/// (1/(x log x)) sum mu(n) (x^{1/n} - 1)/n.
///
/// The tolerance applies to the returned value.
pub fn hprime(x: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("hprime", &[("x", x)])?;
    if !(x > 1.0) || x.ln() < 1e-9 {
        return Err(domain(format!("hprime: x = {x} must exceed 1 with log x >= 1e-9")));
    }
    let l = x.ln();
    let scale = x * l;
    let mut coeffs = expm1_coeffs(l);
    // expm1(l/n)/n: shift one power.
    coeffs.rotate_right(1);
    coeffs[0] = 0.0;
    let est = mobius_sum_with_tail(
        cfg,
        "hprime",
        cfg.tol() * scale,
        1,
        |n| (l / n).exp_m1() / n,
        &coeffs,
        |n| exp_series_remainder(l / n, TOP),
    )?;
    Ok(Estimate {
        value: est.value / scale,
        error_bound: est.error_bound / scale,
        terms: est.terms,
    })
}

/// sum mu(n) e^{-a x/n}/n, evaluated as the absolutely convergent
/// sum mu(n) (e^{-a x/n} - 1)/n. Depends on x and a only through a x.
pub fn delta_exp(x: f64, a: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("delta_exp", &[("x", x), ("a", a)])?;
    if !(a > 0.0) || x < 0.0 {
        return Err(domain(format!("delta_exp: need x >= 0 and a > 0, got x = {x}, a = {a}")));
    }
    let y = a * x;
    if y == 0.0 {
        return Ok(Estimate { value: 0.0, error_bound: 0.0, terms: 0 });
    }
    let mut coeffs = expm1_coeffs(-y);
    coeffs.rotate_right(1);
    coeffs[0] = 0.0;
    mobius_sum_with_tail(
        cfg,
        "delta_exp",
        cfg.tol(),
        1,
        |n| (-y / n).exp_m1() / n,
        &coeffs,
        |n| exp_series_remainder(y / n, TOP),
    )
}

/// The Riesz-type series sum mu(n) e^{-x/n^2}/n^2.
pub fn riesz_core(x: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("riesz_core", &[("x", x)])?;
    if x < 0.0 {
        return Err(domain(format!("riesz_core: x = {x} must be >= 0")));
    }
    // e^{-x/n^2}/n^2 = sum_j (-x)^j/j! n^{-2-2j}
    let top_j = (TOP - 2) / 2;
    let mut coeffs = [0.0; TOP + 1];
    let mut p = 1.0;
    for j in 0..=top_j {
        coeffs[2 + 2 * j] = p;
        p *= -x / (j + 1) as f64;
    }
    // Keep x/N^2 <= 1 at the cut so the expansion converges quickly.
    let n_min = x.sqrt().ceil() as usize;
    mobius_sum_with_tail(
        cfg,
        "riesz_core",
        cfg.tol(),
        n_min,
        |n| {
            let inv = 1.0 / (n * n);
            (-x * inv).exp() * inv
        },
        &coeffs[..=2 + 2 * top_j],
        |n| {
            // sum_{j>J} x^j/j! N^{-1-2j}/(1+2j)
            let u = x / (n * n);
            let j1 = top_j + 1;
            let mut q = 1.0;
            for j in 1..=j1 {
                q *= u / j as f64;
            }
            q * u.exp() / (n * (2 * j1 + 1) as f64)
        },
    )
}

/// sum mu(n) a/(a^2 + (w n)^2).
pub fn lorentz_sum(a: f64, w: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("lorentz_sum", &[("a", a), ("w", w)])?;
    if !(a > 0.0) || !(w > 0.0) {
        return Err(domain(format!("lorentz_sum: need a, w > 0, got a = {a}, w = {w}")));
    }
    // a/(a^2 + w^2 n^2) = (a/w^2) n^{-2} / (1 + q n^{-2}), q = (a/w)^2
    let q = (a / w) * (a / w);
    let lead = a / (w * w);
    let top_i = (TOP - 2) / 2;
    let mut coeffs = [0.0; TOP + 1];
    let mut p = lead;
    for i in 0..=top_i {
        coeffs[2 + 2 * i] = p;
        p *= -q;
    }
    let n_min = (2.0 * q.sqrt()).ceil() as usize;
    mobius_sum_with_tail(
        cfg,
        "lorentz_sum",
        cfg.tol(),
        n_min,
        |n| a / (a * a + (w * n) * (w * n)),
        &coeffs[..=2 + 2 * top_i],
        |n| {
            let u = q / (n * n);
            if u >= 1.0 {
                return f64::INFINITY;
            }
            lead * n * u.powi(top_i as i32 + 1) / ((2 * top_i + 3) as f64 * (1.0 - u))
        },
    )
}

/// -sum mu(n)/(n (n+1)), which equals the conditionally convergent sum mu(n)/(n+1).
fn shifted_mobius_constant(cfg: &SeriesConfig, tol: f64) -> Result<Estimate> {
    let mut coeffs = [0.0; TOP + 1];
    for (m, c) in coeffs.iter_mut().enumerate().skip(2) {
        *c = if m % 2 == 0 { 1.0 } else { -1.0 };
    }
    let est = mobius_sum_with_tail(
        cfg,
        "mobius_power_sum constant",
        tol,
        1,
        |n| 1.0 / (n * (n + 1.0)),
        &coeffs,
        |n| geometric_remainder(1.0, 1.0, n, TOP),
    )?;
    Ok(Estimate { value: -est.value, ..est })
}

/// sum mu(n) (X^{1+1/n} - 1)/(n+1), split as
/// (X-1) sum mu(n)/(n+1) + X sum mu(n) (X^{1/n} - 1)/(n+1).
///
/// The tolerance is relative to X.
pub fn mobius_power_sum(big_x: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("mobius_power_sum", &[("X", big_x)])?;
    if !(big_x > 1.0) {
        return Err(domain(format!("mobius_power_sum: X = {big_x} must exceed 1")));
    }
    let tol = cfg.tol() * big_x;
    let l = big_x.ln();
    let c = shifted_mobius_constant(cfg, 0.5 * tol / (big_x - 1.0))?;
    let coeffs = product(&expm1_coeffs(l), &shifted_reciprocal_coeffs(1.0));
    let rest = mobius_sum_with_tail(
        cfg,
        "mobius_power_sum",
        0.5 * tol / big_x,
        1,
        |n| (l / n).exp_m1() / (n + 1.0),
        &coeffs,
        |n| geometric_remainder(big_x, 1.0, n, TOP),
    )?;
    Ok(Estimate {
        value: (big_x - 1.0) * c.value + big_x * rest.value,
        error_bound: (big_x - 1.0) * c.error_bound + big_x * rest.error_bound,
        terms: c.terms.max(rest.terms),
    })
}

/// sum mu(n)/(r n + 1), r >= 1, through -sum mu(n)/(r n (r n + 1)).
pub fn mobius_reciprocal_shift(r: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("mobius_reciprocal_shift", &[("r", r)])?;
    if !(r >= 1.0) {
        return Err(domain(format!("mobius_reciprocal_shift: r = {r} must be >= 1")));
    }
    reciprocal_shift(r, cfg, cfg.tol())
}

fn reciprocal_shift(r: f64, cfg: &SeriesConfig, tol: f64) -> Result<Estimate> {
    let mut coeffs = [0.0; TOP + 1];
    let mut p = 1.0;
    for (m, c) in coeffs.iter_mut().enumerate() {
        if m >= 2 {
            *c = if m % 2 == 0 { p } else { -p };
        }
        p /= r;
    }
    let est = mobius_sum_with_tail(
        cfg,
        "mobius_reciprocal_shift",
        tol,
        1,
        |n| 1.0 / (r * n * (r * n + 1.0)),
        &coeffs,
        |n| geometric_remainder(1.0, 1.0 / r, n, TOP),
    )?;
    Ok(Estimate { value: -est.value, ..est })
}

/// Closed form of the integral of e^{-(r+a) t} over [0, log X].
pub fn laplace_truncated_exp(big_x: f64, r: f64, a: f64) -> Result<f64> {
    check_finite("laplace_truncated_exp", &[("X", big_x), ("r", r), ("a", a)])?;
    if !(big_x > 1.0) || !(r + a > 0.0) {
        return Err(domain(format!(
            "laplace_truncated_exp: need X > 1 and r + a > 0, got X = {big_x}, r + a = {}",
            r + a
        )));
    }
    let k = r + a;
    Ok(-(-k * big_x.ln()).exp_m1() / k)
}

/// sum mu(n)/n * L(X, 1/n), with L the truncated Laplace integral of
/// [`laplace_truncated_exp`]; equivalently sum mu(n) (1 - X^{-(r+1/n)})/(r n + 1).
///
/// Split as (1 - X^{-r}) sum mu(n)/(rn+1) + X^{-r} sum mu(n) (1 - X^{-1/n})/(rn+1).
pub fn mobius_laplace_sum(big_x: f64, r: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    check_finite("mobius_laplace_sum", &[("X", big_x), ("r", r)])?;
    if !(big_x > 1.0) || !(r >= 1.0) {
        return Err(domain(format!(
            "mobius_laplace_sum: need X > 1 and r >= 1, got X = {big_x}, r = {r}"
        )));
    }
    let l = big_x.ln();
    let decay = (-r * l).exp();
    let first = reciprocal_shift(r, cfg, 0.5 * cfg.tol())?;
    // 1 - X^{-1/n} = -expm1(-l/n)
    let mut head = expm1_coeffs(-l);
    head.iter_mut().for_each(|c| *c = -*c);
    let coeffs = product(&head, &shifted_reciprocal_coeffs(r));
    let second = mobius_sum_with_tail(
        cfg,
        "mobius_laplace_sum",
        0.5 * cfg.tol() / decay,
        1,
        |n| -(-l / n).exp_m1() / (r * n + 1.0),
        &coeffs,
        |n| geometric_remainder((l * r).exp(), 1.0 / r, n, TOP),
    )?;
    let lead = -(-r * l).exp_m1();
    Ok(Estimate {
        value: lead * first.value + decay * second.value,
        error_bound: lead * first.error_bound + decay * second.error_bound,
        terms: first.terms.max(second.terms),
    })
}
