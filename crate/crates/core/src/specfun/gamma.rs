use std::sync::OnceLock;

use crate::error::{domain, range, Result};
use crate::sum::Neumaier;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest n with n! finite in f64.
pub const MAX_FACTORIAL: u32 = 170;

fn factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(MAX_FACTORIAL as usize + 1);
        let mut f = 1.0f64;
        t.push(f);
        for k in 1..=MAX_FACTORIAL {
            f *= k as f64;
            t.push(f);
        }
        t
    })
}

/// n! for n <= 170.
pub fn factorial(n: u32) -> Result<f64> {
    factorials()
        .get(n as usize)
        .copied()
        .ok_or_else(|| range(format!("factorial: {n}! overflows f64")))
}

/// Gamma(n+1, x) = n! e^{-x} sum_{k<=n} x^k/k!, the finite-sum form of the
/// upper incomplete gamma function at integer order.
pub fn upper_incomplete_gamma_int(n: u32, x: f64) -> Result<f64> {
    if n > MAX_FACTORIAL {
        return Err(range(format!(
            "upper_incomplete_gamma_int: n = {n} exceeds {MAX_FACTORIAL}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("upper_incomplete_gamma_int: x = {x} must be >= 0")));
    }
    let nfact = factorials()[n as usize];
    if x == 0.0 {
        return Ok(nfact);
    }
    if x < 700.0 {
        let mut term = 1.0;
        let mut acc = Neumaier::new();
        acc.add(term);
        for k in 1..=n {
            term *= x / k as f64;
            acc.add(term);
        }
        return Ok(nfact * ((-x).exp() * acc.value()));
    }
    // Log-space for large x.
    let ln_x = x.ln();
    let ln_fact = |k: u32| factorials()[k as usize].ln();
    let logs: Vec<f64> = (0..=n).map(|k| k as f64 * ln_x - ln_fact(k)).collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = logs.iter().map(|l| (l - peak).exp()).collect::<Neumaier>().value();
    Ok((ln_fact(n) - x + peak + scaled.ln()).exp())
}

/// Ei(-x) = -int_x^inf e^{-y}/y dy = -E1(x), for x > 0.
///
/// Power series for x <= 2, Lentz continued fraction above.
pub fn expint_ei_neg(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain(format!("expint_ei_neg: x = {x} must be positive")));
    }
    if x.is_infinite() {
        return Ok(-0.0);
    }
    Ok(-if x <= 2.0 { e1_series(x) } else { e1_continued_fraction(x) })
}

pub(crate) fn e1_series(x: f64) -> f64 {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    let mut acc = Neumaier::new();
    let mut pow_over_fact = 1.0;
    for k in 1..200 {
        pow_over_fact *= -x / k as f64;
        let term = pow_over_fact / k as f64;
        acc.add(term);
        if term.abs() < 1e-18 * acc.value().abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - acc.value()
}

pub(crate) fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_gamma_small_cases() {
        for x in [0.0, 0.3, 1.0, 7.5] {
            assert!((upper_incomplete_gamma_int(0, x).unwrap() - (-x).exp()).abs() < 1e-16);
        }
        assert_eq!(upper_incomplete_gamma_int(1, 0.0).unwrap(), 1.0);
        let g = upper_incomplete_gamma_int(2, 1.0).unwrap();
        assert!((g - 5.0 / std::f64::consts::E).abs() < 1e-12);
        assert!(upper_incomplete_gamma_int(171, 1.0).is_err());
        assert!(upper_incomplete_gamma_int(3, -1.0).is_err());
    }

    #[test]
    fn incomplete_gamma_recurrence() {
        for &x in &[0.1, 1.0, 10.0] {
            for n in 1..=50u32 {
                let lhs = upper_incomplete_gamma_int(n, x).unwrap();
                let rhs = n as f64 * upper_incomplete_gamma_int(n - 1, x).unwrap()
                    + x.powi(n as i32) * (-x).exp();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn incomplete_gamma_matches_integral_definition() {
        // Gamma(n+1, x) = x^{n+1} int_1^inf y^n e^{-xy} dy, by composite Simpson on [1, 1 + 60/x].
        for &(n, x) in &[(0u32, 1.0), (3, 2.0), (6, 4.5)] {
            let upper = 1.0 + 60.0 / x;
            let m = 200_000;
            let h = (upper - 1.0) / m as f64;
            let f = |y: f64| y.powi(n as i32) * (-x * y).exp();
            let mut s = f(1.0) + f(upper);
            for i in 1..m {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(1.0 + i as f64 * h);
            }
            let integral = x.powi(n as i32 + 1) * s * h / 3.0;
            let g = upper_incomplete_gamma_int(n, x).unwrap();
            assert!((integral - g).abs() < 1e-10 * g, "n={n} x={x}");
        }
    }

    #[test]
    fn large_argument_log_path() {
        // Gamma(1, x) = e^{-x} and Gamma(2, x) = (1 + x) e^{-x}, in log form.
        // Kept below the subnormal range so the comparison is meaningful.
        let x = 705.0;
        let g0 = upper_incomplete_gamma_int(0, x).unwrap();
        assert!((g0 / (-x).exp() - 1.0).abs() < 1e-12);
        let g1 = upper_incomplete_gamma_int(1, x).unwrap();
        assert!((g1 / ((1.0 + x) * (-x).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ei_at_one_against_quadrature() {
        // Composite Simpson on int_1^60 e^{-y}/y dy; the cut-off tail is below e^{-60}.
        let m = 400_000;
        let h = 59.0 / m as f64;
        let f = |y: f64| (-y).exp() / y;
        let mut s = f(1.0) + f(60.0);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(1.0 + i as f64 * h);
        }
        let oracle = -s * h / 3.0;
        let ei = expint_ei_neg(1.0).unwrap();
        assert!((ei - oracle).abs() < 1e-12, "{ei} vs {oracle}");
        assert!((ei + 0.21938393).abs() < 1e-7);
    }

    #[test]
    fn ei_seam_agreement() {
        for x in [1.5, 2.0, 2.5] {
            let a = e1_series(x);
            let b = e1_continued_fraction(x);
            assert!((a - b).abs() <= 1e-10 * a, "x={x}: {a} vs {b}");
        }
        let a = e1_series(2.0);
        let b = e1_continued_fraction(2.0);
        assert!((a - b).abs() <= 1e-14);
    }

    #[test]
    fn ei_asymptotics_and_sign() {
        let x = 50.0;
        let r = expint_ei_neg(x).unwrap() * (-x * x.exp());
        assert!((r - 1.0).abs() < 0.03);
        let a = expint_ei_neg(0.1).unwrap();
        let b = expint_ei_neg(10.0).unwrap();
        assert!(a < b && b < 0.0);
        assert!(expint_ei_neg(0.0).is_err());
        assert!(expint_ei_neg(-1.0).is_err());
    }
}
