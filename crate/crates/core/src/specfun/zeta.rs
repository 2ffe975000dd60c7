//! Euler-Maclaurin evaluation of the Riemann zeta function and its derivative.
//!
//! zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//!         + sum_{k=1}^{8} B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1} + R,
//! with the head length N = max(20, ceil(2|Im s|)).

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{range, Result};
use crate::sum::Neumaier;

pub type ComplexValue = Complex64;

/// B_{2k} / (2k)! for k = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

const POLE_GUARD: f64 = 1e-6;

fn head_len(im: f64) -> usize {
    20usize.max((2.0 * im.abs()).ceil() as usize)
}

/// zeta(s) for real s >= 1 + 1e-6.
pub fn zeta_real(s: f64) -> Result<f64> {
    if !(s >= 1.0 + POLE_GUARD) || s.is_nan() {
        return Err(range(format!("zeta_real: s = {s} too close to the pole or below 1")));
    }
    if s > 1100.0 {
        return Ok(1.0);
    }
    let n = head_len(0.0);
    let nf = n as f64;
    let mut head = Neumaier::new();
    for k in (1..n).rev() {
        head.add((k as f64).powf(-s));
    }
    let n_pow = nf.powf(-s);
    head.add(nf * n_pow / (s - 1.0));
    head.add(0.5 * n_pow);
    let mut poch = s;
    let mut npow = n_pow / nf;
    for (k, &c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        head.add(c * poch * npow);
        let a = 2.0 * k as f64 + 1.0;
        poch *= (s + a) * (s + a + 1.0);
        npow /= nf * nf;
    }
    Ok(head.value())
}

fn check_strip(s: Complex64, what: &str) -> Result<()> {
    let ok = s.re > 0.0 && s.re <= 10.0 && s.im.abs() <= 120.0 && s.re.is_finite() && s.im.is_finite();
    if !ok {
        return Err(range(format!(
            "{what}: s = {s} outside 0 < Re s <= 10, |Im s| <= 120"
        )));
    }
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(range(format!("{what}: s = {s} too close to the pole at 1")));
    }
    Ok(())
}

struct ZetaAndDerivative {
    value: Complex64,
    derivative: Complex64,
}

fn euler_maclaurin(s: Complex64) -> ZetaAndDerivative {
    let n = head_len(s.im);
    let nf = n as f64;
    let ln_n = nf.ln();
    let (mut v_re, mut v_im) = (Neumaier::new(), Neumaier::new());
    let (mut d_re, mut d_im) = (Neumaier::new(), Neumaier::new());
    for k in (1..n).rev() {
        let lk = (k as f64).ln();
        let t = (-s * lk).exp();
        v_re.add(t.re);
        v_im.add(t.im);
        d_re.add(-lk * t.re);
        d_im.add(-lk * t.im);
    }
    let mut value = Complex64::new(v_re.value(), v_im.value());
    let mut derivative = Complex64::new(d_re.value(), d_im.value());

    let n_pow = (-s * ln_n).exp();
    let sm1 = s - 1.0;
    let integral = nf * n_pow / sm1;
    value += integral + 0.5 * n_pow;
    derivative += -integral * (ln_n + 1.0 / sm1) - 0.5 * ln_n * n_pow;

    // (s)_{2k-1} and its s-derivative
    let mut poch = s;
    let mut dpoch = Complex64::new(1.0, 0.0);
    let mut npow = n_pow / nf;
    for (k, &c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        value += c * poch * npow;
        derivative += c * npow * (dpoch - ln_n * poch);
        let a = 2.0 * k as f64 + 1.0;
        let q = (s + a) * (s + a + 1.0);
        dpoch = dpoch * q + poch * (2.0 * s + 2.0 * a + 1.0);
        poch *= q;
        npow /= nf * nf;
    }
    ZetaAndDerivative { value, derivative }
}

/// zeta(s) for 0 < Re s <= 10, |Im s| <= 120, s != 1.
pub fn zeta_complex(s: ComplexValue) -> Result<ComplexValue> {
    check_strip(s, "zeta_complex")?;
    Ok(euler_maclaurin(s).value)
}

/// zeta'(s) by term-wise differentiation of the Euler-Maclaurin formula.
pub fn zeta_prime(s: ComplexValue) -> Result<ComplexValue> {
    check_strip(s, "zeta_prime")?;
    Ok(euler_maclaurin(s).derivative)
}

/// Largest m for which zeta(m) is held in the process-wide cache.
pub const ZETA_CACHE_MAX: usize = 201;

/// zeta(m) for integer m >= 2. Cached up to m = 201; beyond that
/// 1 + 2^{-m}, whose error is below 3^{-m}.
pub fn zeta_int(m: usize) -> f64 {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    assert!(m >= 2, "zeta_int needs m >= 2, got {m}");
    if m > ZETA_CACHE_MAX {
        return 1.0 + 2f64.powi(-(m as i32));
    }
    let cache = CACHE.get_or_init(|| {
        (0..=ZETA_CACHE_MAX)
            .map(|k| if k < 2 { f64::NAN } else { zeta_real(k as f64).expect("integer s >= 2") })
            .collect()
    });
    cache[m]
}
