use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::sum::Neumaier;

/// Error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function e^{x^2} erfc(x).
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 5.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// Dawson's integral D(t) = e^{-t^2} int_0^t e^{u^2} du, by Rybicki's sampling
/// formula D(t) = pi^{-1/2} sum_{n odd} e^{-(t - n h)^2} / n with h = 0.2
/// (aliasing error of order e^{-(pi/2h)^2}).
pub fn dawson(t: f64) -> f64 {
    const H: f64 = 0.2;
    const REACH: f64 = 9.0;
    if t < 0.0 {
        return -dawson(-t);
    }
    let lo = ((t - REACH) / H).floor() as i64;
    let hi = ((t + REACH) / H).ceil() as i64;
    let mut acc = Neumaier::new();
    let first_odd = if lo.rem_euclid(2) == 1 { lo } else { lo + 1 };
    let mut n = first_odd;
    while n <= hi {
        let d = t - n as f64 * H;
        acc.add((-d * d).exp() / n as f64);
        n += 2;
    }
    acc.value() / PI.sqrt()
}

/// 1F1(1; 3/2; -z) for z >= 0, through D(sqrt z)/sqrt z.
pub fn kummer_1f1_half(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain(format!("kummer_1f1_half: z = {z} must be finite and >= 0")));
    }
    if z < 1e-4 {
        // sum_n (-z)^n / (3/2)_n
        let mut term = 1.0;
        let mut acc = Neumaier::new();
        acc.add(term);
        for n in 0..30 {
            term *= -z / (n as f64 + 1.5);
            acc.add(term);
            if term.abs() < 1e-18 {
                break;
            }
        }
        return Ok(acc.value());
    }
    let t = z.sqrt();
    Ok(dawson(t) / t)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Defining power series of 1F1(1; 3/2; -z), summed in exact-ish order.
    fn kummer_series(z: f64) -> f64 {
        let mut term = 1.0;
        let mut acc = Neumaier::new();
        acc.add(term);
        for n in 0..400 {
            term *= -z / (n as f64 + 1.5);
            acc.add(term);
        }
        acc.value()
    }

    fn erf_maclaurin(x: f64) -> f64 {
        // erf x = 2/sqrt(pi) sum (-1)^n x^{2n+1}/(n! (2n+1))
        let mut acc = Neumaier::new();
        let mut p = x;
        for n in 0..80 {
            acc.add(p / (2 * n + 1) as f64);
            p *= -x * x / (n + 1) as f64;
        }
        2.0 / PI.sqrt() * acc.value()
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf(0.0), 0.0);
        for x in [0.1, 0.5, 1.3, 2.7, 4.0] {
            assert_eq!(erf(-x), -erf(x));
            // The oracle's alternating terms peak near e^{x^2}; allow for their cancellation.
            let slack = 1e-15 * f64::exp(x * x).max(10.0);
            assert!((erf(x) - erf_maclaurin(x)).abs() < slack, "x={x}");
        }
        assert!((erf(1.0) - 0.8427007929).abs() < 1e-9);
        assert_eq!(erf(40.0), 1.0);
        assert_eq!(erf(-40.0), -1.0);
    }

    #[test]
    fn erfcx_branches_agree() {
        for x in [4.0f64, 4.9, 5.0, 5.1, 6.0] {
            let direct = (x * x).exp() * libm::erfc(x);
            assert!((erfcx(x) - direct).abs() < 1e-13 * direct, "x={x}");
        }
        // Asymptotic erfcx(x) ~ 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4))
        let x = 1e4;
        let asym = (1.0 - 0.5 / (x * x)) / (x * PI.sqrt());
        assert!((erfcx(x) - asym).abs() < 1e-15 * asym);
        assert!((erfcx(-1.0) - (2.0 * 1f64.exp() - erfcx(1.0))).abs() < 1e-15);
    }

    #[test]
    fn kummer_against_power_series() {
        for i in 0..=50 {
            let z = 0.1 * i as f64;
            let a = kummer_1f1_half(z).unwrap();
            let b = kummer_series(z);
            assert!((a - b).abs() < 1e-12, "z={z}: {a} vs {b}");
        }
        for z in [1e-6, 5e-5, 1.5e-4] {
            assert!((kummer_1f1_half(z).unwrap() - kummer_series(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_1f1_half(0.0).unwrap(), 1.0);
        // D(1) from the power series of Dawson's integral
        assert!((kummer_1f1_half(1.0).unwrap() - 0.5380795).abs() < 1e-6);
        let z = 100.0;
        assert!((z * kummer_1f1_half(z).unwrap() - 0.5).abs() < 0.005);
        assert!(kummer_1f1_half(-1.0).is_err());
    }

    #[test]
    fn dawson_asymptotic_tail() {
        // D(t) ~ 1/(2t) (1 + 1/(2t^2) + 3/(4t^4) + 15/(8t^6) + 105/(16 t^8))
        for t in [25.0, 30.0, 60.0] {
            let u = 1.0 / (2.0 * t * t);
            let asym = (1.0 + u * (1.0 + u * (3.0 + u * (15.0 + 105.0 * u)))) / (2.0 * t);
            assert!((dawson(t) - asym).abs() < 1e-12 * asym, "t={t}");
        }
    }
}
