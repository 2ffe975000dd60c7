//! Sieve-backed arithmetic: the Moebius function, prime counting, Riemann's J,
//! prime sums, the prime zeta function and the Titchmarsh correction term omega(s).

use crate::error::{domain, precision, range, Error, Result};
use crate::series::{Estimate, SeriesConfig};
use crate::sum::Neumaier;

pub const MAX_SIEVE_LIMIT: usize = 100_000_000;
pub const DEFAULT_SIEVE_LIMIT: usize = 1_000_000;

/// Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1.
const PI_UPPER_CONST: f64 = 1.25506;

/// Moebius values and primes up to `limit`. Immutable once built.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: usize,
    mu: Vec<i8>,
    primes: Vec<u32>,
}

impl SieveTables {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// mu(n) for 1 <= n <= limit. Panics outside that range.
    pub fn mu(&self, n: usize) -> i8 {
        assert!(n >= 1 && n <= self.limit, "mu({n}) outside 1..={}", self.limit);
        self.mu[n]
    }

    /// Moebius table indexed directly by n; entry 0 is a zero placeholder.
    pub fn mobius(&self) -> &[i8] {
        &self.mu
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit as u64 && self.primes.binary_search(&(n as u32)).is_ok()
    }

    fn check_x(&self, x: f64, what: &str) -> Result<u64> {
        if !x.is_finite() || x < 0.0 {
            return Err(domain(format!("{what}: x = {x} must be finite and nonnegative")));
        }
        if x > self.limit as f64 {
            return Err(range(format!(
                "{what}: x = {x} exceeds sieve limit {}",
                self.limit
            )));
        }
        Ok(x.floor() as u64)
    }

    /// Number of primes <= n (n within the table).
    fn pi_int(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= n)
    }
}

/// Linear sieve producing mu(n) and the primes up to `limit`.
pub fn build_sieve(limit: usize) -> Result<SieveTables> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::Config(format!(
            "sieve limit {limit} outside 2..={MAX_SIEVE_LIMIT}"
        )));
    }
    let mut mu = vec![0i8; limit + 1];
    let mut composite = vec![0u64; limit / 64 + 1];
    let mut primes: Vec<u32> = Vec::with_capacity(estimate_prime_count(limit));
    mu[1] = 1;
    for i in 2..=limit {
        if composite[i >> 6] & (1 << (i & 63)) == 0 {
            primes.push(i as u32);
            mu[i] = -1;
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if ip > limit {
                break;
            }
            composite[ip >> 6] |= 1 << (ip & 63);
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(SieveTables { limit, mu, primes })
}

fn estimate_prime_count(limit: usize) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (PI_UPPER_CONST * x / x.ln()) as usize + 1
    }
}

/// Exact pi(x).
pub fn prime_count(x: f64, tables: &SieveTables) -> Result<usize> {
    let n = tables.check_x(x, "prime_count")?;
    Ok(tables.pi_int(n))
}

/// floor(m^(1/k)) computed in integers.
pub fn integer_root(m: u64, k: u32) -> u64 {
    if k == 1 || m < 2 {
        return m;
    }
    let mut r = (m as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |r: u64| -> bool {
        match r.checked_pow(k) {
            Some(v) => v <= m,
            None => false,
        }
    };
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Riemann's prime-power counting function with the half-weight at jumps:
/// J(x) = 1/2 (sum_{p^k < x} 1/k + sum_{p^k <= x} 1/k).
pub fn riemann_j(x: f64, tables: &SieveTables) -> Result<f64> {
    if !(x > 1.0) {
        return Err(domain(format!("riemann_j: x = {x} must exceed 1")));
    }
    let m = tables.check_x(x, "riemann_j")?;
    let on_integer = x == m as f64;
    let mut acc = Neumaier::new();
    for k in 1u32.. {
        let r = integer_root(m, k);
        if r < 2 {
            break;
        }
        let mut count = tables.pi_int(r) as f64;
        if on_integer && r.pow(k) == m && tables.is_prime(r) {
            count -= 0.5;
        }
        acc.add(count / k as f64);
    }
    Ok(acc.value())
}

/// sum_{p <= X} p log p, summed in ascending p.
pub fn prime_sum_plogp(x: f64, tables: &SieveTables) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(range(format!("prime_sum_plogp: X = {x} must be at least 2")));
    }
    let n = tables.check_x(x, "prime_sum_plogp")?;
    let count = tables.pi_int(n);
    Ok(tables.primes[..count]
        .iter()
        .map(|&p| {
            let p = p as f64;
            p * p.ln()
        })
        .collect::<Neumaier>()
        .value())
}

/// Rigorous bound on sum_{p > n} p^{-s}: the smaller of the integer-tail bound
/// n^{1-s}/(s-1) and the same bound sharpened by the prime density 1.25506 s/log n.
pub fn prime_tail_bound(s: f64, n: f64) -> f64 {
    let integer_tail = n.powf(1.0 - s) / (s - 1.0);
    let prime_density = PI_UPPER_CONST * s / n.ln();
    integer_tail * prime_density.min(1.0)
}

/// Dusart's explicit prime-counting bounds
/// x/log x (1 + 1/log x + 2/log^2 x) <= pi(x) <= x/log x (1 + 1/log x + 2.51/log^2 x),
/// the upper one valid for x >= 355991 (the lower one from x >= 599).
const DUSART_FROM: f64 = 355_991.0;
const DUSART_LOW: f64 = 2.0;
const DUSART_HIGH: f64 = 2.51;

/// int_U^inf e^{-w} w^{-k} dw for k = 1, 2, 3.
fn exp_integrals(u: f64) -> Result<[f64; 3]> {
    let g1 = -crate::specfun::expint_ei_neg(u)?;
    let e = (-u).exp();
    let g2 = e / u - g1;
    let g3 = (e / (u * u) - g2) / 2.0;
    Ok([g1, g2, g3])
}

/// sum_{p > n} p^{-s} as (midpoint, half-width) from the explicit bounds on pi(x):
/// the tail equals -pi(n) n^{-s} + s int_n^inf pi(x) x^{-s-1} dx.
pub fn prime_tail_interval(s: f64, n: f64, pi_n: usize) -> Result<(f64, f64)> {
    if n < DUSART_FROM {
        return Ok((0.0, prime_tail_bound(s, n)));
    }
    let u = (s - 1.0) * n.ln();
    let [g1, g2, g3] = exp_integrals(u)?;
    // int_n^inf x^{-s} log^{-k} x dx = (s-1)^{k-1} g_k
    let base = g1 + (s - 1.0) * g2;
    let cubic = (s - 1.0) * (s - 1.0) * g3;
    let boundary = pi_n as f64 * n.powf(-s);
    let low = -boundary + s * (base + DUSART_LOW * cubic);
    let high = -boundary + s * (base + DUSART_HIGH * cubic);
    Ok((0.5 * (low + high), 0.5 * (high - low)))
}

/// Prime zeta P(s) = sum_p p^{-s}: the sieved primes plus the midpoint of the
/// explicit-bound tail interval, refusing results whose half-width exceeds `cfg.tol`.
pub fn prime_zeta(s: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(domain(format!("prime_zeta: s = {s} must exceed 1")));
    }
    let tables = cfg.sieve();
    let (tail, half_width) = prime_tail_interval(s, tables.limit() as f64, tables.primes().len())?;
    if half_width > cfg.tol() {
        return Err(precision(format!(
            "prime_zeta({s}): tail uncertainty {half_width:.3e} above tolerance {:.3e}; a larger sieve is needed",
            cfg.tol()
        )));
    }
    // Smallest terms first.
    let mut acc: Neumaier = tables.primes().iter().rev().map(|&p| (p as f64).powf(-s)).collect();
    acc.add(tail);
    Ok(Estimate {
        value: acc.value(),
        error_bound: half_width,
        terms: tables.primes().len(),
    })
}

/// omega(s) = (1/s) sum_p sum_{n>=2} p^{-ns}/n, the prime-power form of
/// the integral of pi(x)/(x^{s+1}(x^s - 1)) over [2, inf).
pub fn omega_small(s: f64, cfg: &SeriesConfig) -> Result<Estimate> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(domain(format!("omega_small: s = {s} must exceed 1")));
    }
    let tables = cfg.sieve();
    let inner_cut = cfg.tol() * 1e-2;
    // Tail over primes >= q of sum_{n>=2} q^{-ns}/n.
    let tail_from = |q: f64| {
        let head = q.powf(-2.0 * s) + q.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
        head / (2.0 * (1.0 - q.powf(-s)))
    };
    let mut per_prime = Vec::new();
    let mut tail = tail_from(tables.limit() as f64 + 1.0);
    for &p in tables.primes() {
        let q = p as f64;
        if tail_from(q) < inner_cut {
            tail = tail_from(q);
            break;
        }
        let x = q.powf(-s);
        let mut xn = x * x;
        let mut inner = Neumaier::new();
        for n in 2u32.. {
            let term = xn / n as f64;
            inner.add(term);
            if term < inner_cut {
                // Geometric remainder of the inner sum.
                inner.add(term * x / (1.0 - x));
                break;
            }
            xn *= x;
        }
        per_prime.push(inner.value());
    }
    if tail > cfg.tol() {
        return Err(precision(format!(
            "omega_small({s}): tail bound {tail:.3e} above tolerance {:.3e}",
            cfg.tol()
        )));
    }
    let terms = per_prime.len();
    let value = per_prime.into_iter().rev().collect::<Neumaier>().value() / s;
    Ok(Estimate {
        value,
        error_bound: (tail + inner_cut) / s,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_mu(n: u64) -> i8 {
        let mut m = n;
        let mut sign = 1i8;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                m /= d;
                if m % d == 0 {
                    return 0;
                }
                sign = -sign;
            }
            d += 1;
        }
        if m > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn small_table() {
        let t = build_sieve(10).unwrap();
        let mu: Vec<i8> = (1..=10).map(|n| t.mu(n)).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn limit_out_of_range() {
        assert!(matches!(build_sieve(1), Err(Error::Config(_))));
        assert!(matches!(build_sieve(MAX_SIEVE_LIMIT + 1), Err(Error::Config(_))));
    }

    #[test]
    fn mertens_matches_trial_division() {
        let t = build_sieve(10_000).unwrap();
        let mut m_sieve = 0i64;
        let mut m_oracle = 0i64;
        for n in 1..=10_000u64 {
            m_sieve += t.mu(n as usize) as i64;
            m_oracle += trial_division_mu(n) as i64;
            assert_eq!(m_sieve, m_oracle, "N = {n}");
        }
    }

    #[test]
    fn mertens_million() {
        // Oracle: trial-division Moebius summed over 1..=10^6.
        let t = build_sieve(1_000_000).unwrap();
        let sieve: i64 = t.mobius().iter().map(|&m| m as i64).sum();
        let oracle: i64 = (1..=1_000_000u64).map(|n| trial_division_mu(n) as i64).sum();
        assert_eq!(sieve, oracle);
        assert_eq!(sieve, 212);
    }

    #[test]
    fn prime_counts() {
        let t = build_sieve(1000).unwrap();
        assert_eq!(prime_count(10.0, &t).unwrap(), 4);
        assert_eq!(prime_count(2.0, &t).unwrap(), 1);
        assert_eq!(prime_count(100.0, &t).unwrap(), 25);
        assert_eq!(prime_count(1.5, &t).unwrap(), 0);
        assert!(matches!(prime_count(1000.5, &t), Err(Error::Range(_))));
    }

    #[test]
    fn integer_roots_are_exact_on_perfect_powers() {
        for k in 1..8u32 {
            for r in 2..60u64 {
                let m = r.pow(k);
                assert_eq!(integer_root(m, k), r);
                assert_eq!(integer_root(m - 1, k), r - 1);
            }
        }
        assert_eq!(integer_root(u64::MAX, 2), 4_294_967_295);
    }

    #[test]
    fn riemann_j_examples() {
        let t = build_sieve(1000).unwrap();
        assert!((riemann_j(10.0, &t).unwrap() - 16.0 / 3.0).abs() < 1e-14);
        assert!((riemann_j(4.0, &t).unwrap() - 2.25).abs() < 1e-14);
        assert!((riemann_j(2.5, &t).unwrap() - 1.0).abs() < 1e-14);
        // jump at 2: half weight
        assert!((riemann_j(2.0, &t).unwrap() - 0.5).abs() < 1e-14);
        assert!(riemann_j(1.0, &t).is_err());
    }

    #[test]
    fn prime_sum_examples() {
        let t = build_sieve(100).unwrap();
        let two = 2f64 * 2f64.ln();
        assert!((prime_sum_plogp(2.0, &t).unwrap() - two).abs() < 1e-15);
        let direct: f64 = [2f64, 3., 5., 7.].iter().map(|p| p * p.ln()).sum();
        assert!((prime_sum_plogp(10.0, &t).unwrap() - direct).abs() < 1e-12);
        assert!((direct - 26.35069).abs() < 1e-4);
        assert!(matches!(prime_sum_plogp(1.9, &t), Err(Error::Range(_))));
    }

    fn cfg(limit: usize) -> SeriesConfig {
        SeriesConfig::new(std::sync::Arc::new(build_sieve(limit).unwrap()))
    }

    #[test]
    fn tail_interval_contains_next_decade() {
        // Exact primes in (1e6, 1e7] plus [0, crude bound] for the rest.
        let big = build_sieve(10_000_000).unwrap();
        let s = 2.0;
        let between: f64 = big
            .primes()
            .iter()
            .rev()
            .filter(|&&p| p > 1_000_000)
            .map(|&p| (p as f64).powf(-s))
            .sum();
        let beyond = prime_tail_bound(s, 1e7);
        let pi_n = big.primes().iter().filter(|&&p| p <= 1_000_000).count();
        let (mid, half) = prime_tail_interval(s, 1e6, pi_n).unwrap();
        assert!(mid - half <= between + beyond && between <= mid + half, "{mid} +- {half} vs {between}");
        assert!(half < 1e-9);
    }

    #[test]
    fn prime_zeta_examples() {
        let c = cfg(1_000_000).with_tol(1e-9).unwrap();
        // Published value P(2) = 0.45224742004106549850...
        let p2 = prime_zeta(2.0, &c).unwrap();
        assert!((p2.value - 0.4522474200410655).abs() < 1e-9, "{p2:?}");
        let p10 = prime_zeta(10.0, &c).unwrap().value * 1024.0;
        let brute: f64 = [2f64, 3., 5., 7., 11., 13.].iter().map(|p| (p / 2.0).powi(-10)).sum();
        assert!((p10 - 1.0177).abs() < 5e-4 && (p10 - brute).abs() < 1e-9);
        assert!(matches!(prime_zeta(1.05, &c), Err(Error::Precision(_))));
        assert!(matches!(prime_zeta(1.0, &c), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_examples() {
        let c = cfg(100_000);
        let w = omega_small(10.0, &c).unwrap().value;
        assert!(w > 4.5e-8 && w < 5.5e-8);
        // Leading prime-power term 2^{-20}/2 over s.
        assert!((w / (2f64.powi(-20) / 20.0) - 1.0).abs() < 0.01);
        assert!(omega_small(1.0, &c).is_err());
    }
}
