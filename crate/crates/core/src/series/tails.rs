//! Dirichlet tails T_m(N) = sum_{n>N} mu(n) n^{-m} at a ladder of cut points.
//!
//! A Moebius series sum mu(n) f(n) whose summand has a large-n expansion
//! f(n) = sum_m c_m n^{-m} is evaluated as
//!
//!   sum_{n<=N} mu(n) f(n) + sum_{m=2}^{M} c_m T_m(N) + R_M(N),
//!
//! where each series supplies its own bound on R_M(N). The tails are computed once
//! per sieve by a backward pass, anchored at the table end L by
//! T_m(L) = 1/zeta(m) - sum_{n<=L} mu(n) n^{-m} (for small m) or by the
//! bound |T_m(L)| <= L^{1-m}/(m-1) (for large m). Uncertainties are tracked per
//! cut and are relative to the tail itself up to a ~1e-31 L floor.

use crate::arithmetic::SieveTables;
use crate::error::{precision, Result};
use crate::series::{Estimate, SeriesConfig};
use crate::sum::{DoubleDouble, Neumaier};

/// Highest power m kept in the tail table.
pub(crate) const MAX_POWER: usize = 18;
const TABLE_CAP: usize = 1 << 22;
const FIRST_CUT: usize = 64;
/// Relative rounding of one f64 operation, with headroom.
const EPS: f64 = 1.2e-16;
/// Relative rounding of one double-double operation, with headroom.
const EPS_DD: f64 = 1e-31;

/// 1/zeta(m) for m = 2..=18 as (hi, lo) pairs.
const INV_ZETA: [(f64, f64); MAX_POWER - 1] = [
    (0.6079271018540267, -2.379773927663665e-17),
    (0.8319073725807075, 8.275403359195136e-18),
    (0.9239384029215901, 3.752195618558758e-17),
    (0.9643873404292624, 1.8404522925589472e-17),
    (0.9829525922645804, -7.201241032351591e-18),
    (0.9917198558384444, -4.2540777426355223e-17),
    (0.9959392011255152, -3.168927647095916e-18),
    (0.9979956327307622, -3.751983448949801e-17),
    (0.9990064130690308, -3.686667327473819e-17),
    (0.9995060554976247, -4.678562517750513e-17),
    (0.9997539739903847, 9.090853118054159e-19),
    (0.9998773017091396, -5.2000802675944995e-17),
    (0.9999387556160456, -2.0662075690648563e-17),
    (0.9999694126993046, -5.498202642291659e-17),
    (0.9999847179741352, -8.187363390758454e-18),
    (0.9999923628606885, -4.5897950318896155e-17),
    (0.9999961827213066, 3.5642030552897216e-17),
];

fn inv_zeta(m: usize) -> DoubleDouble {
    let (hi, lo) = INV_ZETA[m - 2];
    DoubleDouble::new(hi, lo)
}

#[derive(Debug)]
pub(crate) struct MobiusTails {
    cuts: Vec<usize>,
    tails: Vec<[f64; MAX_POWER + 1]>,
    /// Absolute uncertainty of each stored tail.
    uncertainty: Vec<[f64; MAX_POWER + 1]>,
}

impl MobiusTails {
    /// Backward pass over the sieve in double-double, so the anchor
    /// 1/zeta(m) - M_m(L) keeps about 30 digits despite the cancellation.
    pub(crate) fn build(sieve: &SieveTables) -> Self {
        let limit = sieve.limit().min(TABLE_CAP);
        let mut cuts = Vec::new();
        let mut c = FIRST_CUT;
        while c <= limit {
            cuts.push(c);
            c *= 2;
        }
        if cuts.last() != Some(&limit) {
            cuts.push(limit);
        }

        let mu = sieve.mobius();
        let mut acc = [DoubleDouble::default(); MAX_POWER + 1];
        // running bound on the double-double rounding in acc
        let mut err = [0.0f64; MAX_POWER + 1];
        let mut partial = vec![([DoubleDouble::default(); MAX_POWER + 1], [0.0; MAX_POWER + 1]); cuts.len()];
        let mut next = cuts.len();
        for n in (1..=limit).rev() {
            while next > 0 && cuts[next - 1] >= n {
                next -= 1;
                if cuts[next] == n {
                    partial[next] = (acc, err);
                }
            }
            let sign = mu[n];
            if sign == 0 {
                continue;
            }
            let inv = DoubleDouble::recip(n as f64);
            let mut p = inv;
            for m in 2..=MAX_POWER {
                p = p.mul(inv);
                acc[m] = if sign > 0 { acc[m].add(p) } else { acc[m].sub(p) };
                err[m] += EPS_DD * (acc[m].hi.abs() + m as f64 * p.hi);
            }
        }

        let lf = limit as f64;
        let mut anchor = [DoubleDouble::default(); MAX_POWER + 1];
        let mut anchor_unc = [0.0; MAX_POWER + 1];
        for m in 2..=MAX_POWER {
            let bound = lf.powi(1 - m as i32) / (m as f64 - 1.0);
            let computed = err[m] + EPS_DD;
            if bound <= computed {
                anchor_unc[m] = bound;
            } else {
                anchor[m] = inv_zeta(m).sub(acc[m]);
                anchor_unc[m] = computed;
            }
        }
        let mut tails = Vec::with_capacity(cuts.len());
        let mut uncertainty = Vec::with_capacity(cuts.len());
        for (row, row_err) in partial {
            let mut t = [0.0; MAX_POWER + 1];
            let mut u = [0.0; MAX_POWER + 1];
            for m in 2..=MAX_POWER {
                t[m] = row[m].add(anchor[m]).to_f64();
                u[m] = anchor_unc[m] + row_err[m] + EPS * t[m].abs();
            }
            tails.push(t);
            uncertainty.push(u);
        }
        MobiusTails { cuts, tails, uncertainty }
    }

    /// T_m(N) at a tabulated cut; panics for untabulated N.
    #[cfg(test)]
    pub(crate) fn tail(&self, n: usize, m: usize) -> f64 {
        let k = self.cuts.binary_search(&n).expect("tabulated cut");
        self.tails[k][m]
    }

    pub(crate) fn cuts(&self) -> &[usize] {
        &self.cuts
    }
}

/// Evaluates sum_{n>=1} mu(n) f(n) with the tail expansion `coeffs`
/// (coeffs[m] multiplies n^{-m}, m >= 2) and remainder bound `remainder(N)`.
///
/// Picks the smallest tabulated cut N >= `n_min` (and <= cfg.max_terms) whose
/// total bound is at most `tol`. The returned bound also covers rounding in the
/// direct sum, so it can exceed `tol` by a few ulps of sum |f(n)|.
pub(crate) fn mobius_sum_with_tail(
    cfg: &SeriesConfig,
    what: &str,
    tol: f64,
    n_min: usize,
    term: impl Fn(f64) -> f64,
    coeffs: &[f64],
    remainder: impl Fn(f64) -> f64,
) -> Result<Estimate> {
    debug_assert!(coeffs.len() <= MAX_POWER + 1);
    let tails = cfg.tails();
    let mut best = f64::INFINITY;
    let mut chosen = None;
    for (k, &n) in tails.cuts().iter().enumerate() {
        if n > cfg.max_terms() {
            break;
        }
        if n < n_min {
            continue;
        }
        let rounding: f64 = coeffs
            .iter()
            .enumerate()
            .skip(2)
            .map(|(m, c)| {
                let c = c.abs();
                c * tails.uncertainty[k][m] + (m + 3) as f64 * EPS * c * tails.tails[k][m].abs()
            })
            .sum();
        let bound = remainder(n as f64) + rounding;
        if bound.is_finite() && bound < best {
            best = bound;
        }
        if bound <= tol {
            chosen = Some((k, n, bound));
            break;
        }
    }
    let Some((k, cut, bound)) = chosen else {
        return Err(precision(format!(
            "{what}: best truncation bound {best:.3e} above tolerance {tol:.3e} within {} terms",
            cfg.max_terms()
        )));
    };
    let mu = cfg.sieve().mobius();
    let mut acc = Neumaier::new();
    let mut magnitude = 0.0;
    for (n, &sign) in mu.iter().enumerate().take(cut + 1).skip(1) {
        if sign == 0 {
            continue;
        }
        let t = term(n as f64);
        magnitude += t.abs();
        acc.add(if sign > 0 { t } else { -t });
    }
    for m in (2..coeffs.len()).rev() {
        if coeffs[m] != 0.0 {
            acc.add(coeffs[m] * tails.tails[k][m]);
        }
    }
    Ok(Estimate {
        value: acc.value(),
        error_bound: bound + 4.0 * EPS * magnitude,
        terms: cut,
    })
}

/// Remainder for a tail expansion whose coefficients obey |c_m| <= a b^m:
/// sum_{m>M} a b^m sum_{n>N} n^{-m} <= a N (b/N)^{M+1} / (M (1 - b/N)).
pub(crate) fn geometric_remainder(a: f64, b: f64, n: f64, top: usize) -> f64 {
    if b >= n {
        return f64::INFINITY;
    }
    let q = b / n;
    a * n * q.powi(top as i32 + 1) / (top as f64 * (1.0 - q))
}
