//! Adaptive Gauss-Kronrod quadrature on finite intervals, a rational map for
//! [0, inf), and sine/cosine transforms summed between zero crossings with
//! Wynn's epsilon algorithm.
//!
//! Error estimates are the raw Kronrod-minus-Gauss differences. Integrands are
//! called sequentially, in an unspecified order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::sum::Neumaier;

/// Default cap on integrand evaluations per integral.
pub const DEFAULT_BUDGET: usize = 200_000;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights on XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const GK_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn failed(evaluations: usize) -> Self {
        QuadResult { value: f64::NAN, err_estimate: f64::INFINITY, evaluations, converged: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Sine,
    Cosine,
}

/// How far an oscillatory transform runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffPolicy {
    /// Integrate to infinity, accelerating at most `max_cycles` half-periods.
    Accelerate { max_cycles: usize },
    /// Integrate exactly over [0, T].
    Truncate(f64),
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy::Accelerate { max_cycles: 400 }
    }
}

/// Behaviour of a [0, inf) integrand at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// Integrable y^{-1/2}-type singularity; integrate in u with y = u^2.
    SqrtSingular,
}

/// Quadrature settings: the per-integral evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub budget: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator { budget: DEFAULT_BUDGET }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, err: if err.is_nan() { f64::INFINITY } else { err } }
}

impl Integrator {
    pub fn with_budget(budget: usize) -> Self {
        Integrator { budget }
    }

    /// Globally adaptive 7/15-point Gauss-Kronrod on [a, b], splitting the
    /// segment with the largest error until the summed error is <= `tol`.
    pub fn finite<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, tol: f64) -> QuadResult {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return QuadResult::failed(0);
        }
        if self.budget < GK_POINTS {
            return QuadResult::failed(0);
        }
        let first = gauss_kronrod(&f, a, b);
        let mut evaluations = GK_POINTS;
        let mut heap = BinaryHeap::new();
        // Segments too narrow to split further.
        let mut settled: Vec<Segment> = Vec::new();
        heap.push(first);
        let totals = |heap: &BinaryHeap<Segment>, settled: &[Segment]| {
            let mut v = Neumaier::new();
            let mut e = 0.0;
            for s in heap.iter().chain(settled) {
                v.add(s.value);
                e += s.err;
            }
            (v.value(), e)
        };
        let mut err_total = heap.peek().map_or(0.0, |s| s.err);
        loop {
            if err_total <= tol {
                let (value, err) = totals(&heap, &settled);
                if err <= tol {
                    return finish(value, err, evaluations, true);
                }
                err_total = err;
            }
            if evaluations + 2 * GK_POINTS > self.budget {
                let (value, err) = totals(&heap, &settled);
                return finish(value, err, evaluations, err <= tol);
            }
            let Some(worst) = heap.pop() else {
                let (value, err) = totals(&heap, &settled);
                return finish(value, err, evaluations, err <= tol);
            };
            let mid = 0.5 * (worst.a + worst.b);
            if !(worst.a < mid && mid < worst.b) || (worst.b - worst.a) < 1e-14 * mid.abs() {
                settled.push(worst);
                continue;
            }
            let left = gauss_kronrod(&f, worst.a, mid);
            let right = gauss_kronrod(&f, mid, worst.b);
            evaluations += 2 * GK_POINTS;
            err_total += left.err + right.err - worst.err;
            heap.push(left);
            heap.push(right);
            if evaluations % (200 * GK_POINTS) == 0 {
                err_total = totals(&heap, &settled).1;
            }
        }
    }

    /// Integral over [0, inf) through y = scale (1 - t)/t, t in (0, 1].
    ///
    /// `endpoint` selects the y = u^2 substitution for y^{-1/2} singularities at 0.
    pub fn semi_infinite<F: Fn(f64) -> f64>(
        &self,
        f: F,
        tol: f64,
        endpoint: Endpoint,
        scale: f64,
    ) -> QuadResult {
        if !(scale > 0.0) || !scale.is_finite() {
            return QuadResult::failed(0);
        }
        let g = |y: f64| -> f64 {
            match endpoint {
                Endpoint::Regular => f(y),
                Endpoint::SqrtSingular => 2.0 * y * f(y * y),
            }
        };
        let mapped = |t: f64| -> f64 {
            if t <= 0.0 {
                return 0.0;
            }
            let y = scale * (1.0 - t) / t;
            let v = g(y) * scale / (t * t);
            if v.is_finite() {
                v
            } else if y > 0.0 && g(y) == 0.0 {
                0.0
            } else {
                v
            }
        };
        self.finite(mapped, 0.0, 1.0, tol)
    }

    /// int_0^inf f(x) sin(w x) dx or the cosine analogue, integrated between
    /// consecutive zeros of the trigonometric factor.
    ///
    /// Under `Accelerate`, the partial sums are extrapolated with Wynn's epsilon
    /// algorithm; convergence needs two successive extrapolations within `tol`.
    pub fn oscillatory<F: Fn(f64) -> f64>(
        &self,
        f: F,
        kind: TransformKind,
        w: f64,
        tol: f64,
        cutoff: CutoffPolicy,
    ) -> QuadResult {
        if !(w > 0.0) || !w.is_finite() {
            return QuadResult::failed(0);
        }
        let trig = |x: f64| match kind {
            TransformKind::Sine => (w * x).sin(),
            TransformKind::Cosine => (w * x).cos(),
        };
        let g = |x: f64| f(x) * trig(x);
        let offset = match kind {
            TransformKind::Sine => 1.0,
            TransformKind::Cosine => 0.5,
        };
        let zero = |k: usize| (k as f64 + offset) * PI / w;
        let mut evaluations = 0;
        let piece_tol = |k: usize| tol * 1e-2 / (1.0 + k as f64).powf(1.1);

        match cutoff {
            CutoffPolicy::Truncate(big_t) => {
                if !(big_t > 0.0) {
                    return QuadResult::failed(0);
                }
                let mut acc = Neumaier::new();
                let mut err = 0.0;
                let mut converged = true;
                let mut lo = 0.0;
                let mut k = 0;
                while lo < big_t {
                    let hi = zero(k).min(big_t);
                    let sub = Integrator::with_budget(self.budget.saturating_sub(evaluations));
                    let piece = sub.finite(&g, lo, hi, piece_tol(k));
                    evaluations += piece.evaluations;
                    if !piece.value.is_finite() {
                        return QuadResult::failed(evaluations);
                    }
                    converged &= piece.converged;
                    acc.add(piece.value);
                    err += piece.err_estimate;
                    lo = hi;
                    k += 1;
                }
                finish(acc.value(), err, evaluations, converged && err <= tol)
            }
            CutoffPolicy::Accelerate { max_cycles } => {
                let mut partial = Vec::new();
                let mut acc = Neumaier::new();
                let mut pieces_err = 0.0;
                let mut pieces_ok = true;
                let mut lo = 0.0;
                let mut last: Option<(f64, f64)> = None;
                for k in 0..max_cycles {
                    let hi = zero(k);
                    let sub = Integrator::with_budget(self.budget.saturating_sub(evaluations));
                    let piece = sub.finite(&g, lo, hi, piece_tol(k));
                    evaluations += piece.evaluations;
                    if !piece.value.is_finite() {
                        return QuadResult::failed(evaluations);
                    }
                    pieces_ok &= piece.converged;
                    pieces_err += piece.err_estimate;
                    acc.add(piece.value);
                    partial.push(acc.value());
                    lo = hi;
                    if partial.len() >= 4 {
                        let (est, spread) = wynn_epsilon(&partial);
                        let err = spread + pieces_err;
                        if let Some((prev, prev_err)) = last {
                            if err <= tol && prev_err <= tol && (est - prev).abs() <= tol {
                                return finish(est, err.max((est - prev).abs()), evaluations, pieces_ok);
                            }
                        }
                        last = Some((est, err));
                    }
                    if evaluations >= self.budget {
                        break;
                    }
                }
                match last {
                    Some((est, err)) => finish(est, err, evaluations, false),
                    None => QuadResult::failed(evaluations),
                }
            }
        }
    }
}

fn finish(value: f64, err: f64, evaluations: usize, converged: bool) -> QuadResult {
    QuadResult { value, err_estimate: err, evaluations, converged: converged && value.is_finite() }
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the deepest even-column estimate and the largest difference between
/// it and the two estimates obtained from the shorter sequences.
pub fn wynn_epsilon(seq: &[f64]) -> (f64, f64) {
    let estimate = |s: &[f64]| -> f64 {
        let n = s.len();
        // prev = column k-1, cur = column k; entries indexed by starting position.
        let mut prev = vec![0.0; n + 1];
        let mut cur: Vec<f64> = s.to_vec();
        let mut best = s[n - 1];
        for k in 1..n {
            let len = n - k;
            let mut next = vec![0.0; len];
            for i in 0..len {
                let diff = cur[i + 1] - cur[i];
                if diff == 0.0 || !diff.is_finite() {
                    return if k % 2 == 1 { cur[i + 1] } else { best };
                }
                next[i] = prev[i + 1] + 1.0 / diff;
            }
            prev = cur;
            cur = next;
            if k % 2 == 0 {
                best = cur[len - 1];
            }
        }
        best
    };
    let n = seq.len();
    let e0 = estimate(seq);
    if n < 3 {
        return (e0, f64::INFINITY);
    }
    let e1 = estimate(&seq[..n - 1]);
    let e2 = estimate(&seq[..n - 2]);
    (e0, (e0 - e1).abs().max((e0 - e2).abs()))
}

/// Adaptive Gauss-Kronrod on [a, b] with the default budget.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    Integrator::default().finite(f, a, b, tol)
}

/// Integral over [0, inf) with the default budget and unit scale.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, tol: f64, endpoint: Endpoint) -> QuadResult {
    Integrator::default().semi_infinite(f, tol, endpoint, 1.0)
}

/// Sine or cosine transform with the default budget.
pub fn oscillatory_transform<F: Fn(f64) -> f64>(
    f: F,
    kind: TransformKind,
    w: f64,
    tol: f64,
    cutoff: CutoffPolicy,
) -> QuadResult {
    Integrator::default().oscillatory(f, kind, w, tol, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{erf, kummer_1f1_half};

    fn within(r: &QuadResult, exact: f64, tol: f64) {
        assert!(r.converged, "{r:?}");
        assert!((r.value - exact).abs() <= tol, "{} vs {exact} ({r:?})", r.value);
        // Estimates are conservative for these smooth integrands.
        assert!((r.value - exact).abs() <= 10.0 * r.err_estimate + 1e-15, "{r:?}");
    }

    #[test]
    fn finite_basics() {
        within(&integrate_finite(|_| 1.0, 0.0, 1.0, 1e-14), 1.0, 1e-14);
        within(&integrate_finite(f64::sin, 0.0, PI, 1e-12), 2.0, 1e-12);
        assert!(!integrate_finite(|x| x, 1.0, 1.0, 1e-6).converged);
    }

    #[test]
    fn finite_gaussian_against_closed_form() {
        // int_0^{log X} e^{-r x - a x^2} dx at r = 1, a = 1/4, X = e^2.
        let (r, a, l) = (1.0f64, 0.25f64, 2.0f64);
        let q = integrate_finite(|x| (-r * x - a * x * x).exp(), 0.0, l, 1e-13);
        let closed = PI.sqrt() * (r * r / (4.0 * a)).exp() / (2.0 * a.sqrt())
            * (erf((r + 2.0 * a * l) / (2.0 * a.sqrt())) - erf(r / (2.0 * a.sqrt())));
        within(&q, closed, 1e-10);
    }

    #[test]
    fn semi_infinite_basics() {
        within(&integrate_semi_infinite(|y| (-y).exp(), 1e-13, Endpoint::Regular), 1.0, 1e-12);
        let direct = integrate_semi_infinite(|y| (-y).exp() / y.sqrt(), 1e-11, Endpoint::SqrtSingular);
        within(&direct, PI.sqrt(), 1e-10);
        // Same integral written in u by hand.
        let by_hand = integrate_semi_infinite(|u| 2.0 * (-u * u).exp(), 1e-12, Endpoint::Regular);
        assert!((direct.value - by_hand.value).abs() < 1e-9);
        let dawson = integrate_semi_infinite(|t| (-t * t).exp() * (2.0 * t).sin(), 1e-12, Endpoint::Regular);
        within(&dawson, 0.5380795069127684, 1e-10);
    }

    #[test]
    fn gaussian_sine_transform_is_kummer() {
        for x in [0.5, 1.0, 2.0] {
            let q = integrate_semi_infinite(|t| (-t * t).exp() * (2.0 * x * t).sin(), 1e-12, Endpoint::Regular);
            let k = x * kummer_1f1_half(x * x).unwrap();
            assert!((q.value - k).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn oscillatory_laplace_pairs() {
        let acc = CutoffPolicy::default();
        let q = oscillatory_transform(|x| (-x).exp(), TransformKind::Cosine, 1.0, 1e-11, acc);
        within(&q, 0.5, 1e-10);
        let q = oscillatory_transform(|x| (-x / 2.0).exp(), TransformKind::Cosine, 3.0, 1e-11, acc);
        within(&q, 0.5 / (0.25 + 9.0), 1e-9);
        let q = oscillatory_transform(|t| (-2.0 * PI * t).exp(), TransformKind::Sine, 1.0, 1e-11, acc);
        within(&q, 1.0 / (1.0 + 4.0 * PI * PI), 1e-9);
    }

    #[test]
    fn oscillatory_slow_decay_is_accelerated() {
        // int_0^inf sin(x)/(1+x) dx has an algebraically decaying integrand.
        let q = oscillatory_transform(
            |x| 1.0 / (1.0 + x),
            TransformKind::Sine,
            1.0,
            1e-9,
            CutoffPolicy::default(),
        );
        // Ci(1) sin 1 + (pi/2 - Si(1)) cos 1
        let exact = 0.6214496242358134;
        within(&q, exact, 1e-8);
    }

    #[test]
    fn truncated_transform_matches_finite() {
        let f = |t: f64| (-0.1 * t).exp();
        let q = oscillatory_transform(f, TransformKind::Sine, 2.0, 1e-12, CutoffPolicy::Truncate(7.3));
        let d = integrate_finite(|t| f(t) * (2.0 * t).sin(), 0.0, 7.3, 1e-12);
        assert!((q.value - d.value).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let q = Integrator::with_budget(100).finite(|x| x.abs().sqrt().recip(), -1.0, 1.0, 1e-14);
        assert!(!q.converged);
        assert!(q.evaluations <= 100);
    }

    #[test]
    fn wynn_on_alternating_harmonic() {
        let mut s = 0.0;
        let seq: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (est, err) = wynn_epsilon(&seq);
        assert!((est - 2f64.ln()).abs() < 1e-12, "{est}");
        assert!(err < 1e-9);
    }
}
