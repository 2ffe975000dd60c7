//! Integrals of the form int_0^inf riesz_core(c y) k(y) dy.
//!
//! The range is cut at a point Y chosen from a rigorous tail bound, split at
//! y = 1/c, and the outer part is integrated in log y. Series tolerances for the
//! integrand are loosened where |k| is small and the realised series error is
//! carried into the total.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::Integrator;
use crate::series::riesz_core;

use super::Context;

/// |riesz_core(z)| <= RIESZ_DECAY_CONST z^{-3/4} + 1e-19, from partial summation
/// with |M(t)| <= sqrt(t) (verified numerically for t <= 1e16) and
/// |M(t)| <= t/4345 beyond; the constant is int_0^inf sqrt(s) |h'(s)| ds for
/// h(s) = e^{-1/s^2}/s^2, rounded up.
pub const RIESZ_DECAY_CONST: f64 = 0.89;
const FAR_TAIL: f64 = 1e-19;
/// Largest argument handed to the series.
const MAX_ARGUMENT: f64 = 1e9;

/// Unconditional bound on |riesz_core(z)|, z > 0.
pub fn riesz_magnitude_bound(z: f64) -> f64 {
    let trivial = PI.sqrt() / (2.0 * z.sqrt()) + 1.0 / (std::f64::consts::E * z);
    let decay = RIESZ_DECAY_CONST * z.powf(-0.75) + FAR_TAIL;
    trivial.min(decay).min(PI * PI / 6.0)
}

/// Envelope of the kernel beyond the cut point.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Decay {
    /// |k(y)| <= k0 y^{-3/2} for all y >= 1/c.
    Power { k0: f64 },
    /// |k(y)| <= k0 e^{-rate y}.
    Exponential { k0: f64, rate: f64 },
}

impl Decay {
    fn tail(&self, c: f64, y: f64) -> f64 {
        match *self {
            Decay::Power { k0 } => {
                let trivial = PI.sqrt() / (2.0 * c.sqrt()) / y + 2.0 / (3.0 * std::f64::consts::E * c) * y.powf(-1.5);
                let decay = RIESZ_DECAY_CONST * c.powf(-0.75) * 0.8 * y.powf(-1.25) + 2.0 * FAR_TAIL / y.sqrt();
                k0 * trivial.min(decay)
            }
            Decay::Exponential { k0, rate } => PI * PI / 6.0 * k0 * (-rate * y).exp() / rate,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RieszIntegral {
    pub value: f64,
    pub quad_err: f64,
    pub tail: f64,
    pub series_err: f64,
    pub cut: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl RieszIntegral {
    pub fn error(&self) -> f64 {
        self.quad_err + self.tail + self.series_err
    }
}

/// int_0^inf riesz_core(c y) k(y) dy to about `target`.
///
/// `singular` marks a y^{-1/2} singularity of k at 0. Precision errors of the
/// series inside the integrand are returned as `Err`.
pub(crate) fn riesz_integral(
    ctx: &Context,
    c: f64,
    kernel: impl Fn(f64) -> f64,
    decay: Decay,
    singular: bool,
    target: f64,
) -> Result<RieszIntegral> {
    let split = 1.0 / c;
    let mut cut = 4.0 * split;
    while decay.tail(c, cut) > 0.25 * target && c * cut < MAX_ARGUMENT {
        cut *= 2.0;
    }
    let tail = decay.tail(c, cut);
    let log_span = (cut / split).ln();
    let series_tol = 0.25 * target / (2.0 + log_span);

    // Largest realised error weighted so that the weights integrate to 2 on
    // [0, split] and to log(cut/split) beyond.
    let near = Cell::new(0.0f64);
    let far = Cell::new(0.0f64);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let eval = |y: f64, weight: f64, slot: &Cell<f64>| -> f64 {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        let k = kernel(y);
        if k == 0.0 {
            return 0.0;
        }
        let scale = (k.abs() * weight).max(f64::MIN_POSITIVE);
        let tol = (series_tol / scale).clamp(series_tol, 1e-6);
        let cfg = ctx.series(tol);
        match riesz_core(c * y, &cfg) {
            Ok(r) => {
                slot.set(slot.get().max(r.error_bound * scale));
                r.value * k
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let quad = ctx.integrator();
    let piece_tol = 0.25 * target;
    let inner = if singular {
        quad.finite(
            |u: f64| {
                let y = u * u;
                2.0 * u * eval(y, (y * split).sqrt(), &near)
            },
            0.0,
            split.sqrt(),
            piece_tol,
        )
    } else {
        quad.finite(|y: f64| eval(y, (y * split).sqrt(), &near), 0.0, split, piece_tol)
    };
    let remaining = Integrator::with_budget(quad.budget.saturating_sub(inner.evaluations));
    let outer = remaining.finite(
        |v: f64| {
            let y = v.exp();
            y * eval(y, y, &far)
        },
        split.ln(),
        cut.ln(),
        piece_tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(RieszIntegral {
        value: inner.value + outer.value,
        quad_err: inner.err_estimate + outer.err_estimate,
        tail,
        series_err: 2.0 * near.get() + log_span * far.get(),
        cut,
        evaluations: inner.evaluations + outer.evaluations,
        converged: inner.converged && outer.converged,
    })
}
