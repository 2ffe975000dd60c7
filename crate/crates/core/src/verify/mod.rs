//! Identity checks. Each check evaluates two sides through separate code paths
//! and reports residuals, a tolerance and a status.
//!
//! Status rules:
//! - `Abs`/`Rel`: PASS when the residual is within `tol` and the error bounds of
//!   the inputs are at most tol/100; FAIL when the residual exceeds `tol` plus
//!   those bounds; INCONCLUSIVE otherwise, or when an input could not be computed
//!   to the needed precision (including non-converged quadrature).
//! - `Bound`: the claim is lhs <= rhs; `abs_resid` is max(lhs - rhs, 0).
//! - `Report`: always REPORT_ONLY.

mod checks;
mod manifest;
mod riesz_integral;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, Error, Result};
use crate::quadrature::Integrator;
use crate::series::{SeriesConfig, ZeroTable};

pub use manifest::{
    check_ids, default_params, manifest, CheckManifest, Evaluator, GRID_VERSION, INFRASTRUCTURE,
};
pub use checks::grid_points;
pub use riesz_integral::{riesz_magnitude_bound, RIESZ_DECAY_CONST};

/// Named numeric parameters of one check invocation.
pub type ParamSet = BTreeMap<String, f64>;

/// Parameter sets per check id.
pub type ParamTable = BTreeMap<String, Vec<ParamSet>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    ReportOnly,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::ReportOnly => "REPORT_ONLY",
        }
    }
}

/// Which residual the tolerance applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Abs,
    Rel,
    Bound,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub params: ParamSet,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_resid: f64,
    pub rel_resid: f64,
    pub tol: f64,
    pub comparison: Comparison,
    pub status: Status,
    pub notes: String,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Shared, immutable inputs of a verification run.
#[derive(Debug, Clone)]
pub struct Context {
    cfg: SeriesConfig,
    zeros: Option<Arc<ZeroTable>>,
    integrator: Integrator,
    tol_overrides: BTreeMap<String, f64>,
}

impl Context {
    pub fn new(cfg: SeriesConfig, zeros: Option<ZeroTable>, integrator: Integrator) -> Self {
        Context {
            cfg,
            zeros: zeros.map(Arc::new),
            integrator,
            tol_overrides: BTreeMap::new(),
        }
    }

    /// Replaces the declared tolerance of check `id`.
    pub fn with_tol_override(mut self, id: &str, tol: f64) -> Result<Self> {
        if !check_ids().contains(&id) {
            return Err(config(format!("tolerance override for unknown check '{id}'")));
        }
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(config(format!("tolerance override {tol} for '{id}' must be finite and >= 0")));
        }
        self.tol_overrides.insert(id.to_string(), tol);
        Ok(self)
    }

    pub fn cfg(&self) -> &SeriesConfig {
        &self.cfg
    }

    pub fn integrator(&self) -> Integrator {
        self.integrator
    }

    pub fn zeros(&self) -> Result<&ZeroTable> {
        self.zeros
            .as_deref()
            .ok_or_else(|| Error::Data("no zeros table loaded".into()))
    }

    /// The series configuration with tolerance `tol` (sieve shared).
    pub(crate) fn series(&self, tol: f64) -> SeriesConfig {
        self.cfg.with_tol(tol).expect("internal tolerances are positive")
    }

    pub(crate) fn tol_for(&self, id: &str, declared: f64) -> f64 {
        self.tol_overrides.get(id).copied().unwrap_or(declared)
    }
}

/// Everything a check reports before the status is decided.
#[derive(Debug, Clone, Default)]
pub(crate) struct Outcome {
    pub lhs: f64,
    pub rhs: f64,
    /// Combined error bound (or estimate) of lhs and rhs, in the units of the comparison.
    pub input_err: f64,
    /// Set when an input is known not to meet its target (e.g. quadrature did not converge).
    pub unreliable: Option<String>,
    pub notes: Vec<String>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Outcome { lhs, rhs, ..Default::default() }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn diag(&mut self, key: &str, value: f64) {
        self.diagnostics.insert(key.to_string(), value);
    }

    pub fn distrust(&mut self, why: impl Into<String>) {
        if self.unreliable.is_none() {
            self.unreliable = Some(why.into());
        }
    }
}

fn residuals(lhs: f64, rhs: f64) -> (f64, f64) {
    let abs = (lhs - rhs).abs();
    let rel = if rhs != 0.0 { abs / rhs.abs() } else { abs };
    (abs, rel)
}

pub(crate) fn decide(
    id: &str,
    params: &ParamSet,
    comparison: Comparison,
    tol: f64,
    outcome: Outcome,
) -> CheckResult {
    let Outcome { lhs, rhs, input_err, unreliable, mut notes, diagnostics } = outcome;
    let (mut abs_resid, rel_resid) = residuals(lhs, rhs);
    let finite = lhs.is_finite() && rhs.is_finite();
    let status = match comparison {
        Comparison::Report => Status::ReportOnly,
        _ if !finite => {
            notes.push("a side is not finite".into());
            Status::Inconclusive
        }
        _ if unreliable.is_some() => Status::Inconclusive,
        Comparison::Abs | Comparison::Rel => {
            let resid = if comparison == Comparison::Abs { abs_resid } else { rel_resid };
            if resid > tol + input_err {
                Status::Fail
            } else if resid <= tol && input_err * 100.0 <= tol {
                Status::Pass
            } else {
                notes.push(format!(
                    "undecided: residual {resid:.3e}, input error {input_err:.3e}, tolerance {tol:.3e}"
                ));
                Status::Inconclusive
            }
        }
        Comparison::Bound => {
            abs_resid = (lhs - rhs).max(0.0);
            if lhs - input_err > rhs {
                Status::Fail
            } else if lhs + input_err <= rhs {
                Status::Pass
            } else {
                notes.push(format!("undecided: input error {input_err:.3e} straddles the bound"));
                Status::Inconclusive
            }
        }
    };
    if let Some(why) = unreliable {
        notes.push(why);
    }
    CheckResult {
        id: id.to_string(),
        params: params.clone(),
        lhs,
        rhs,
        abs_resid,
        rel_resid,
        tol,
        comparison,
        status,
        notes: notes.join("; "),
        diagnostics,
    }
}

/// Result for a check whose inputs failed with a precision error.
pub(crate) fn inconclusive(id: &str, params: &ParamSet, comparison: Comparison, tol: f64, err: &Error) -> CheckResult {
    CheckResult {
        id: id.to_string(),
        params: params.clone(),
        lhs: f64::NAN,
        rhs: f64::NAN,
        abs_resid: f64::NAN,
        rel_resid: f64::NAN,
        tol,
        comparison,
        status: if comparison == Comparison::Report { Status::ReportOnly } else { Status::Inconclusive },
        notes: err.to_string(),
        diagnostics: BTreeMap::new(),
    }
}

fn cmp_params(a: &ParamSet, b: &ParamSet) -> Ordering {
    let mut ia = a.iter();
    let mut ib = b.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ka, va)), Some((kb, vb))) => {
                let o = ka.cmp(kb).then(va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// Expands `["all"]` and validates the ids.
pub fn resolve_selection<S: AsRef<str>>(selection: &[S]) -> Result<Vec<&'static str>> {
    let known = check_ids();
    if selection.iter().any(|s| s.as_ref() == "all") {
        return Ok(known.to_vec());
    }
    if selection.is_empty() {
        return Err(config("no checks selected"));
    }
    let mut out = Vec::new();
    for s in selection {
        let id = known
            .iter()
            .find(|k| **k == s.as_ref())
            .ok_or_else(|| config(format!("unknown check id '{}'", s.as_ref())))?;
        if !out.contains(id) {
            out.push(*id);
        }
    }
    Ok(out)
}

/// Runs one check on one parameter set.
pub fn run_check(ctx: &Context, id: &str, params: &ParamSet) -> Result<Vec<CheckResult>> {
    checks::dispatch(ctx, id, params)
}

/// Runs the selected checks (`"all"` for every one) on `params`, falling back to the
/// default grid for ids without an entry. Checks run in parallel; the output is
/// sorted by id, then parameters.
pub fn run_all<S: AsRef<str>>(ctx: &Context, selection: &[S], params: &ParamTable) -> Result<Vec<CheckResult>> {
    let ids = resolve_selection(selection)?;
    let mut jobs = Vec::new();
    for id in ids {
        let sets = match params.get(id) {
            Some(sets) => sets.clone(),
            None => default_params(id),
        };
        if sets.is_empty() {
            return Err(config(format!("empty parameter grid for '{id}'")));
        }
        jobs.extend(sets.into_iter().map(|p| (id, p)));
    }
    let nested: Vec<Result<Vec<CheckResult>>> =
        jobs.par_iter().map(|(id, p)| run_check(ctx, id, p)).collect();
    let mut out = Vec::new();
    for r in nested {
        out.extend(r?);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| cmp_params(&a.params, &b.params)));
    Ok(out)
}

/// Counts per status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub report_only: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inconclusive => s.inconclusive += 1,
                Status::ReportOnly => s.report_only += 1,
            }
        }
        s
    }
}
