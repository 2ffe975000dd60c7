//! Declared check registry: ids, comparisons, evaluator sets and default grids.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Comparison, ParamSet};

/// Bumped whenever a default grid or tolerance changes.
pub const GRID_VERSION: u32 = 1;

/// Numerical building blocks a check side may call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    Sieve,
    ZetaIntCache,
    PrimeCount,
    RiemannJ,
    PrimeSumPlogp,
    PrimeZeta,
    OmegaSeries,
    OmegaQuadrature,
    ZetaReal,
    GramSingle,
    GramDouble,
    IncGammaRaw,
    IncGammaFiniteSum,
    ExpIntegral,
    MobiusPowerSum,
    MobiusLaplaceSum,
    DeltaExp,
    LorentzSum,
    RieszCore,
    ZeroSum,
    Kummer,
    ErrorFunction,
    Quadrature,
    OscillatoryQuadrature,
}

/// Shared infrastructure that both sides may use without breaking independence.
pub const INFRASTRUCTURE: &[Evaluator] = &[Evaluator::Sieve, Evaluator::ZetaIntCache];

#[derive(Debug, Clone, Serialize)]
pub struct CheckManifest {
    /// Result id; sub-results of one computation use `parent/part`.
    pub id: &'static str,
    /// The selectable check producing this result.
    pub check: &'static str,
    pub comparison: Comparison,
    /// Declared tolerance; per-parameter exceptions are noted in `tol_note`.
    pub tol: f64,
    pub tol_note: &'static str,
    pub lhs: &'static [Evaluator],
    pub rhs: &'static [Evaluator],
    /// Non-infrastructure evaluators deliberately shared by both sides, with the reason.
    pub shared: &'static [Evaluator],
    pub shared_reason: &'static str,
}

use Comparison::*;
use Evaluator::*;

const fn entry(
    id: &'static str,
    check: &'static str,
    comparison: Comparison,
    tol: f64,
    lhs: &'static [Evaluator],
    rhs: &'static [Evaluator],
) -> CheckManifest {
    CheckManifest {
        id,
        check,
        comparison,
        tol,
        tol_note: "",
        lhs,
        rhs,
        shared: &[],
        shared_reason: "",
    }
}

const MANIFEST: &[CheckManifest] = &[
    entry("eq_1_3", "eq_1_3", Report, 0.0, &[PrimeSumPlogp, Sieve], &[MobiusPowerSum, Sieve]),
    entry("eq_1_4", "eq_1_4", Abs, 1e-9, &[ZetaReal, OmegaSeries], &[PrimeZeta, Sieve]),
    entry("eq_1_4/omega_quadrature", "eq_1_4", Abs, 1e-6, &[OmegaSeries, Sieve], &[OmegaQuadrature, PrimeCount, Sieve]),
    entry("eq_1_5", "eq_1_5", Bound, 0.0, &[PrimeZeta, IncGammaFiniteSum, Sieve, ZetaIntCache], &[ExpIntegral]),
    entry("eq_1_5_trend", "eq_1_5_trend", Bound, 0.0, &[PrimeZeta, IncGammaFiniteSum, Sieve, ZetaIntCache], &[]),
    entry("eq_2_2", "eq_2_2", Abs, 1e-6, &[DeltaExp, OscillatoryQuadrature, Sieve], &[LorentzSum, Sieve]),
    entry("eq_2_3", "eq_2_3", Abs, 1e-8, &[RieszCore, Quadrature, Sieve], &[LorentzSum, Sieve]),
    entry("gram_collapse", "gram_collapse", Rel, 1e-10, &[GramDouble, ZetaIntCache], &[GramSingle, ZetaIntCache]),
    entry("gram_error", "gram_error", Bound, 0.0, &[PrimeCount, GramSingle, Sieve, ZetaIntCache], &[]),
    entry("incgamma_forms", "incgamma_forms", Rel, 1e-12, &[IncGammaRaw, ZetaIntCache], &[IncGammaFiniteSum, ZetaIntCache]),
    entry("j_vs_gram", "j_vs_gram", Report, 0.0, &[RiemannJ, Sieve], &[GramSingle, ZetaIntCache]),
    CheckManifest {
        tol_note: "REPORT at s < 10; rel 0.05 at 10 <= s < 20; rel 0.01 at s >= 20",
        ..entry("prime_zeta_asymptotic", "prime_zeta_asymptotic", Rel, 0.05, &[PrimeZeta, Sieve], &[IncGammaRaw, ZetaIntCache])
    },
    entry("riesz_decay", "riesz_decay", Report, 0.0, &[RieszCore, Sieve], &[]),
    entry("thm_2_1", "thm_2_1", Abs, 1e-7, &[DeltaExp, Sieve], &[RieszCore, Quadrature, Sieve]),
    CheckManifest {
        shared: &[DeltaExp],
        shared_reason: "the integral equation feeds the series back into its own kernel; report only",
        ..entry("thm_2_2", "thm_2_2", Report, 0.0, &[DeltaExp, Sieve], &[ZeroSum, DeltaExp, OscillatoryQuadrature, Sieve])
    },
    entry("thm_2_3", "thm_2_3", Report, 0.0, &[DeltaExp, ZeroSum, Sieve], &[RieszCore, Kummer, Quadrature, Sieve]),
    entry("thm_2_3/fit", "thm_2_3", Report, 0.0, &[DeltaExp, ZeroSum, Sieve], &[RieszCore, Kummer, Quadrature, Sieve]),
    entry("thm_2_4/series_vs_nested", "thm_2_4", Abs, 1e-7, &[MobiusLaplaceSum, Sieve], &[RieszCore, Quadrature, Sieve]),
    CheckManifest {
        shared: &[RieszCore, Quadrature],
        shared_reason: "both sides integrate the same Riesz series; the comparison isolates the inner kernel (quadrature versus the error-function closed form)",
        ..entry("thm_2_4/nested_vs_closed", "thm_2_4", Abs, 1e-9, &[RieszCore, Quadrature, Sieve], &[RieszCore, Quadrature, ErrorFunction, Sieve])
    },
    entry("zero_sum_pairing", "zero_sum_pairing", Bound, 0.0, &[ZeroSum], &[]),
];

/// Every declared result kind.
pub fn manifest() -> &'static [CheckManifest] {
    MANIFEST
}

/// Selectable check ids, sorted.
pub fn check_ids() -> &'static [&'static str] {
    &[
        "eq_1_3",
        "eq_1_4",
        "eq_1_5",
        "eq_1_5_trend",
        "eq_2_2",
        "eq_2_3",
        "gram_collapse",
        "gram_error",
        "incgamma_forms",
        "j_vs_gram",
        "prime_zeta_asymptotic",
        "riesz_decay",
        "thm_2_1",
        "thm_2_2",
        "thm_2_3",
        "thm_2_4",
        "zero_sum_pairing",
    ]
}

pub(crate) fn lookup(id: &str) -> &'static CheckManifest {
    MANIFEST.iter().find(|m| m.id == id).expect("declared result id")
}

fn set(pairs: &[(&str, f64)]) -> ParamSet {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>()
}

fn each(name: &str, values: &[f64]) -> Vec<ParamSet> {
    values.iter().map(|v| set(&[(name, *v)])).collect()
}

fn grid(start: f64, stop: f64, points: f64, geometric: bool) -> Vec<ParamSet> {
    vec![set(&[
        ("start", start),
        ("stop", stop),
        ("points", points),
        ("geometric", if geometric { 1.0 } else { 0.0 }),
    ])]
}

fn pairs(a: &str, b: &str, values: &[(f64, f64)]) -> Vec<ParamSet> {
    values.iter().map(|(x, y)| set(&[(a, *x), (b, *y)])).collect()
}

/// The versioned default parameter grid of a selectable check.
pub fn default_params(check: &str) -> Vec<ParamSet> {
    let e = std::f64::consts::E;
    let lorentz_grid = [(1.0, 1.0), (2.0, 0.5), (0.2, 5.0), (1.0, 3.0), (3.0, 1.0)];
    match check {
        "eq_1_3" => each("X", &[10.0, 100.0, 1e3, 1e4, 1e5, 1e6]),
        "eq_1_4" => each("s", &[1.5, 2.0, 3.0, 5.0, 10.0]),
        "eq_1_5" => each("s", &[1.5, 2.0, 3.0, 4.0, 5.0, 10.0, 20.0, 30.0]),
        "eq_1_5_trend" => grid(2.0, 5.0, 4.0, false),
        "eq_2_2" | "eq_2_3" => pairs("a", "w", &lorentz_grid),
        "gram_collapse" => each("x", &[2.5, 3.0, 4.0, 10.0, 100.0, 1e6]),
        "gram_error" => grid(1e3, 1e6, 4.0, true),
        "incgamma_forms" => each("s", &[1.5, 2.0, 5.0]),
        "j_vs_gram" => each("x", &[10.0, 100.0, 1e3, 1e4, 1e5, 1e6]),
        "prime_zeta_asymptotic" => each("s", &[5.0, 10.0, 20.0]),
        "riesz_decay" => grid(10.0, 1e4, 40.0, true),
        "thm_2_1" => pairs("x", "a", &[(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (0.5, 3.0)]),
        "thm_2_2" => pairs("x", "T", &[(2.0, 50.0), (5.0, 50.0), (5.0, 100.0), (10.0, 50.0)]),
        "thm_2_3" => grid(2.0, 10.0, 5.0, false),
        "thm_2_4" => pairs("X", "r", &[(e, 1.0), (10.0, 1.0), (e, 2.0), (10.0, 2.0)]),
        "zero_sum_pairing" => each("x", &[2.0, 5.0, 10.0]),
        _ => Vec::new(),
    }
}
