//! Acceptance suite. Prints one line per criterion:
//!
//!   criterion N: PASS|FAIL  <summary>
//!
//! Criteria known to be unattainable print FAIL with the measured reason; the
//! process only exits nonzero when a criterion's outcome differs from the
//! recorded expectation (see `EXPECTED_RED`), so a regression in either
//! direction is caught.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rieszlab_core::arithmetic::build_sieve;
use rieszlab_core::quadrature::Integrator;
use rieszlab_core::report::{build_report, render, RunManifest, TIMESTAMP_FIELD};
use rieszlab_core::series::{delta_exp, gram_h, SeriesConfig, ZeroTable};
use rieszlab_core::verify::{run_all, CheckResult, Context, ParamSet, ParamTable, Status};

/// Criteria whose targets cannot be met; each has an analysis in the README.
const EXPECTED_RED: &[u32] = &[3, 5];

struct Outcome {
    pass: bool,
    summary: String,
    /// Whether the measured behaviour matches the documented analysis.
    explained: bool,
}

fn ok(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary, explained: pass }
}

fn ctx(limit: usize) -> Context {
    let cfg = SeriesConfig::new(Arc::new(build_sieve(limit).expect("sieve")));
    Context::new(cfg, Some(ZeroTable::embedded().clone()), Integrator::default())
}

fn params(name: &str, values: &[f64]) -> Vec<ParamSet> {
    values.iter().map(|v| [(name.to_string(), *v)].into_iter().collect()).collect()
}

fn run(ctx: &Context, id: &str, sets: Vec<ParamSet>) -> Vec<CheckResult> {
    let table: ParamTable = [(id.to_string(), sets)].into_iter().collect();
    run_all(ctx, &[id], &table).expect("check runs")
}

fn run_defaults(ctx: &Context, id: &str) -> Vec<CheckResult> {
    run_all(ctx, &[id], &ParamTable::new()).expect("check runs")
}

fn statuses(results: &[CheckResult]) -> String {
    results
        .iter()
        .map(|r| {
            let p: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]={}", r.id, p.join(","), r.status.as_str())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn all_pass(results: &[CheckResult]) -> bool {
    !results.is_empty() && results.iter().all(|r| r.status == Status::Pass)
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ctx = ctx(1_000_000);
    let rs = run(&ctx, "gram_collapse", params("x", &[3.0, 10.0, 100.0, 1e6]));
    let t = start.elapsed();
    let worst = rs.iter().map(|r| r.rel_resid).fold(0.0, f64::max);
    ok(
        all_pass(&rs) && within(t, 1.0),
        format!("max rel residual {worst:.2e}, {:.2}s; {}", t.as_secs_f64(), statuses(&rs)),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let ctx = ctx(1_000_000);
    let rs = run_defaults(&ctx, "gram_error");
    let t = start.elapsed();
    ok(
        all_pass(&rs) && within(t, 10.0),
        format!("max |pi - H| log x/sqrt x = {:.4} (envelope 3), {:.2}s", rs[0].lhs, t.as_secs_f64()),
    )
}

fn criterion_3() -> Outcome {
    // The prime sums need the largest supported sieve to get close at small s.
    let start = Instant::now();
    let ctx = ctx(100_000_000);
    let rs = run(&ctx, "eq_1_4", params("s", &[1.5, 2.0, 3.0, 5.0]));
    let t = start.elapsed();
    let main: Vec<_> = rs.iter().filter(|r| r.id == "eq_1_4").collect();
    let others_pass = main.iter().filter(|r| r.params["s"] > 1.5).all(|r| r.status == Status::Pass);
    let quad_pass = rs.iter().filter(|r| r.id != "eq_1_4").all(|r| r.status == Status::Pass);
    let small = main.iter().find(|r| r.params["s"] == 1.5).expect("s = 1.5");
    let half_width = small.diagnostics["prime_zeta_tail_half_width"];
    let pass = all_pass(&rs) && within(t, 5.0);
    Outcome {
        pass,
        summary: format!(
            "{}; s=1.5 residual {:.2e} with prime-zeta tail half-width {half_width:.2e} at sieve 1e8 \
             (a 1e-9 decision needs a sieve near 1e13), {:.2}s",
            statuses(&rs),
            small.abs_resid,
            t.as_secs_f64()
        ),
        // s = 1.5 is undecidable at this sieve, everything else passes
        explained: others_pass && quad_pass && small.status == Status::Inconclusive && half_width > 1e-9,
    }
}

fn criterion_4() -> Outcome {
    let ctx = ctx(1_000_000);
    let forms = run(&ctx, "incgamma_forms", params("s", &[1.5, 2.0, 5.0]));
    let bound = run(&ctx, "eq_1_5", params("s", &[2.0, 3.0, 4.0, 5.0]));
    let trend = run_defaults(&ctx, "eq_1_5_trend");
    let max_ratio = bound
        .iter()
        .map(|r| r.diagnostics["ratio_to_ei"])
        .fold(0.0, f64::max);
    ok(
        all_pass(&forms) && all_pass(&bound) && all_pass(&trend),
        format!(
            "forms: {}; bound: max |residual|/|Ei| = {max_ratio:.3} (limit 10); trend: largest increase {:.3e}",
            statuses(&forms),
            trend[0].lhs
        ),
    )
}

fn criterion_5() -> Outcome {
    let ctx = ctx(1_000_000);
    let rs = run(&ctx, "prime_zeta_asymptotic", params("s", &[10.0, 20.0, 30.0]));
    let ratio = |s: f64| rs.iter().find(|r| r.params["s"] == s).expect("s").diagnostics["ratio"];
    let limit = 1.0 / gram_h(2.0, ctx.cfg()).expect("H(2)").value;
    let graded: Vec<_> = rs.iter().filter(|r| r.params["s"] <= 20.0).cloned().collect();
    Outcome {
        pass: all_pass(&graded),
        summary: format!(
            "ratio P(s)/series = {:.4} at s=10, {:.4} at s=20, {:.4} at s=30; it tends to 1/H(2) = {limit:.4}, not 1",
            ratio(10.0),
            ratio(20.0),
            ratio(30.0)
        ),
        // rising slowly towards 1/H(2) from below, far from 1
        explained: ratio(10.0) < ratio(20.0)
            && ratio(20.0) < ratio(30.0)
            && ratio(30.0) < limit
            && limit - ratio(30.0) < 0.02
            && (1.0 - ratio(20.0)) > 0.3,
    }
}

fn criterion_6() -> Outcome {
    let ctx = ctx(1_000_000);
    let osc = run_defaults(&ctx, "eq_2_2");
    let lap = run_defaults(&ctx, "eq_2_3");
    let evals = osc
        .iter()
        .map(|r| r.diagnostics["evaluations"])
        .chain(lap.iter().map(|r| r.diagnostics["integral_evaluations"]))
        .fold(0.0, f64::max);
    let worst = |rs: &[CheckResult]| rs.iter().map(|r| r.abs_resid).fold(0.0, f64::max);
    ok(
        all_pass(&osc) && all_pass(&lap) && evals <= 2e5,
        format!(
            "cosine transform max residual {:.2e} (tol 1e-6), Laplace side {:.2e} (tol 1e-8), at most {evals} evaluations",
            worst(&osc),
            worst(&lap)
        ),
    )
}

fn criterion_7() -> Outcome {
    let ctx = ctx(1_000_000);
    let rs = run_defaults(&ctx, "thm_2_1");
    let find = |x: f64, a: f64| rs.iter().find(|r| r.params["x"] == x && r.params["a"] == a).expect("point");
    let (p, q) = (find(2.0, 1.0), find(1.0, 2.0));
    let scaling = rs.iter().map(|r| r.diagnostics["scaling_residual"]).fold(0.0, f64::max);
    let cfg = ctx.cfg();
    let direct = (delta_exp(2.0, 1.0, cfg).unwrap().value - delta_exp(1.0, 2.0, cfg).unwrap().value).abs();
    let cross = (p.rhs - q.rhs).abs();
    ok(
        all_pass(&rs) && scaling == 0.0 && direct == 0.0 && cross <= 1e-9,
        format!(
            "max residual {:.2e} (tol 1e-7); scaling residual {scaling:.1e}; integral sides at (2,1) and (1,2) differ by {cross:.1e}",
            rs.iter().map(|r| r.abs_resid).fold(0.0, f64::max)
        ),
    )
}

fn criterion_8() -> Outcome {
    let ctx = ctx(1_000_000);
    let rs = run_defaults(&ctx, "thm_2_4");
    let audited = rs
        .iter()
        .filter(|r| r.id == "thm_2_4/series_vs_nested")
        .all(|r| r.notes.contains("stated form") && r.diagnostics.contains_key("stated_rhs_minus_nested"));
    let worst = |id: &str| rs.iter().filter(|r| r.id == id).map(|r| r.abs_resid).fold(0.0, f64::max);
    ok(
        all_pass(&rs) && rs.len() == 8 && audited,
        format!(
            "series vs iterated max {:.2e} (tol 1e-7), iterated vs closed max {:.2e} (tol 1e-9); stated-form deviation recorded: {audited}",
            worst("thm_2_4/series_vs_nested"),
            worst("thm_2_4/nested_vs_closed")
        ),
    )
}

fn criterion_9() -> Outcome {
    let ctx = ctx(1_000_000);
    let ids = ["thm_2_2", "thm_2_3", "riesz_decay", "eq_1_3", "zero_sum_pairing"];
    let rs = run_all(&ctx, &ids, &ParamTable::new()).expect("suite");
    let exploratory_ok = rs
        .iter()
        .filter(|r| r.id != "zero_sum_pairing")
        .all(|r| matches!(r.status, Status::ReportOnly | Status::Inconclusive));
    let pairing_ok = rs.iter().filter(|r| r.id == "zero_sum_pairing").all(|r| r.status == Status::Pass && r.lhs < 1e-13);
    let report = render(&build_report(&RunManifest::default(), &rs, "0"));
    let recorded = ["\"residual\"", "\"residual_2T\"", "\"slope\"", "\"best_fit\"", "\"best_fit_stated\"", "\"ratio\""]
        .iter()
        .all(|k| report.contains(k));
    let get = |id: &str, key: &str| rs.iter().find(|r| r.id == id).map(|r| r.diagnostics[key]).unwrap_or(f64::NAN);
    ok(
        exploratory_ok && pairing_ok && recorded,
        format!(
            "{} results, none FAIL; decay slope {:.3}; best-fit constant {:.6} (spread {:.1e}); \
             integral-equation multiple {:.6}; imaginary residue below 1e-13: {pairing_ok}",
            rs.len(),
            get("riesz_decay", "slope"),
            get("thm_2_3/fit", "best_fit"),
            get("thm_2_3/fit", "best_fit_spread"),
            get("thm_2_2", "integral_ratio"),
        ),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let ctx = ctx(1_000_000);
    let run_once = |stamp: &str| {
        let rs = run_all(&ctx, &["all"], &ParamTable::new()).expect("suite");
        let manifest = RunManifest {
            command: "verify all".into(),
            sieve_limit: 1_000_000,
            budget: ctx.integrator().budget,
            ..Default::default()
        };
        render(&build_report(&manifest, &rs, stamp))
    };
    let a = run_once("first");
    let first = start.elapsed();
    let b = run_once("second");
    let strip = |s: &str| s.lines().filter(|l| !l.contains(TIMESTAMP_FIELD)).map(str::to_owned).collect::<Vec<_>>();
    let same = strip(&a) == strip(&b);
    let doc: serde_json::Value = serde_json::from_str(&a).expect("report is JSON");
    let counts = doc["summary"].to_string();
    ok(
        same && within(first, 180.0),
        format!(
            "reports identical apart from the timestamp: {same}; full suite {:.2}s (limit 180s); summary {counts}",
            first.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let o = f();
        let expected_red = EXPECTED_RED.contains(&n);
        println!("criterion {n}: {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        let as_expected = if expected_red { !o.pass && o.explained } else { o.pass };
        if !as_expected {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria match their recorded expectations (known red: {EXPECTED_RED:?})");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
