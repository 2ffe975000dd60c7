//! JSON report assembly and 15-significant-digit number formatting.
//!
//! Report layout (`"schema": 1`):
//!
//! ```text
//! {
//!   "schema": 1,
//!   "header": { "run": RunManifest, "versions": {...}, "grid_version": n,
//!               "sieve_limit": n, "generated_at": "..." },
//!   "results": [ CheckResult, ... ],
//!   "summary": { "pass": n, "fail": n, "inconclusive": n, "report_only": n }
//! }
//! ```
//!
//! Numbers carry at most 15 significant digits; NaN and infinities are written as
//! `null`. Keys are sorted, so identical runs give identical text apart from
//! `header.generated_at`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::verify::{CheckResult, ParamTable, Summary, GRID_VERSION};

pub const SCHEMA_VERSION: u32 = 1;

/// The field excluded from the determinism contract.
pub const TIMESTAMP_FIELD: &str = "generated_at";

/// What was run and with which settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: ParamTable,
    pub tol_overrides: BTreeMap<String, f64>,
    pub sieve_limit: usize,
    /// `None` when the embedded table was used.
    pub zeros_path: Option<String>,
    pub budget: usize,
}

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// `x` as a JSON number with 15 significant digits, or null when not finite.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(round15(x))
    } else {
        Value::Null
    }
}

/// Like C's `%.15g`: fixed notation for moderate exponents, scientific otherwise,
/// trailing zeros dropped. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn format15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Replaces every float in `v` by its 15-digit form (non-finite floats cannot occur
/// in a `Value`; they are mapped by [`number`] beforehand).
fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().expect("float")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn float_map(m: &BTreeMap<String, f64>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), number(*v))).collect::<Map<_, _>>())
}

pub fn result_value(r: &CheckResult) -> Value {
    json!({
        "id": r.id,
        "params": float_map(&r.params),
        "lhs": number(r.lhs),
        "rhs": number(r.rhs),
        "abs_resid": number(r.abs_resid),
        "rel_resid": number(r.rel_resid),
        "tol": number(r.tol),
        "comparison": r.comparison,
        "status": r.status,
        "notes": r.notes,
        "diagnostics": float_map(&r.diagnostics),
    })
}

/// The complete report. `timestamp` goes into `header.generated_at`.
pub fn build_report(run: &RunManifest, results: &[CheckResult], timestamp: &str) -> Value {
    let run_value = serde_json::to_value(run).expect("manifest serializes");
    json!({
        "schema": SCHEMA_VERSION,
        "header": {
            "run": round_value(run_value),
            "versions": {
                "rieszlab": env!("CARGO_PKG_VERSION"),
            },
            "grid_version": GRID_VERSION,
            "sieve_limit": run.sieve_limit,
            TIMESTAMP_FIELD: timestamp,
        },
        "results": results.iter().map(result_value).collect::<Vec<_>>(),
        "summary": Summary::of(results),
    })
}

/// Pretty-printed report text with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Seconds since the Unix epoch, as text.
pub fn unix_timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{secs}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{Comparison, Status};
    use proptest::prelude::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(format15(0.1 + 0.2), "0.3");
        assert_eq!(format15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(format15(5.333333333333333), "5.33333333333333");
        assert_eq!(format15(1e20), "1e+20");
        assert_eq!(format15(-2.5e-7), "-2.5e-07");
        assert_eq!(format15(123456.0), "123456");
        assert_eq!(format15(f64::NAN), "nan");
        assert_eq!(round15(0.1 + 0.2), 0.3);
    }

    fn sample(lhs: f64) -> CheckResult {
        CheckResult {
            id: "gram_collapse".into(),
            params: [("x".to_string(), 10.0)].into_iter().collect(),
            lhs,
            rhs: 1.0,
            abs_resid: f64::NAN,
            rel_resid: 0.0,
            tol: 1e-10,
            comparison: Comparison::Rel,
            status: Status::Pass,
            notes: String::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    #[test]
    fn report_shape() {
        let run = RunManifest { command: "verify".into(), sieve_limit: 1000, ..Default::default() };
        let r = build_report(&run, &[sample(1.0 / 3.0)], "0");
        assert_eq!(r["schema"], 1);
        assert_eq!(r["header"]["sieve_limit"], 1000);
        assert_eq!(r["results"][0]["abs_resid"], Value::Null);
        assert_eq!(r["results"][0]["lhs"].as_f64(), Some(0.333333333333333));
        assert_eq!(r["results"][0]["status"], "PASS");
        assert_eq!(r["summary"]["pass"], 1);
        let a = render(&build_report(&run, &[sample(0.5)], "1"));
        let b = render(&build_report(&run, &[sample(0.5)], "2"));
        let strip = |s: &str| s.lines().filter(|l| !l.contains(TIMESTAMP_FIELD)).collect::<Vec<_>>().join("\n");
        assert_eq!(strip(&a), strip(&b));
    }

    proptest! {
        #[test]
        fn format15_round_trips_to_fifteen_digits(x in proptest::num::f64::NORMAL) {
            let printed: f64 = format15(x).parse().unwrap();
            prop_assert_eq!(printed, round15(x));
            prop_assert!(((printed - x) / x).abs() <= 5e-15);
        }
    }
}
