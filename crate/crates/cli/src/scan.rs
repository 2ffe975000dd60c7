//! `scan` and `decay`: grids to CSV.

use std::collections::BTreeMap;

use clap::Args;
use serde_json::json;

use rieszlab_core::report::{self, format15};
use rieszlab_core::verify::{self, grid_points, ParamSet, ParamTable};

use crate::functions;
use crate::{usage, Failure, Setup};

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    /// Check id or function name.
    target: String,
    start: f64,
    stop: f64,
    points: usize,
    /// Geometric spacing (default linear).
    #[arg(long)]
    geometric: bool,
    /// Parameter to vary (default: the target's first parameter).
    #[arg(long)]
    param: Option<String>,
    /// Fixed parameter, NAME=VALUE.
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    fixed: Vec<String>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct DecayArgs {
    #[arg(long, default_value_t = 1.0)]
    start: f64,
    #[arg(long, default_value_t = 1e4)]
    stop: f64,
    #[arg(long, default_value_t = 40)]
    points: usize,
}

fn grid(start: f64, stop: f64, points: usize, geometric: bool) -> Result<Vec<f64>, Failure> {
    let spec: ParamSet = [
        ("start", start),
        ("stop", stop),
        ("points", points as f64),
        ("geometric", if geometric { 1.0 } else { 0.0 }),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(grid_points(&spec)?)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let csv_err = |e: csv::Error| usage(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn fixed_params(args: &ScanArgs) -> Result<BTreeMap<String, f64>, Failure> {
    args.fixed
        .iter()
        .map(|text| {
            let (k, v) = crate::parse_assignment(text)?;
            Ok((k.to_string(), v))
        })
        .collect()
}

pub fn scan(setup: &Setup, args: &ScanArgs, command: String) -> Result<u8, Failure> {
    let xs = grid(args.start, args.stop, args.points, args.geometric)?;
    let fixed = fixed_params(args)?;
    let text = if let Some(spec) = functions::lookup(&args.target) {
        let var = args.param.clone().unwrap_or_else(|| spec.args[0].to_string());
        let mut rows = Vec::new();
        for &x in &xs {
            let mut table = fixed.clone();
            table.insert(var.clone(), x);
            let v = functions::evaluate(spec, &table, &setup.cfg, Some(&setup.zeros))?;
            rows.push(vec![
                format15(x),
                format15(v.value),
                v.error_bound.map(format15).unwrap_or_default(),
            ]);
        }
        csv_text(&[var.as_str(), "value", "error_bound"], &rows)?
    } else if verify::check_ids().contains(&args.target.as_str()) {
        scan_check(setup, args, &xs, fixed, command)?
    } else {
        return Err(usage(format!("unknown scan target '{}' (see `rieszlab list`)", args.target)));
    };
    setup.emit(setup.global.csv.as_ref(), &text)?;
    Ok(0)
}

fn scan_check(
    setup: &Setup,
    args: &ScanArgs,
    xs: &[f64],
    fixed: BTreeMap<String, f64>,
    command: String,
) -> Result<String, Failure> {
    let id = args.target.as_str();
    let defaults = verify::default_params(id);
    let gridded = defaults.first().is_some_and(|p| p.contains_key("start"));
    let var = match (&args.param, gridded) {
        (Some(p), _) => p.clone(),
        (None, true) => "x".to_string(),
        (None, false) => {
            let keys: Vec<_> = defaults[0].keys().filter(|k| !fixed.contains_key(*k)).collect();
            match keys.as_slice() {
                [one] => (*one).clone(),
                _ => return Err(usage(format!("{id} has several parameters; choose one with --param"))),
            }
        }
    };
    let sets: Vec<ParamSet> = xs
        .iter()
        .map(|&x| {
            let mut p = fixed.clone();
            if gridded {
                p.extend([("start".into(), x), ("stop".into(), x), ("points".into(), 1.0)]);
            } else {
                p.insert(var.clone(), x);
            }
            p
        })
        .collect();
    let table: ParamTable = [(id.to_string(), sets)].into_iter().collect();
    let ctx = setup.context();
    let mut results = verify::run_all(&ctx, &[id], &table)?;
    let coord = |p: &ParamSet| p.get(if gridded { "start" } else { var.as_str() }).copied().unwrap_or(f64::NAN);
    results.sort_by(|a, b| coord(&a.params).total_cmp(&coord(&b.params)).then_with(|| a.id.cmp(&b.id)));
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                format15(coord(&r.params)),
                format15(r.lhs),
                format15(r.rhs),
                format15(r.abs_resid),
                format15(r.rel_resid),
                format15(r.lhs / r.rhs),
                r.status.as_str().to_string(),
            ]
        })
        .collect();
    if let Some(path) = &setup.global.json {
        let mut manifest = setup.manifest(command);
        manifest.params = table;
        setup.emit(Some(path), &report::render(&report::build_report(&manifest, &results, &report::unix_timestamp())))?;
    }
    csv_text(&["id", var.as_str(), "lhs", "rhs", "abs_resid", "rel_resid", "ratio", "status"], &rows)
}

pub fn decay(setup: &Setup, args: &DecayArgs, command: String) -> Result<u8, Failure> {
    let xs = grid(args.start, args.stop, args.points, true)?;
    let spec = functions::lookup("riesz_core").expect("registered");
    let mut rows = Vec::new();
    for &x in &xs {
        let table = [("x".to_string(), x)].into_iter().collect();
        let v = functions::evaluate(spec, &table, &setup.cfg, None)?;
        rows.push(vec![format15(x), format15(v.value), v.error_bound.map(format15).unwrap_or_default()]);
    }
    let params: ParamSet = [
        ("start", args.start),
        ("stop", args.stop),
        ("points", args.points as f64),
        ("geometric", 1.0),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let table: ParamTable = [("riesz_decay".to_string(), vec![params])].into_iter().collect();
    let results = verify::run_all(&setup.context(), &["riesz_decay"], &table)?;
    let fit = &results[0];
    eprintln!(
        "fitted slope {} (reference -0.75), {} sign changes, max |R| z^(3/4) = {}",
        format15(fit.lhs),
        fit.diagnostics.get("sign_changes").copied().unwrap_or(0.0),
        format15(fit.diagnostics.get("max_abs_times_z_3_4").copied().unwrap_or(f64::NAN)),
    );
    if let Some(path) = &setup.global.json {
        let mut manifest = setup.manifest(command);
        manifest.params = table;
        let mut doc = report::build_report(&manifest, &results, &report::unix_timestamp());
        doc["fit"] = json!({ "slope": report::number(fit.lhs) });
        setup.emit(Some(path), &report::render(&doc))?;
    }
    setup.emit(setup.global.csv.as_ref(), &csv_text(&["x", "value", "error_bound"], &rows)?)?;
    Ok(0)
}
