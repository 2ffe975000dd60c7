//! `rieszlab`: evaluate functions, run identity checks, scan grids.
//!
//! Exit codes: 0 clean, 1 at least one FAIL, 2 domain/range/precision error,
//! 64 usage or configuration error.

mod functions;
mod scan;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rieszlab_core::arithmetic::{build_sieve, DEFAULT_SIEVE_LIMIT};
use rieszlab_core::quadrature::{Integrator, DEFAULT_BUDGET};
use rieszlab_core::report::{self, format15, number, RunManifest};
use rieszlab_core::series::{SeriesConfig, ZeroTable, DEFAULT_TOL, ZEROS_ENV};
use rieszlab_core::verify::{self, Context, ParamSet, ParamTable, Summary};
use rieszlab_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "rieszlab", version, about = "Moebius series, the Riesz function and numerical identity checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Sieve limit for primes and the Moebius function.
    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_LIMIT)]
    sieve_limit: usize,
    /// Target truncation error of series evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Zeta zeros table (default: the embedded table).
    #[arg(long, global = true, env = ZEROS_ENV)]
    zeros: Option<PathBuf>,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write the CSV output here instead of stdout.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Integrand evaluations allowed per integral.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one named function.
    Eval(EvalArgs),
    /// Run identity checks and write a JSON report.
    Verify(VerifyArgs),
    /// Evaluate a check or function along a grid, as CSV.
    Scan(scan::ScanArgs),
    /// Scan riesz_core on a geometric grid and fit the decay exponent.
    Decay(scan::DecayArgs),
    /// List functions and checks.
    List,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    /// Function name (see `rieszlab list`).
    function: String,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long = "X")]
    big_x: Option<f64>,
}

impl EvalArgs {
    fn table(&self) -> BTreeMap<String, f64> {
        [
            ("x", self.x),
            ("a", self.a),
            ("s", self.s),
            ("w", self.w),
            ("r", self.r),
            ("z", self.z),
            ("X", self.big_x),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check ids, or `all`.
    #[arg(default_value = "all")]
    ids: Vec<String>,
    /// Parameter for one check, ID.NAME=VALUE; replaces that check's default grid
    /// by a single parameter set.
    #[arg(long = "set", value_name = "ID.NAME=VALUE")]
    sets: Vec<String>,
    /// Tolerance override, ID=TOL.
    #[arg(long = "tol-override", value_name = "ID=TOL")]
    tol_overrides: Vec<String>,
}

/// Run-time failure, already mapped to an exit code.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Data(_) => EXIT_USAGE,
            Error::Domain(_) | Error::Range(_) | Error::Precision(_) => EXIT_NUMERIC,
        };
        Failure { code, message: e.to_string() }
    }
}

pub(crate) fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    usage(format!("cannot write {}: {e}", path.display()))
}

/// Inputs shared by all subcommands.
pub(crate) struct Setup {
    pub global: Global,
    pub cfg: SeriesConfig,
    pub zeros: ZeroTable,
}

impl Setup {
    fn new(global: Global) -> Result<Self, Failure> {
        let sieve = build_sieve(global.sieve_limit)?;
        let cfg = SeriesConfig::new(Arc::new(sieve)).with_tol(global.tol)?;
        let zeros = ZeroTable::resolve(global.zeros.as_deref())?;
        Ok(Setup { global, cfg, zeros })
    }

    pub fn integrator(&self) -> Integrator {
        Integrator::with_budget(self.global.budget)
    }

    pub fn context(&self) -> Context {
        Context::new(self.cfg.clone(), Some(self.zeros.clone()), self.integrator())
    }

    pub fn manifest(&self, command: String) -> RunManifest {
        RunManifest {
            command,
            sieve_limit: self.global.sieve_limit,
            zeros_path: self.global.zeros.as_ref().map(|p| p.display().to_string()),
            budget: self.global.budget,
            ..Default::default()
        }
    }

    /// Writes `text` to `path`, or stdout.
    pub fn emit(&self, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|e| usage(format!("stdout: {e}")))
            }
        }
    }
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn eval(setup: &Setup, args: &EvalArgs) -> Result<u8, Failure> {
    let spec = functions::lookup(&args.function)
        .ok_or_else(|| usage(format!("unknown function '{}' (see `rieszlab list`)", args.function)))?;
    let table = args.table();
    let v = functions::evaluate(spec, &table, &setup.cfg, Some(&setup.zeros))?;
    if let Some(path) = &setup.global.json {
        let doc = json!({
            "function": spec.name,
            "args": table.iter().map(|(k, v)| (k.clone(), number(*v))).collect::<serde_json::Map<_, _>>(),
            "value": number(v.value),
            "error_bound": v.error_bound.map(number),
            "terms": v.terms,
        });
        setup.emit(Some(path), &report::render(&doc))?;
    }
    let shown: Vec<String> = table.iter().map(|(k, v)| format!("{k}={}", format15(*v))).collect();
    println!("{}({}) = {}", spec.name, shown.join(", "), format15(v.value));
    if let Some(e) = v.error_bound {
        println!("error_bound = {}", format15(e));
    }
    if let Some(t) = v.terms {
        println!("terms = {t}");
    }
    Ok(0)
}

pub(crate) fn parse_assignment(text: &str) -> Result<(&str, f64), Failure> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| usage(format!("expected KEY=VALUE, got '{text}'")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| usage(format!("'{value}' in '{text}' is not a number")))?;
    Ok((key.trim(), value))
}

fn verify(setup: &Setup, args: &VerifyArgs) -> Result<u8, Failure> {
    let mut ctx = setup.context();
    let mut manifest = setup.manifest(format!("verify {}", args.ids.join(" ")));
    for text in &args.tol_overrides {
        let (id, tol) = parse_assignment(text)?;
        ctx = ctx.with_tol_override(id, tol)?;
        manifest.tol_overrides.insert(id.to_string(), tol);
    }
    let mut params = ParamTable::new();
    for text in &args.sets {
        let (key, value) = parse_assignment(text)?;
        let (id, name) = key
            .split_once('.')
            .ok_or_else(|| usage(format!("expected ID.NAME=VALUE, got '{text}'")))?;
        if !verify::check_ids().contains(&id) {
            return Err(usage(format!("--set for unknown check '{id}'")));
        }
        let sets = params.entry(id.to_string()).or_insert_with(|| vec![ParamSet::new()]);
        sets[0].insert(name.to_string(), value);
    }
    manifest.params = params.clone();
    let results = verify::run_all(&ctx, &args.ids, &params)?;
    let summary = Summary::of(&results);
    let doc = report::build_report(&manifest, &results, &report::unix_timestamp());
    setup.emit(setup.global.json.as_ref(), &report::render(&doc))?;
    eprintln!(
        "pass {}  fail {}  inconclusive {}  report-only {}",
        summary.pass, summary.fail, summary.inconclusive, summary.report_only
    );
    Ok(if summary.fail > 0 { EXIT_FAIL } else { 0 })
}

fn list() -> Result<u8, Failure> {
    println!("functions:");
    for f in functions::FUNCTIONS {
        println!("  {} ({})", f.name, f.args.iter().map(|a| format!("--{a}")).collect::<Vec<_>>().join(" "));
    }
    println!("checks:");
    for m in verify::manifest() {
        println!("  {:<28} {:?}", m.id, m.comparison);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Command::List = cli.command {
        return list();
    }
    let setup = Setup::new(cli.global)?;
    match &cli.command {
        Command::Eval(a) => eval(&setup, a),
        Command::Verify(a) => verify(&setup, a),
        Command::Scan(a) => scan::scan(&setup, a, command_line()),
        Command::Decay(a) => scan::decay(&setup, a, command_line()),
        Command::List => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rieszlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
