//! Named functions reachable from `eval` and `scan`.

use std::collections::BTreeMap;

use rieszlab_core::arithmetic::{
    omega_small, prime_count, prime_sum_plogp, prime_zeta, riemann_j,
};
use rieszlab_core::series::{
    delta_exp, gram_h, gram_h_double, hprime, incgamma_series, lorentz_sum, mobius_laplace_sum,
    mobius_power_sum, mobius_reciprocal_shift, riesz_core, zero_sum_f, Estimate, IncGammaForm,
    SeriesConfig, ZeroTable,
};
use rieszlab_core::specfun::{dawson, erf, erfcx, expint_ei_neg, kummer_1f1_half, zeta_real};
use rieszlab_core::{Error, Result};

/// A function name with its argument names; the first argument is the one `scan` varies.
pub struct FunctionSpec {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

const fn f(name: &'static str, args: &'static [&'static str]) -> FunctionSpec {
    FunctionSpec { name, args }
}

pub const FUNCTIONS: &[FunctionSpec] = &[
    f("dawson", &["x"]),
    f("delta_exp", &["x", "a"]),
    f("erf", &["x"]),
    f("erfcx", &["x"]),
    f("expint_ei_neg", &["x"]),
    f("gram_h", &["x"]),
    f("gram_h_double", &["x"]),
    f("hprime", &["x"]),
    f("incgamma_finite", &["s"]),
    f("incgamma_raw", &["s"]),
    f("kummer_1f1_half", &["z"]),
    f("lorentz_sum", &["a", "w"]),
    f("mobius_laplace_sum", &["X", "r"]),
    f("mobius_power_sum", &["X"]),
    f("mobius_reciprocal_shift", &["r"]),
    f("omega_small", &["s"]),
    f("prime_count", &["x"]),
    f("prime_sum_plogp", &["x"]),
    f("prime_zeta", &["s"]),
    f("riemann_j", &["x"]),
    f("riesz_core", &["x"]),
    f("zero_sum_f", &["x"]),
    f("zeta", &["s"]),
];

/// Accepts `gram_H` as a spelling of `gram_h`.
pub fn lookup(name: &str) -> Option<&'static FunctionSpec> {
    let name = if name == "gram_H" { "gram_h" } else { name };
    FUNCTIONS.iter().find(|s| s.name == name)
}

/// A value, with the truncation bound and term count when the evaluator has them.
#[derive(Debug, Clone, Copy)]
pub struct Value {
    pub value: f64,
    pub error_bound: Option<f64>,
    pub terms: Option<usize>,
}

impl From<Estimate> for Value {
    fn from(e: Estimate) -> Self {
        Value { value: e.value, error_bound: Some(e.error_bound), terms: Some(e.terms) }
    }
}

fn exact(value: f64) -> Value {
    Value { value, error_bound: None, terms: None }
}

pub fn evaluate(
    spec: &FunctionSpec,
    args: &BTreeMap<String, f64>,
    cfg: &SeriesConfig,
    zeros: Option<&ZeroTable>,
) -> Result<Value> {
    let get = |name: &str| {
        args.get(name)
            .copied()
            .ok_or_else(|| Error::Config(format!("{} needs --{name}", spec.name)))
    };
    for key in args.keys() {
        if !spec.args.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "{} takes {}; got unexpected '{key}'",
                spec.name,
                spec.args.join(", ")
            )));
        }
    }
    let sieve = cfg.sieve();
    Ok(match spec.name {
        "dawson" => exact(dawson(get("x")?)),
        "delta_exp" => delta_exp(get("x")?, get("a")?, cfg)?.into(),
        "erf" => exact(erf(get("x")?)),
        "erfcx" => exact(erfcx(get("x")?)),
        "expint_ei_neg" => exact(expint_ei_neg(get("x")?)?),
        "gram_h" => gram_h(get("x")?, cfg)?.into(),
        "gram_h_double" => gram_h_double(get("x")?, cfg)?.into(),
        "hprime" => hprime(get("x")?, cfg)?.into(),
        "incgamma_finite" => incgamma_series(get("s")?, IncGammaForm::FiniteSum, cfg)?.into(),
        "incgamma_raw" => incgamma_series(get("s")?, IncGammaForm::Raw, cfg)?.into(),
        "kummer_1f1_half" => exact(kummer_1f1_half(get("z")?)?),
        "lorentz_sum" => lorentz_sum(get("a")?, get("w")?, cfg)?.into(),
        "mobius_laplace_sum" => mobius_laplace_sum(get("X")?, get("r")?, cfg)?.into(),
        "mobius_power_sum" => mobius_power_sum(get("X")?, cfg)?.into(),
        "mobius_reciprocal_shift" => mobius_reciprocal_shift(get("r")?, cfg)?.into(),
        "omega_small" => omega_small(get("s")?, cfg)?.into(),
        "prime_count" => exact(prime_count(get("x")?, sieve)? as f64),
        "prime_sum_plogp" => exact(prime_sum_plogp(get("x")?, sieve)?),
        "prime_zeta" => prime_zeta(get("s")?, cfg)?.into(),
        "riemann_j" => exact(riemann_j(get("x")?, sieve)?),
        "riesz_core" => riesz_core(get("x")?, cfg)?.into(),
        "zero_sum_f" => {
            let table = zeros.ok_or_else(|| Error::Data("no zeros table loaded".into()))?;
            let z = zero_sum_f(get("x")?, table)?;
            Value { value: z.value, error_bound: None, terms: Some(table.len()) }
        }
        "zeta" => exact(zeta_real(get("s")?)?),
        other => return Err(Error::Config(format!("unknown function '{other}'"))),
    })
}
