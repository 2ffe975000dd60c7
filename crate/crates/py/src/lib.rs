//! Python bindings: series evaluators, special functions and the check runner.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rieszlab_core::arithmetic::{self, DEFAULT_SIEVE_LIMIT};
use rieszlab_core::quadrature::{Integrator, DEFAULT_BUDGET};
use rieszlab_core::report::{build_report, render, unix_timestamp, RunManifest};
use rieszlab_core::series::{self as core_series, IncGammaForm, SeriesConfig, ZeroTable, DEFAULT_TOL};
use rieszlab_core::specfun;
use rieszlab_core::verify::{self, Context, ParamTable};
use rieszlab_core::Error;

create_exception!(rieszlab, RieszlabError, pyo3::exceptions::PyException);
create_exception!(rieszlab, ConfigError, RieszlabError);
create_exception!(rieszlab, DomainError, RieszlabError);
create_exception!(rieszlab, PrecisionError, RieszlabError);
create_exception!(rieszlab, DataError, RieszlabError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Config(_) => ConfigError::new_err(msg),
        Error::Domain(_) | Error::Range(_) => DomainError::new_err(msg),
        Error::Precision(_) => PrecisionError::new_err(msg),
        Error::Data(_) => DataError::new_err(msg),
    }
}

/// A series value with its truncation bound.
#[pyclass(frozen, skip_from_py_object, module = "rieszlab")]
#[derive(Clone, Copy)]
struct Estimate {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    error_bound: f64,
    #[pyo3(get)]
    terms: usize,
}

#[pymethods]
impl Estimate {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("Estimate(value={:e}, error_bound={:e}, terms={})", self.value, self.error_bound, self.terms)
    }
}

impl From<core_series::Estimate> for Estimate {
    fn from(e: core_series::Estimate) -> Self {
        Estimate { value: e.value, error_bound: e.error_bound, terms: e.terms }
    }
}

/// Sieve tables plus the series truncation policy. Building one sieves up to
/// `sieve_limit`; reuse it across calls.
#[pyclass(frozen, module = "rieszlab")]
struct Series {
    cfg: SeriesConfig,
}

type Est = PyResult<Estimate>;

#[pymethods]
impl Series {
    #[new]
    #[pyo3(signature = (sieve_limit = DEFAULT_SIEVE_LIMIT, tol = DEFAULT_TOL))]
    fn new(py: Python<'_>, sieve_limit: usize, tol: f64) -> PyResult<Self> {
        let sieve = py.detach(|| arithmetic::build_sieve(sieve_limit)).map_err(to_py)?;
        let cfg = SeriesConfig::new(Arc::new(sieve)).with_tol(tol).map_err(to_py)?;
        Ok(Series { cfg })
    }

    #[getter]
    fn sieve_limit(&self) -> usize {
        self.cfg.sieve().limit()
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.cfg.tol()
    }

    /// The same tables with another tolerance.
    fn with_tol(&self, tol: f64) -> PyResult<Self> {
        Ok(Series { cfg: self.cfg.with_tol(tol).map_err(to_py)? })
    }

    fn gram_h(&self, x: f64) -> Est {
        Ok(core_series::gram_h(x, &self.cfg).map_err(to_py)?.into())
    }

    fn gram_h_double(&self, x: f64) -> Est {
        Ok(core_series::gram_h_double(x, &self.cfg).map_err(to_py)?.into())
    }

    fn hprime(&self, x: f64) -> Est {
        Ok(core_series::hprime(x, &self.cfg).map_err(to_py)?.into())
    }

    fn riesz_core(&self, x: f64) -> Est {
        Ok(core_series::riesz_core(x, &self.cfg).map_err(to_py)?.into())
    }

    #[pyo3(signature = (x, a = 1.0))]
    fn delta_exp(&self, x: f64, a: f64) -> Est {
        Ok(core_series::delta_exp(x, a, &self.cfg).map_err(to_py)?.into())
    }

    fn lorentz_sum(&self, a: f64, w: f64) -> Est {
        Ok(core_series::lorentz_sum(a, w, &self.cfg).map_err(to_py)?.into())
    }

    fn mobius_power_sum(&self, big_x: f64) -> Est {
        Ok(core_series::mobius_power_sum(big_x, &self.cfg).map_err(to_py)?.into())
    }

    fn mobius_laplace_sum(&self, big_x: f64, r: f64) -> Est {
        Ok(core_series::mobius_laplace_sum(big_x, r, &self.cfg).map_err(to_py)?.into())
    }

    /// `form` is "raw" or "finite".
    #[pyo3(signature = (s, form = "finite"))]
    fn incgamma_series(&self, s: f64, form: &str) -> Est {
        let form = match form {
            "raw" => IncGammaForm::Raw,
            "finite" => IncGammaForm::FiniteSum,
            other => return Err(PyValueError::new_err(format!("form must be 'raw' or 'finite', got '{other}'"))),
        };
        Ok(core_series::incgamma_series(s, form, &self.cfg).map_err(to_py)?.into())
    }

    fn prime_zeta(&self, s: f64) -> Est {
        Ok(arithmetic::prime_zeta(s, &self.cfg).map_err(to_py)?.into())
    }

    fn omega_small(&self, s: f64) -> Est {
        Ok(arithmetic::omega_small(s, &self.cfg).map_err(to_py)?.into())
    }

    fn prime_count(&self, x: f64) -> PyResult<usize> {
        arithmetic::prime_count(x, self.cfg.sieve()).map_err(to_py)
    }

    fn riemann_j(&self, x: f64) -> PyResult<f64> {
        arithmetic::riemann_j(x, self.cfg.sieve()).map_err(to_py)
    }

    fn prime_sum_plogp(&self, x: f64) -> PyResult<f64> {
        arithmetic::prime_sum_plogp(x, self.cfg.sieve()).map_err(to_py)
    }

    /// Runs checks and returns the JSON report as text.
    #[pyo3(signature = (ids = vec!["all".to_string()], zeros_path = None, budget = DEFAULT_BUDGET))]
    fn verify(&self, py: Python<'_>, ids: Vec<String>, zeros_path: Option<String>, budget: usize) -> PyResult<String> {
        let zeros = ZeroTable::resolve(zeros_path.as_deref().map(std::path::Path::new)).map_err(to_py)?;
        let ctx = Context::new(self.cfg.clone(), Some(zeros), Integrator::with_budget(budget));
        let results = py
            .detach(|| verify::run_all(&ctx, &ids, &ParamTable::new()))
            .map_err(to_py)?;
        let manifest = RunManifest {
            command: format!("verify {}", ids.join(" ")),
            sieve_limit: self.cfg.sieve().limit(),
            zeros_path,
            budget,
            ..Default::default()
        };
        Ok(render(&build_report(&manifest, &results, &unix_timestamp())))
    }
}

/// f(x) over the embedded zeta zeros (or those in `zeros_path`).
#[pyfunction]
#[pyo3(signature = (x, zeros_path = None))]
fn zero_sum_f(x: f64, zeros_path: Option<String>) -> PyResult<f64> {
    let table = ZeroTable::resolve(zeros_path.as_deref().map(std::path::Path::new)).map_err(to_py)?;
    Ok(core_series::zero_sum_f(x, &table).map_err(to_py)?.value)
}

#[pyfunction]
fn zeta(s: f64) -> PyResult<f64> {
    specfun::zeta_real(s).map_err(to_py)
}

#[pyfunction]
fn erf(x: f64) -> f64 {
    specfun::erf(x)
}

#[pyfunction]
fn erfcx(x: f64) -> f64 {
    specfun::erfcx(x)
}

#[pyfunction]
fn dawson(x: f64) -> f64 {
    specfun::dawson(x)
}

#[pyfunction]
fn expint_ei_neg(x: f64) -> PyResult<f64> {
    specfun::expint_ei_neg(x).map_err(to_py)
}

#[pyfunction]
fn kummer_1f1_half(z: f64) -> PyResult<f64> {
    specfun::kummer_1f1_half(z).map_err(to_py)
}

#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    verify::check_ids().to_vec()
}

#[pymodule]
fn rieszlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Estimate>()?;
    m.add_class::<Series>()?;
    for f in [
        wrap_pyfunction!(zero_sum_f, m)?,
        wrap_pyfunction!(zeta, m)?,
        wrap_pyfunction!(erf, m)?,
        wrap_pyfunction!(erfcx, m)?,
        wrap_pyfunction!(dawson, m)?,
        wrap_pyfunction!(expint_ei_neg, m)?,
        wrap_pyfunction!(kummer_1f1_half, m)?,
        wrap_pyfunction!(check_ids, m)?,
    ] {
        m.add_function(f)?;
    }
    m.add("RieszlabError", py.get_type::<RieszlabError>())?;
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("PrecisionError", py.get_type::<PrecisionError>())?;
    m.add("DataError", py.get_type::<DataError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
