//! Tabulated nontrivial zeta zeros and the zero sum
//! f(x) = (pi/2) sum_rho x^{-rho} / (cos(pi rho/2) zeta'(rho)).

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::{zeta_complex, zeta_prime, ComplexValue};
use crate::sum::Neumaier;

/// Environment variable overriding the zeros file.
pub const ZEROS_ENV: &str = "RIESZLAB_ZEROS";

const EMBEDDED: &str = include_str!("../../data/zeta_zeros.txt");
const MIN_DIGITS: u32 = 12;
const ZERO_CHECK: f64 = 1e-8;
/// Largest imaginary part tolerated after pairing each zero with its conjugate.
pub const IMAG_RESIDUE_MAX: f64 = 1e-13;

/// A zero 1/2 + i t on the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaZero {
    pub t: f64,
    /// Decimal digits after the point in the source text.
    pub source_digits: u32,
}

impl ZetaZero {
    pub fn rho(&self) -> ComplexValue {
        ComplexValue::new(0.5, self.t)
    }
}

/// Validated, strictly increasing table of zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroTable {
    zeros: Vec<ZetaZero>,
}

fn data_err(msg: String) -> Error {
    Error::Data(msg)
}

impl ZeroTable {
    /// Parses the text format (one decimal per line, '#' comments) and checks
    /// every entry against |zeta(1/2 + i t)| < 1e-8.
    pub fn parse(text: &str) -> Result<Self> {
        let mut zeros: Vec<ZetaZero> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let t: f64 = line
                .parse()
                .map_err(|_| data_err(format!("line {}: '{line}' is not a number", lineno + 1)))?;
            let source_digits = line.split_once('.').map_or(0, |(_, f)| f.len() as u32);
            if !(t > 0.0) || !t.is_finite() {
                return Err(data_err(format!("line {}: zero ordinate {t} must be positive", lineno + 1)));
            }
            if source_digits < MIN_DIGITS {
                return Err(data_err(format!(
                    "line {}: {source_digits} decimals given, at least {MIN_DIGITS} required",
                    lineno + 1
                )));
            }
            if let Some(prev) = zeros.last() {
                if t <= prev.t {
                    return Err(data_err(format!("line {}: ordinates must increase", lineno + 1)));
                }
            }
            let z = ZetaZero { t, source_digits };
            let residual = zeta_complex(z.rho())
                .map_err(|e| data_err(format!("line {}: {e}", lineno + 1)))?
                .norm();
            if !(residual < ZERO_CHECK) {
                return Err(data_err(format!(
                    "line {}: |zeta(1/2 + {t} i)| = {residual:.3e} is not a zero",
                    lineno + 1
                )));
            }
            zeros.push(z);
        }
        if zeros.is_empty() {
            return Err(data_err("zeros table is empty".into()));
        }
        Ok(ZeroTable { zeros })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The table shipped with the library (first 30 zeros).
    pub fn embedded() -> &'static ZeroTable {
        static TABLE: OnceLock<ZeroTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::parse(EMBEDDED).expect("embedded zeros table is valid"))
    }

    /// `path` if given, else the file named by `RIESZLAB_ZEROS`, else the embedded table.
    pub fn resolve(path: Option<&Path>) -> Result<ZeroTable> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(ZEROS_ENV) {
                Some(p) => Self::load(p),
                None => Ok(Self::embedded().clone()),
            },
        }
    }

    pub fn zeros(&self) -> &[ZetaZero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// The zero sum with the imaginary part left over after conjugate pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSum {
    pub value: f64,
    pub imag_residue: f64,
    /// |term| of the last tabulated zero, a proxy for the truncation error.
    pub last_term: f64,
}

fn term(x: f64, rho: ComplexValue) -> Result<ComplexValue> {
    let x_pow = (-rho * x.ln()).exp();
    let cos = (rho * (PI / 2.0)).cos();
    Ok(x_pow / (cos * zeta_prime(rho)?) * (PI / 2.0))
}

/// Terms (pi/2) x^{-rho}/(cos(pi rho/2) zeta'(rho)) for the tabulated zeros
/// (upper half plane only).
pub fn zero_sum_terms(x: f64, zeros: &ZeroTable) -> Result<Vec<ComplexValue>> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(domain(format!("zero_sum: x = {x} must be finite and > 1")));
    }
    zeros.zeros().iter().map(|z| term(x, z.rho())).collect()
}

/// f(x) summed over the tabulated zeros and their conjugates.
pub fn zero_sum_f(x: f64, zeros: &ZeroTable) -> Result<ZeroSum> {
    let sum = zero_sum_paired(x, zeros)?;
    if !(sum.imag_residue < IMAG_RESIDUE_MAX) {
        return Err(Error::Precision(format!(
            "zero_sum_f({x}): imaginary residue {:.3e} after conjugate pairing",
            sum.imag_residue
        )));
    }
    Ok(sum)
}

/// As [`zero_sum_f`] but without rejecting a large imaginary residue.
pub fn zero_sum_paired(x: f64, zeros: &ZeroTable) -> Result<ZeroSum> {
    let upper = zero_sum_terms(x, zeros)?;
    let mut re = Neumaier::new();
    let mut im = Neumaier::new();
    // Smallest terms first.
    for (z, t) in zeros.zeros().iter().zip(&upper).rev() {
        let conj = term(x, z.rho().conj())?;
        re.add(t.re);
        re.add(conj.re);
        im.add(t.im);
        im.add(conj.im);
    }
    let imag_residue = im.value().abs();
    Ok(ZeroSum {
        value: re.value(),
        imag_residue,
        last_term: upper.last().map_or(0.0, |t| t.norm()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_loads() {
        let t = ZeroTable::embedded();
        assert_eq!(t.len(), 30);
        assert!((t.zeros()[0].t - 14.134725141734693).abs() < 1e-12);
    }

    #[test]
    fn parse_rejects_bad_tables() {
        assert!(matches!(ZeroTable::parse("# nothing\n"), Err(Error::Data(_))));
        assert!(ZeroTable::parse("14.1347251417").is_err());
        assert!(ZeroTable::parse("14.134725141735\n14.134725141735").is_err());
        // Right digits, wrong value.
        assert!(ZeroTable::parse("15.000000000000").is_err());
        assert!(ZeroTable::parse("14.134725141734693790\n21.022039638771554993\n").is_ok());
    }

    #[test]
    fn zero_sum_small_and_real() {
        let t = ZeroTable::embedded();
        let f = zero_sum_f(2.0, t).unwrap();
        assert!(f.value.abs() < 1e-8);
        for x in [2.0, 5.0, 10.0] {
            assert!(zero_sum_f(x, t).unwrap().imag_residue < 1e-13);
        }
    }

    #[test]
    fn terms_decrease() {
        let terms = zero_sum_terms(5.0, ZeroTable::embedded()).unwrap();
        for w in terms[..10].windows(2) {
            assert!(w[1].norm() < w[0].norm());
        }
    }
}
