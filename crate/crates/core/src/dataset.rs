//! Embedded reference dataset: the five small minimal polynomials, the 42-row
//! table of class numbers / signs / discriminant factorizations / group
//! structures for 11 ≤ n ≤ 995, the full n = 227 worked example, and the two
//! non-cyclic group structures. Big integers are decimal strings throughout,
//! matching the result-document conventions of the CLI layer.

use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::FactoredInteger;
use crate::polyz::IntPolynomial;

const EMBEDDED: &str = include_str!("../data/expected.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dataset {
    pub schema_version: u32,
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub example_227: Example227,
    pub noncyclic: Vec<NoncyclicRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: i64,
    /// Ascending-power coefficients as decimal strings.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2Row {
    pub n: i64,
    pub h: u64,
    /// "+" or "-".
    pub sign: String,
    /// [prime, exponent] pairs, decimal strings, ascending primes.
    pub factors: Vec<[String; 2]>,
    pub invariant_factors: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Example227 {
    pub n: i64,
    pub hilbert_coefficients: Vec<String>,
    pub ramanujan_coefficients: Vec<String>,
    pub delta_hilbert_sign: String,
    pub delta_hilbert_factors: Vec<[String; 2]>,
    pub delta_ramanujan_sign: String,
    pub delta_ramanujan_factors: Vec<[String; 2]>,
    pub quotient_sqrt_factors: Vec<[String; 2]>,
    pub dorman_magnitude_factors: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoncyclicRow {
    pub n: i64,
    pub invariant_factors: Vec<u64>,
}

pub fn parse_coefficients(coefficients: &[String]) -> Result<IntPolynomial> {
    let coeffs: std::result::Result<Vec<BigInt>, _> =
        coefficients.iter().map(|s| BigInt::from_str(s)).collect();
    Ok(IntPolynomial::from_coeffs(
        coeffs.map_err(|e| Error::Dataset(format!("bad coefficient: {e}")))?,
    ))
}

pub fn parse_factors(sign: &str, factors: &[[String; 2]]) -> Result<FactoredInteger> {
    let sign = match sign {
        "+" => 1i8,
        "-" => -1,
        other => return Err(Error::Dataset(format!("bad sign `{other}`"))),
    };
    let mut powers = Vec::with_capacity(factors.len());
    for [p, e] in factors {
        let p: u64 = p.parse().map_err(|e| Error::Dataset(format!("bad prime: {e}")))?;
        let e: u32 = e.parse().map_err(|e| Error::Dataset(format!("bad exponent: {e}")))?;
        powers.push((p, e));
    }
    Ok(FactoredInteger::from_prime_powers(sign, &powers))
}

impl Dataset {
    pub fn from_json(json: &str) -> Result<Self> {
        let ds: Dataset =
            serde_json::from_str(json).map_err(|e| Error::Dataset(e.to_string()))?;
        if ds.table2.len() != 42 {
            return Err(Error::Dataset(format!(
                "expected 42 table rows, found {}",
                ds.table2.len()
            )));
        }
        Ok(ds)
    }

    /// The dataset compiled into the binary.
    pub fn embedded() -> &'static Dataset {
        static CACHE: OnceLock<Dataset> = OnceLock::new();
        CACHE.get_or_init(|| Dataset::from_json(EMBEDDED).expect("embedded dataset"))
    }

    pub fn table2_row(&self, n: i64) -> Option<&Table2Row> {
        self.table2.iter().find(|r| r.n == n)
    }

    pub fn table1_polynomial(&self, n: i64) -> Option<Result<IntPolynomial>> {
        self.table1.iter().find(|r| r.n == n).map(|r| parse_coefficients(&r.coefficients))
    }

    pub fn noncyclic_row(&self, n: i64) -> Option<&NoncyclicRow> {
        self.noncyclic.iter().find(|r| r.n == n)
    }
}
