//! On-disk / wire document schema. Big integers travel as decimal strings so
//! nothing is lost regardless of consumer; coefficients are ascending-power.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use classpoly::construct::{ClassPolynomialResult, PolyKind};
use classpoly::error::{Error, Result};
use classpoly::factor::FactoredInteger;
use classpoly::polyz::IntPolynomial;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscriminantDoc {
    pub sign: String,
    pub factors: Vec<[String; 2]>,
    pub cofactor: String,
}

impl DiscriminantDoc {
    pub fn from_factored(f: &FactoredInteger) -> Self {
        Self {
            sign: match f.sign() {
                s if s < 0 => "-".into(),
                0 => "0".into(),
                _ => "+".into(),
            },
            factors: f
                .factors()
                .iter()
                .map(|(p, e)| [p.to_string(), e.to_string()])
                .collect(),
            cofactor: f.cofactor().to_string(),
        }
    }
}

/// One class polynomial with its context, as serialized by the CLI and the
/// result cache.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub n: i64,
    pub kind: String,
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub discriminant: DiscriminantDoc,
    pub invariant_factors: Vec<u64>,
    pub precision_bits: usize,
    pub verified: bool,
}

pub fn kind_name(kind: PolyKind) -> &'static str {
    match kind {
        PolyKind::Hilbert => "hilbert",
        PolyKind::Ramanujan => "ramanujan",
    }
}

impl ResultDocument {
    pub fn new(
        result: &ClassPolynomialResult,
        discriminant: &FactoredInteger,
        invariant_factors: &[u64],
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: result.n,
            kind: kind_name(result.kind).into(),
            degree: result.polynomial.degree().unwrap_or(0),
            coefficients: result.polynomial.coeffs().iter().map(|c| c.to_string()).collect(),
            discriminant: DiscriminantDoc::from_factored(discriminant),
            invariant_factors: invariant_factors.to_vec(),
            precision_bits: result.bits_used,
            verified: result.verified,
        }
    }

    pub fn polynomial(&self) -> Result<IntPolynomial> {
        let coeffs: std::result::Result<Vec<BigInt>, _> =
            self.coefficients.iter().map(|s| BigInt::from_str(s)).collect();
        Ok(IntPolynomial::from_coeffs(coeffs.map_err(|e| {
            Error::Dataset(format!("bad coefficient in cached document: {e}"))
        })?))
    }

    pub fn poly_kind(&self) -> Result<PolyKind> {
        match self.kind.as_str() {
            "hilbert" => Ok(PolyKind::Hilbert),
            "ramanujan" => Ok(PolyKind::Ramanujan),
            other => Err(Error::Dataset(format!("unknown kind `{other}`"))),
        }
    }

    pub fn to_class_polynomial_result(&self) -> Result<ClassPolynomialResult> {
        Ok(ClassPolynomialResult {
            n: self.n,
            kind: self.poly_kind()?,
            polynomial: self.polynomial()?,
            bits_used: self.precision_bits,
            residual_log2: f64::NEG_INFINITY,
            verified: self.verified,
        })
    }
}
