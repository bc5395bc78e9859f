//! Canonical JSON for exact values.
//!
//! A polynomial serializes as
//! `{"dim": n, "terms": [{"exp": [..], "coef": [{"apow": j, "num": "..", "den": ".."}]}]}`
//! with terms sorted lexicographically by exponent and coefficient entries by
//! power of `a`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::poly::LaurentPoly;
use super::rational::Rational;
use super::scalar::SpacingScalar;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefJson {
    pub apow: i32,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: Vec<CoefJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

pub fn scalar_to_json(s: &SpacingScalar) -> Vec<CoefJson> {
    s.terms()
        .map(|(p, c)| CoefJson {
            apow: p,
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

pub fn scalar_from_json(coef: &[CoefJson]) -> Result<SpacingScalar> {
    let mut terms = Vec::with_capacity(coef.len());
    for c in coef {
        let num: BigInt = c
            .num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator `{}`", c.num)))?;
        let den: BigInt = c
            .den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator `{}`", c.den)))?;
        if den.sign() != num_bigint::Sign::Plus {
            return Err(Error::Parse(format!(
                "denominator must be positive, got `{}`",
                c.den
            )));
        }
        terms.push((c.apow, Rational::new(num, den)));
    }
    Ok(SpacingScalar::from_terms(terms))
}

impl From<&LaurentPoly> for PolyJson {
    fn from(p: &LaurentPoly) -> Self {
        PolyJson {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.to_vec(),
                    coef: scalar_to_json(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for LaurentPoly {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            terms.push((t.exp.clone(), scalar_from_json(&t.coef)?));
        }
        LaurentPoly::from_terms(j.dim, terms)
    }
}

impl LaurentPoly {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("plain data serializes")
    }

    /// Compact canonical JSON string.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolyJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
        LaurentPoly::try_from(&j)
    }
}
