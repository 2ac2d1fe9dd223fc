//! `{"n": 2, "terms": [{"exp": [2, 0], "num": "1", "den": "1"}, ...]}`

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{grevlex_cmp, MultiIndex, Rational, SparsePolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl From<&SparsePolynomial> for PolyJson {
    /// Terms are listed in descending grevlex order with reduced fractions.
    fn from(p: &SparsePolynomial) -> Self {
        let mut terms: Vec<_> = p.terms().collect();
        terms.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        PolyJson {
            n: p.n(),
            terms: terms
                .into_iter()
                .map(|(m, c)| TermJson {
                    exp: m.exps().iter().map(|&e| e as i64).collect(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for SparsePolynomial {
    type Error = Error;

    fn try_from(j: &PolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != j.n {
                return Err(Error::Json(format!(
                    "exponent vector {:?} has length {}, expected {}",
                    t.exp,
                    t.exp.len(),
                    j.n
                )));
            }
            let mut exps = Vec::with_capacity(j.n);
            for &e in &t.exp {
                let e = u32::try_from(e)
                    .map_err(|_| Error::Json(format!("invalid exponent {e}")))?;
                exps.push(e);
            }
            let num = BigInt::from_str(t.num.trim())
                .map_err(|_| Error::Json(format!("bad numerator {:?}", t.num)))?;
            let den = BigInt::from_str(t.den.trim())
                .map_err(|_| Error::Json(format!("bad denominator {:?}", t.den)))?;
            if den.is_zero() {
                return Err(Error::Json("zero denominator".into()));
            }
            let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
            terms.push((MultiIndex::new(exps), Rational::new(num, den)));
        }
        SparsePolynomial::from_terms(j.n, terms)
    }
}

impl SparsePolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("polynomial JSON serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        SparsePolynomial::try_from(&j)
    }
}
