//! JSON formats.
//!
//! TL element: `{"n": 3, "terms": [{"coeff": "λ^-2", "word": [1]}]}`, one
//! term per word in the generators `e_i` (the empty word is the identity).
//! `word` may also be a string of space-separated indices.
//!
//! Spectral element: `{"terms": [{"level": r, "tl": <TL element>,
//! "vec": [{"idx": [k_1, …, k_r], "coeff": "…"}]}]}` meaning `Σ T̄ ⊗ ξ`,
//! with 1-based `k_i`.

use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::{CoeffDomain, ScalarError};
use crate::spectral::{flatten, Coaction, SpectralElement};
use crate::tl::{TlElement, TlError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing or invalid field {0:?}")]
    Field(&'static str),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Tl(#[from] TlError),
    #[error("multi-index {idx:?} invalid for level {level} and dimension {n}")]
    Index { idx: Vec<u64>, level: usize, n: usize },
}

/// Parse a word given as `[1, 2]`, `"1 2"`, or `"e1e2"`.
pub fn parse_word(v: &Value) -> Result<Vec<usize>, IoError> {
    match v {
        Value::Array(xs) => xs
            .iter()
            .map(|x| x.as_u64().map(|k| k as usize).ok_or(IoError::Field("word")))
            .collect(),
        Value::String(s) => parse_word_str(s).ok_or(IoError::Field("word")),
        _ => Err(IoError::Field("word")),
    }
}

/// `"1 2 1"`, `"1,2,1"`, or `"e1e2e1"`; empty means the identity.
pub fn parse_word_str(s: &str) -> Option<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    if s.contains('e') {
        return s
            .split('e')
            .map(|p| p.trim().trim_matches('·'))
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().ok())
            .collect();
    }
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().ok())
        .collect()
}

pub fn element_from_json(domain: &CoeffDomain, v: &Value) -> Result<TlElement, IoError> {
    let n = v.get("n").and_then(Value::as_u64).ok_or(IoError::Field("n"))? as usize;
    let terms = v.get("terms").and_then(Value::as_array).ok_or(IoError::Field("terms"))?;
    let mut acc = TlElement::zero(domain, n);
    for t in terms {
        let coeff = match t.get("coeff") {
            None => domain.one(),
            Some(Value::String(s)) => domain.parse_scalar(s)?,
            Some(Value::Number(x)) => domain.parse_scalar(&x.to_string())?,
            Some(_) => return Err(IoError::Field("coeff")),
        };
        let word = parse_word(t.get("word").unwrap_or(&Value::Array(Vec::new())))?;
        acc = acc.checked_add(&TlElement::from_letters(domain, n, &word)?.scale(&coeff))?;
    }
    Ok(acc)
}

pub fn element_to_json(x: &TlElement) -> Value {
    let terms: Vec<Value> = x
        .to_reduced_words()
        .iter()
        .map(|w| json!({"coeff": w.prefactor.to_string(), "word": w.letters}))
        .collect();
    json!({"n": x.strands(), "terms": terms})
}

pub fn spectral_from_json(domain: &CoeffDomain, n: usize, v: &Value) -> Result<SpectralElement, IoError> {
    let terms = v.get("terms").and_then(Value::as_array).ok_or(IoError::Field("terms"))?;
    let mut acc = SpectralElement::zero(domain, n);
    for t in terms {
        let level = t.get("level").and_then(Value::as_u64).ok_or(IoError::Field("level"))? as usize;
        let tl = match t.get("tl") {
            Some(x) => element_from_json(domain, x)?,
            None => TlElement::identity(domain, level),
        };
        if tl.strands() != level {
            return Err(IoError::Field("tl"));
        }
        let entries = t.get("vec").and_then(Value::as_array).ok_or(IoError::Field("vec"))?;
        let mut xi = vec![domain.zero(); n.pow(level as u32)];
        for e in entries {
            let idx: Vec<u64> = e
                .get("idx")
                .and_then(Value::as_array)
                .ok_or(IoError::Field("idx"))?
                .iter()
                .map(|k| k.as_u64().ok_or(IoError::Field("idx")))
                .collect::<Result<_, _>>()?;
            if idx.len() != level || idx.iter().any(|&k| k == 0 || k as usize > n) {
                return Err(IoError::Index { idx, level, n });
            }
            let coeff = match e.get("coeff") {
                None => domain.one(),
                Some(Value::String(s)) => domain.parse_scalar(s)?,
                Some(Value::Number(x)) => domain.parse_scalar(&x.to_string())?,
                Some(_) => return Err(IoError::Field("coeff")),
            };
            let zero_based: Vec<u8> = idx.iter().map(|&k| (k - 1) as u8).collect();
            let i = flatten(&zero_based, n);
            xi[i] = &xi[i] + &coeff;
        }
        let part = SpectralElement::from_parts(&tl, &xi, n).map_err(|_| IoError::Field("vec"))?;
        acc = acc.add(&part);
    }
    Ok(acc)
}

/// One output term per diagram, with its vector part.
pub fn spectral_to_json(x: &SpectralElement) -> Value {
    let dom = x.domain();
    let mut terms = Vec::new();
    for level in x.levels() {
        for (d, xi) in x.by_diagram(level) {
            let tl = TlElement::from_diagram(dom, d, dom.one());
            let n = x.dim();
            let vec: Vec<Value> = xi
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    let idx: Vec<u64> = crate::spectral::digits(k, n, level).iter().map(|&i| i as u64 + 1).collect();
                    json!({"idx": idx, "coeff": c.to_string()})
                })
                .collect();
            terms.push(json!({"level": level, "tl": element_to_json(&tl), "vec": vec}));
        }
    }
    json!({"terms": terms})
}

/// `[{"monomial": [[j, k], …], "element": <spectral element>}]`, with
/// 1-based matrix-coefficient indices of `u_{jk}`.
pub fn coaction_to_json(c: &Coaction) -> Value {
    Value::Array(
        c.terms
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(w, x)| {
                let mono: Vec<[u64; 2]> = w.iter().map(|&(j, k)| [j as u64 + 1, k as u64 + 1]).collect();
                json!({"monomial": mono, "element": spectral_to_json(x)})
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aof::FMatrix;
    use crate::spectral::SpectralAlgebra;

    #[test]
    fn element_round_trip() {
        let d = CoeffDomain::symbolic();
        let v: Value = serde_json::from_str(r#"{"n":3,"terms":[{"coeff":"2","word":[1,2]},{"word":"2 1"},{"coeff":"λ","word":""}]}"#).unwrap();
        let x = element_from_json(&d, &v).unwrap();
        let back = element_from_json(&d, &element_to_json(&x)).unwrap();
        assert_eq!(x, back);
        assert_eq!(parse_word_str("e1e2e1"), Some(vec![1, 2, 1]));
        assert_eq!(parse_word_str("1,2"), Some(vec![1, 2]));
        assert!(element_from_json(&d, &json!({"terms": []})).is_err());
    }

    #[test]
    fn spectral_round_trip() {
        let d = CoeffDomain::parse("index=17/4").unwrap();
        let alg = SpectralAlgebra::with_max_level(FMatrix::parse(&d, "t=2").unwrap(), 6);
        let v: Value = serde_json::from_str(
            r#"{"terms":[{"level":1,"tl":{"n":1,"terms":[{"coeff":"1","word":[]}]},"vec":[{"idx":[1],"coeff":"1"},{"idx":[2],"coeff":"3/2"}]},{"level":0,"vec":[{"idx":[],"coeff":"5"}]}]}"#,
        )
        .unwrap();
        let x = spectral_from_json(&d, 2, &v).unwrap();
        assert_eq!(x.terms().len(), 3);
        let y = alg.product(&x, &x).unwrap();
        assert_eq!(spectral_from_json(&d, 2, &spectral_to_json(&y)).unwrap(), y);
        let bad = json!({"terms":[{"level":1,"vec":[{"idx":[3]}]}]});
        assert!(spectral_from_json(&d, 2, &bad).is_err());
    }
}
