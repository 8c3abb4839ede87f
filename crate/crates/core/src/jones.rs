//! The words p^{(k)}_{r,s}, the projections f_{r-1}, and exact checks of
//! the run-reduction and p-exchange identities.

use rayon::prelude::*;
use thiserror::Error;

use crate::certificate::CaseResult;
use crate::scalar::CoeffDomain;
use crate::tl::words::run;
use crate::tl::{TlElement, TlError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JonesError {
    #[error("ambient strand count {n} is below the required {need}")]
    AmbientTooSmall { n: usize, need: usize },
    #[error("run indices must satisfy p ≤ j ≤ r < s ≤ n-1, got p={p}, j={j}, r={r}, s={s}, n={n}")]
    BadRuns { p: usize, j: usize, r: usize, s: usize, n: usize },
    #[error("p-exchange needs s ≤ r, got r={r}, s={s}")]
    BadExchange { r: usize, s: usize },
    #[error(transparent)]
    Tl(#[from] TlError),
}

/// Letters of p^{(k)}_{r,s} without the scalar: s descending runs of length
/// r, the t-th running from e_{r+k+t} down to e_{1+k+t}.
pub fn p_letters(k: usize, r: usize, s: usize) -> Vec<usize> {
    if r == 0 || s == 0 {
        return Vec::new();
    }
    (0..s).flat_map(|t| run(r + k + t, 1 + k + t)).collect()
}

/// `p^{(k)}_{r,s} = λ^{rs} · (e_{r+k}⋯e_{1+k})⋯(e_{r+k+s-1}⋯e_{s+k})` in TL_n.
pub fn build_p(domain: &CoeffDomain, k: usize, r: usize, s: usize, n: usize) -> Result<TlElement, JonesError> {
    let need = k + r + s;
    if n < need {
        return Err(JonesError::AmbientTooSmall { n, need });
    }
    let w = TlElement::from_letters(domain, n, &p_letters(k, r, s))?;
    Ok(w.scale(&domain.lambda_pow((r * s) as i64)))
}

/// Letters of f_{r-1}: the runs (e_r⋯e_1)(e_{r+1}⋯e_2)⋯(e_{2r-1}⋯e_r).
pub fn f_letters(r: usize) -> Vec<usize> {
    p_letters(0, r, r)
}

/// The Jones projection `f_{r-1} = β^{r(r-1)/2} (e_r⋯e_1)⋯(e_{2r-1}⋯e_r)`.
pub fn build_f(domain: &CoeffDomain, r: usize, n: usize) -> Result<TlElement, JonesError> {
    if n < 2 * r {
        return Err(JonesError::AmbientTooSmall { n, need: 2 * r });
    }
    let w = TlElement::from_letters(domain, n, &f_letters(r))?;
    Ok(w.scale(&domain.lambda_pow((r * r.saturating_sub(1)) as i64)))
}

/// Result of checking one instance of an identity between TL elements.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub lhs: TlElement,
    pub rhs: TlElement,
    pub equal: bool,
}

impl IdentityCheck {
    fn new(lhs: TlElement, rhs: TlElement) -> Self {
        let equal = lhs.equals(&rhs);
        Self { lhs, rhs, equal }
    }

    pub fn difference(&self) -> TlElement {
        &self.lhs - &self.rhs
    }
}

/// `(e_r⋯e_j)(e_s⋯e_p) = λ⁻²(e_r⋯e_p)(e_s⋯e_{j+2})` for `p ≤ j ≤ r < s`
/// (the last run is empty when `s = j + 1`).
pub fn reduce_run_pair(
    domain: &CoeffDomain,
    (r, j): (usize, usize),
    (s, p): (usize, usize),
    n: usize,
) -> Result<IdentityCheck, JonesError> {
    if !(p >= 1 && p <= j && j <= r && r < s && s < n) {
        return Err(JonesError::BadRuns { p, j, r, s, n });
    }
    let mut direct = run(r, j);
    direct.extend(run(s, p));
    let lhs = TlElement::from_letters(domain, n, &direct)?;
    let mut reduced = run(r, p);
    reduced.extend(run(s, j + 2));
    let rhs = TlElement::from_letters(domain, n, &reduced)?.scale(&domain.lambda_pow(-2));
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `p_{r,2} p_{r+2,s} = p_{r,s} p^{(2s)}_{r-s,2}` at `r + s + 2` strands.
pub fn p_exchange(domain: &CoeffDomain, r: usize, s: usize) -> Result<IdentityCheck, JonesError> {
    if s > r {
        return Err(JonesError::BadExchange { r, s });
    }
    let n = r + s + 2;
    let lhs = &build_p(domain, 0, r, 2, n)? * &build_p(domain, 0, r + 2, s, n)?;
    let rhs = &build_p(domain, 0, r, s, n)? * &build_p(domain, 2 * s, r - s, 2, n)?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// All admissible run pairs with `s ≤ s_max`, checked at `s + 1` strands.
pub fn run_pair_sweep(domain: &CoeffDomain, s_max: usize) -> Vec<CaseResult> {
    let mut cases = Vec::new();
    for s in 2..=s_max {
        for r in 1..s {
            for j in 1..=r {
                for p in 1..=j {
                    cases.push((p, j, r, s));
                }
            }
        }
    }
    cases
        .par_iter()
        .map(|&(p, j, r, s)| {
            let label = format!("p={p} j={j} r={r} s={s}");
            match reduce_run_pair(domain, (r, j), (s, p), s + 1) {
                Ok(c) => CaseResult::new(label, &c.lhs, &c.rhs, c.equal),
                Err(e) => CaseResult::new(label, "", "", false).with_detail(e.to_string()),
            }
        })
        .collect()
}

/// All `0 ≤ s ≤ r ≤ r_max`.
pub fn p_exchange_sweep(domain: &CoeffDomain, r_max: usize) -> Vec<CaseResult> {
    let cases: Vec<(usize, usize)> = (0..=r_max).flat_map(|r| (0..=r).map(move |s| (r, s))).collect();
    cases
        .par_iter()
        .map(|&(r, s)| {
            let label = format!("r={r} s={s}");
            match p_exchange(domain, r, s) {
                Ok(c) => {
                    let res = CaseResult::new(label, &c.lhs, &c.rhs, c.equal);
                    if c.equal {
                        res
                    } else {
                        res.with_detail(format!("difference: {}", c.difference()))
                    }
                }
                Err(e) => CaseResult::new(label, "", "", false).with_detail(e.to_string()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_words() {
        let d = CoeffDomain::symbolic();
        assert_eq!(build_p(&d, 0, 0, 3, 3).unwrap(), TlElement::identity(&d, 3));
        let p11 = build_p(&d, 0, 1, 1, 2).unwrap();
        assert_eq!(p11, TlElement::e(&d, 2, 1).unwrap().scale(&d.lambda()));
        assert_eq!(p_letters(0, 2, 2), vec![2, 1, 3, 2]);
        assert_eq!(p_letters(1, 2, 1), vec![3, 2]);
        assert!(build_p(&d, 1, 2, 2, 4).is_err());
        // a single diagram with coefficient 1
        let p = build_p(&d, 0, 3, 2, 5).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.terms().values().next().unwrap().is_one());
    }

    #[test]
    fn f_projection() {
        let d = CoeffDomain::symbolic();
        for r in 0..=3 {
            let f = build_f(&d, r, 2 * r).unwrap();
            assert_eq!(&f * &f, f);
            assert_eq!(f.star(), f);
            assert_eq!(f.trace(), d.lambda_pow(-2 * r as i64));
            let p = build_p(&d, 0, r, r, 2 * r).unwrap();
            assert_eq!(f, p.scale(&d.lambda_pow(-(r as i64))));
        }
        assert_eq!(build_f(&d, 1, 2).unwrap(), TlElement::e(&d, 2, 1).unwrap());
    }

    #[test]
    fn run_pair_examples() {
        let d = CoeffDomain::symbolic();
        let c = reduce_run_pair(&d, (2, 1), (3, 1), 4).unwrap();
        assert!(c.equal);
        let expect = TlElement::from_letters(&d, 4, &[2, 1, 3]).unwrap().scale(&d.lambda_pow(-2));
        assert_eq!(c.lhs, expect);
        let c = reduce_run_pair(&d, (1, 1), (2, 1), 3).unwrap();
        assert!(c.equal);
        assert!(reduce_run_pair(&d, (2, 1), (2, 1), 3).is_err());
    }

    #[test]
    fn exchange_examples() {
        let d = CoeffDomain::symbolic();
        let c = p_exchange(&d, 1, 1).unwrap();
        assert!(c.equal);
        assert_eq!(c.lhs, build_p(&d, 0, 1, 1, 4).unwrap());
        assert!(p_exchange(&d, 2, 0).unwrap().equal);
        assert!(p_exchange(&d, 3, 2).unwrap().equal);
        assert!(p_exchange(&d, 1, 2).is_err());
    }
}
