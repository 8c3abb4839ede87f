//! Markov trace, conditional expectations, and the trace inner product on
//! TL_n: Gram matrices, ranks, and quotients by the trace radical.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{hermitian_positivity, pivot_columns, Matrix, Positivity};
use crate::scalar::{CoeffDomain, Scalar};
use crate::tl::{basis, Diagram, TlElement, TlError};

/// Largest strand count for which a full Gram matrix is assembled.
pub const MAX_GRAM_STRANDS: usize = 8;

/// Symbolic ranks and positivity are decided at this value of λ first.
pub const SYMBOLIC_SAMPLE_LAMBDA: i64 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarkovError {
    #[error("Gram matrix on {0} strands exceeds the size budget of {max} strands", max = MAX_GRAM_STRANDS)]
    TooLarge(usize),
    #[error("radical quotient in float mode needs `force`: float ranks are tolerance-dependent")]
    FloatRank,
    #[error(transparent)]
    Tl(#[from] TlError),
}

pub fn markov_trace(x: &TlElement) -> Scalar {
    x.trace()
}

pub fn cond_expectation(x: &TlElement) -> Result<TlElement, TlError> {
    x.cond_expectation()
}

pub fn composite_expectation(x: &TlElement, steps: usize) -> Result<TlElement, TlError> {
    x.composite_expectation(steps)
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub n: usize,
    pub domain: String,
    #[serde(serialize_with = "ser_labels")]
    pub labels: Vec<Diagram>,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Matrix,
    pub rank: usize,
    pub positivity: Positivity,
    /// Indices of the lexicographic quotient basis.
    pub quotient_basis: Vec<usize>,
    /// How rank and positivity were decided.
    pub method: String,
}

fn ser_labels<S: serde::Serializer>(labels: &[Diagram], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(labels.iter().map(|d| d.pairing().to_vec()))
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        m.iter()
            .map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>()),
    )
}

/// `⟨S, T⟩ = λ^k` for diagrams; returns the exponent matrix `k`.
pub fn gram_exponents(n: usize) -> Vec<Vec<i64>> {
    let b = basis(n);
    let flips: Vec<Diagram> = b.diagrams.iter().map(Diagram::flip).collect();
    flips
        .par_iter()
        .map(|fa| {
            b.diagrams
                .iter()
                .map(|t| {
                    let (d, loops) = fa.compose(t).expect("same strand count");
                    loops as i64 + d.closure_loops() as i64 - n as i64
                })
                .collect()
        })
        .collect()
}

fn materialize(domain: &CoeffDomain, exps: &[Vec<i64>]) -> Matrix {
    exps.par_iter()
        .map(|r| r.iter().map(|&k| domain.lambda_pow(k)).collect())
        .collect()
}

/// Full Gram matrix of the diagram basis with rank, positivity, and
/// quotient basis.
pub fn gram_matrix(domain: &CoeffDomain, n: usize) -> Result<GramReport, MarkovError> {
    if n > MAX_GRAM_STRANDS {
        return Err(MarkovError::TooLarge(n));
    }
    let b = basis(n);
    let exps = gram_exponents(n);
    let matrix = materialize(domain, &exps);
    let size = b.len();
    let (rank, positivity, quotient_basis, method) = if domain.is_symbolic() {
        // A full-rank specialization certifies generic full rank; the
        // sample is also where positivity is evaluated.
        let sample = CoeffDomain::rational_index(num_rational::BigRational::from_integer(
            (SYMBOLIC_SAMPLE_LAMBDA * SYMBOLIC_SAMPLE_LAMBDA).into(),
        ))
        .expect("sample index exceeds 1");
        let specialized = materialize(&sample, &exps);
        let (pos, r) = hermitian_positivity(&sample, &specialized);
        if r == size {
            (
                size,
                pos,
                (0..size).collect(),
                format!("full rank at λ={SYMBOLIC_SAMPLE_LAMBDA} certifies generic rank; positivity at λ={SYMBOLIC_SAMPLE_LAMBDA}"),
            )
        } else {
            let piv = pivot_columns(domain, &matrix);
            (
                piv.len(),
                pos,
                piv,
                format!("symbolic elimination; positivity at λ={SYMBOLIC_SAMPLE_LAMBDA}"),
            )
        }
    } else {
        let (pos, _) = hermitian_positivity(domain, &matrix);
        let piv = pivot_columns(domain, &matrix);
        let method = if domain.is_exact() {
            "exact Gaussian elimination".to_string()
        } else {
            format!("float elimination, relative tolerance {:e}", domain.eps())
        };
        (piv.len(), pos, piv, method)
    };
    Ok(GramReport {
        n,
        domain: domain.descriptor().to_string(),
        labels: b.diagrams.clone(),
        matrix,
        rank,
        positivity,
        quotient_basis,
        method,
    })
}

/// Rank of the Gram matrix on `n` strands.
pub fn gram_rank(domain: &CoeffDomain, n: usize) -> Result<usize, MarkovError> {
    Ok(gram_matrix(domain, n)?.rank)
}

/// Diagrams spanning a complement of the trace radical, chosen greedily in
/// lexicographic order.
pub fn radical_quotient_basis(
    domain: &CoeffDomain,
    n: usize,
    force: bool,
) -> Result<Vec<TlElement>, MarkovError> {
    if !domain.is_exact() && !force {
        return Err(MarkovError::FloatRank);
    }
    let report = gram_matrix(domain, n)?;
    Ok(report
        .quotient_basis
        .iter()
        .map(|&i| TlElement::from_diagram(domain, report.labels[i].clone(), domain.one()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_strand_gram() {
        let d = CoeffDomain::symbolic();
        let g = gram_matrix(&d, 2).unwrap();
        // basis order: U1 ([1,0,3,2]) before identity ([2,3,0,1])
        let id = g.labels.iter().position(Diagram::is_identity).unwrap();
        let u = 1 - id;
        assert_eq!(g.matrix[id][id], d.one());
        assert_eq!(g.matrix[id][u], d.lambda_pow(-1));
        assert_eq!(g.matrix[u][u], d.one());
        assert_eq!(g.rank, 2);
        assert_eq!(g.positivity, Positivity::PositiveDefinite);
    }

    #[test]
    fn rank_drops_at_index_two() {
        let d = CoeffDomain::parse("index=2").unwrap();
        let g = gram_matrix(&d, 3).unwrap();
        assert_eq!(g.rank, 4);
        assert_eq!(g.positivity, Positivity::PositiveSemidefinite);
        assert_eq!(radical_quotient_basis(&d, 3, false).unwrap().len(), 4);
    }

    #[test]
    fn quotient_edge_cases() {
        let d = CoeffDomain::symbolic();
        assert_eq!(radical_quotient_basis(&d, 1, false).unwrap().len(), 1);
        let f = CoeffDomain::parse("float:index=2").unwrap();
        assert!(matches!(radical_quotient_basis(&f, 3, false), Err(MarkovError::FloatRank)));
        assert_eq!(radical_quotient_basis(&f, 3, true).unwrap().len(), 4);
        assert!(matches!(gram_matrix(&d, 9), Err(MarkovError::TooLarge(9))));
    }
}
