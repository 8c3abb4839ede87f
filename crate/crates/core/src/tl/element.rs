//! Linear combinations of planar diagrams.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::diagram::{Diagram, DiagramError};
use super::words::{diagram_word, JonesWord};
use crate::scalar::{CoeffDomain, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TlError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("expected {expected} strands, got {got}")]
    StrandMismatch { expected: usize, got: usize },
    #[error("conditional expectation needs at least {need} strands, got {got}")]
    TooFewStrands { need: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Element of TL_n over a coefficient domain, in the diagram basis.
#[derive(Clone, Debug)]
pub struct TlElement {
    n: usize,
    domain: CoeffDomain,
    terms: BTreeMap<Diagram, Scalar>,
}

impl TlElement {
    pub fn zero(domain: &CoeffDomain, n: usize) -> Self {
        Self {
            n,
            domain: domain.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(domain: &CoeffDomain, n: usize) -> Self {
        Self::from_diagram(domain, Diagram::identity(n), domain.one())
    }

    pub fn scalar(domain: &CoeffDomain, n: usize, c: Scalar) -> Self {
        Self::from_diagram(domain, Diagram::identity(n), c)
    }

    pub fn from_diagram(domain: &CoeffDomain, d: Diagram, c: Scalar) -> Self {
        let mut out = Self::zero(domain, d.strands());
        if !c.is_exactly_zero() && !(domain.is_exact() && c.is_zero()) {
            out.terms.insert(d, c);
        }
        out
    }

    /// Unnormalized cup-cap `U_i`.
    pub fn cup_cap(domain: &CoeffDomain, n: usize, i: usize) -> Result<Self, TlError> {
        Ok(Self::from_diagram(domain, Diagram::cup_cap(n, i)?, domain.one()))
    }

    /// Jones projection `e_i = λ⁻¹ U_i`.
    pub fn e(domain: &CoeffDomain, n: usize, i: usize) -> Result<Self, TlError> {
        Ok(Self::from_diagram(
            domain,
            Diagram::cup_cap(n, i)?,
            domain.lambda_pow(-1),
        ))
    }

    /// `prefactor · e_{i1}⋯e_{ik}`; the empty word is the identity.
    pub fn from_word(domain: &CoeffDomain, n: usize, w: &JonesWord) -> Result<Self, TlError> {
        domain.check(&w.prefactor)?;
        let (d, loops) = Diagram::from_word(n, &w.letters)?;
        let c = &w.prefactor * &domain.lambda_pow(loops as i64 - w.letters.len() as i64);
        Ok(Self::from_diagram(domain, d, c))
    }

    pub fn from_letters(domain: &CoeffDomain, n: usize, letters: &[usize]) -> Result<Self, TlError> {
        Self::from_word(domain, n, &JonesWord::new(domain.one(), letters.to_vec()))
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &CoeffDomain {
        &self.domain
    }

    pub fn terms(&self) -> &BTreeMap<Diagram, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, d: &Diagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(|| self.domain.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude (float tolerance scale).
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Self) -> Result<(), TlError> {
        if self.n != other.n {
            return Err(TlError::StrandMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.domain != other.domain {
            return Err(ScalarError::DomainMismatch.into());
        }
        Ok(())
    }

    /// Drop zero coefficients; float mode uses `eps · scale`.
    fn prune(&mut self, scale: f64) {
        if self.domain.is_exact() {
            self.terms.retain(|_, c| !c.is_zero());
        } else {
            let s = scale.max(self.max_magnitude());
            self.terms.retain(|_, c| !c.is_negligible(s));
        }
    }

    pub fn add_term(&mut self, d: Diagram, c: Scalar) {
        match self.terms.get_mut(&d) {
            Some(v) => *v = &*v + &c,
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, TlError> {
        self.check_same(other)?;
        let scale = self.max_magnitude().max(other.max_magnitude());
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out.prune(scale);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, TlError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-&self.domain.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.domain, self.n);
        if c.is_exactly_zero() {
            return out;
        }
        for (d, v) in &self.terms {
            out.terms.insert(d.clone(), v * c);
        }
        out.prune(self.max_magnitude() * c.magnitude());
        out
    }

    /// Product with `self` stacked above `other`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, TlError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.domain, self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (d, loops) = a.compose_unchecked(b);
                let c = &(ca * cb) * &self.domain.lambda_pow(loops as i64);
                out.add_term(d, c);
            }
        }
        let lam = self.domain.lambda_f64().unwrap_or(1.0).max(1.0);
        let scale = self.max_magnitude() * other.max_magnitude() * lam.powi(self.n as i32);
        out.prune(scale);
        Ok(out)
    }

    /// Antilinear involution: flip diagrams, conjugate coefficients.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.domain, self.n);
        for (d, c) in &self.terms {
            out.terms.insert(d.flip(), c.conj());
        }
        out
    }

    /// Include into TL_{n+k} by adding through strands on the right.
    pub fn extend_right(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.domain, self.n + k);
        for (d, c) in &self.terms {
            out.terms.insert(d.extend_right(k), c.clone());
        }
        out
    }

    /// Shift into TL_{n+k} by adding through strands on the left
    /// (`e_i ↦ e_{i+k}`).
    pub fn extend_left(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.domain, self.n + k);
        for (d, c) in &self.terms {
            out.terms.insert(d.extend_left(k), c.clone());
        }
        out
    }

    /// Horizontal juxtaposition (self on the left).
    pub fn juxtapose(&self, other: &Self) -> Result<Self, TlError> {
        if self.domain != other.domain {
            return Err(ScalarError::DomainMismatch.into());
        }
        let mut out = Self::zero(&self.domain, self.n + other.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.juxtapose(b), ca * cb);
            }
        }
        out.prune(self.max_magnitude() * other.max_magnitude());
        Ok(out)
    }

    /// Normalized Markov trace, `tr(D) = λ^{loops(D̂) - n}`.
    pub fn trace(&self) -> Scalar {
        let mut acc = self.domain.zero();
        for (d, c) in &self.terms {
            let k = d.closure_loops() as i64 - self.n as i64;
            acc = &acc + &(c * &self.domain.lambda_pow(k));
        }
        acc
    }

    /// Conditional expectation onto TL_{n-1}: λ⁻¹ times closure of the last
    /// strand.
    pub fn cond_expectation(&self) -> Result<Self, TlError> {
        if self.n < 1 {
            return Err(TlError::TooFewStrands {
                need: 1,
                got: self.n,
            });
        }
        let mut out = Self::zero(&self.domain, self.n - 1);
        for (d, c) in &self.terms {
            let (e, loops) = d.close_last();
            out.add_term(e, c * &self.domain.lambda_pow(loops as i64 - 1));
        }
        out.prune(self.max_magnitude());
        Ok(out)
    }

    /// `k` successive conditional expectations.
    pub fn composite_expectation(&self, k: usize) -> Result<Self, TlError> {
        if k > self.n {
            return Err(TlError::TooFewStrands {
                need: k,
                got: self.n,
            });
        }
        let mut out = self.clone();
        for _ in 0..k {
            out = out.cond_expectation()?;
        }
        Ok(out)
    }

    /// Trace inner product `⟨self, other⟩ = tr(self* · other)`.
    pub fn inner(&self, other: &Self) -> Result<Scalar, TlError> {
        self.check_same(other)?;
        let mut acc = self.domain.zero();
        for (a, ca) in &self.terms {
            let fa = a.flip();
            let cac = ca.conj();
            for (b, cb) in &other.terms {
                acc = &acc + &(&(&cac * cb) * &diagram_pair_trace(&self.domain, &fa, b));
            }
        }
        Ok(acc)
    }

    /// Equality up to the domain's zero test on the difference.
    pub fn equals(&self, other: &Self) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Expansion in the reduced-word basis (one word per diagram).
    pub fn to_reduced_words(&self) -> Vec<JonesWord> {
        let mut out: Vec<JonesWord> = self
            .terms
            .iter()
            .map(|(d, c)| {
                let letters = diagram_word(d);
                let k = letters.len() as i64;
                JonesWord::new(c * &self.domain.lambda_pow(k), letters)
            })
            .collect();
        out.sort_by(|a, b| {
            (a.letters.len(), &a.letters).cmp(&(b.letters.len(), &b.letters))
        });
        out
    }

    /// `c · e2e1 + …` rendering in reduced words.
    pub fn render_words(&self) -> String {
        let words = self.to_reduced_words();
        if words.is_empty() {
            return "0".into();
        }
        words
            .iter()
            .map(JonesWord::to_string)
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `tr(a · b)` for single diagrams.
pub fn diagram_pair_trace(domain: &CoeffDomain, a: &Diagram, b: &Diagram) -> Scalar {
    let n = a.strands() as i64;
    let (d, loops) = a.compose_unchecked(b);
    domain.lambda_pow(loops as i64 + d.closure_loops() as i64 - n)
}

impl PartialEq for TlElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for TlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_words())
    }
}

macro_rules! element_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &TlElement {
            type Output = TlElement;
            fn $method(self, rhs: &TlElement) -> TlElement {
                self.$checked(rhs).expect("incompatible Temperley–Lieb elements")
            }
        }
    };
}
element_op!(Add, add, checked_add);
element_op!(Sub, sub, checked_sub);
element_op!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn sym() -> CoeffDomain {
        CoeffDomain::symbolic()
    }

    #[test]
    fn projection_relations() {
        let d = sym();
        let e1 = TlElement::e(&d, 3, 1).unwrap();
        let e2 = TlElement::e(&d, 3, 2).unwrap();
        assert_eq!(&e1 * &e1, e1);
        assert_eq!(&(&e1 * &e2) * &e1, e1.scale(&d.lambda_pow(-2)));
        let x = TlElement::e(&d, 4, 1).unwrap();
        let y = TlElement::e(&d, 4, 3).unwrap();
        assert!((&(&x * &y) - &(&y * &x)).is_zero());
    }

    #[test]
    fn word_coefficients() {
        let d = sym();
        let w = TlElement::from_letters(&d, 4, &[2, 1, 3, 2]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.terms().values().next().unwrap(), &d.lambda_pow(-4));
        assert_eq!(TlElement::from_letters(&d, 3, &[]).unwrap(), TlElement::identity(&d, 3));
        assert!(TlElement::from_letters(&d, 3, &[3]).is_err());
    }

    #[test]
    fn traces_and_expectations() {
        let d = sym();
        assert_eq!(TlElement::identity(&d, 4).trace(), d.one());
        assert_eq!(TlElement::e(&d, 3, 2).unwrap().trace(), d.lambda_pow(-2));
        assert_eq!(TlElement::from_letters(&d, 4, &[1, 3]).unwrap().trace(), d.lambda_pow(-4));
        let e2 = TlElement::e(&d, 3, 2).unwrap();
        assert_eq!(e2.cond_expectation().unwrap(), TlElement::scalar(&d, 2, d.lambda_pow(-2)));
        let e1 = TlElement::e(&d, 3, 1).unwrap();
        assert_eq!(e1.cond_expectation().unwrap(), TlElement::e(&d, 2, 1).unwrap());
        assert_eq!(
            TlElement::identity(&d, 3).cond_expectation().unwrap(),
            TlElement::identity(&d, 2)
        );
        let full = TlElement::e(&d, 2, 1).unwrap().composite_expectation(2).unwrap();
        assert_eq!(full, TlElement::scalar(&d, 0, d.lambda_pow(-2)));
    }

    #[test]
    fn involution_reverses_words() {
        let d = sym();
        let x = TlElement::from_letters(&d, 4, &[2, 1, 3, 2]).unwrap().scale(&d.lambda_pow(2));
        let y = TlElement::from_letters(&d, 4, &[2, 3, 1, 2]).unwrap().scale(&d.lambda_pow(2));
        assert_eq!(x.star(), y);
    }

    #[test]
    fn concrete_index_four() {
        let d = CoeffDomain::parse("index=4").unwrap();
        let e = TlElement::e(&d, 3, 1).unwrap();
        assert_eq!(e.trace().to_string(), "1/4");
    }

    #[test]
    fn reduced_word_rendering() {
        let d = sym();
        let e1 = TlElement::e(&d, 3, 1).unwrap();
        let e2 = TlElement::e(&d, 3, 2).unwrap();
        let x = &(&e1 * &e2) * &e1;
        assert_eq!(x.render_words(), "λ^-2 · e1");
        assert_eq!(TlElement::identity(&d, 2).render_words(), "1");
    }
}
