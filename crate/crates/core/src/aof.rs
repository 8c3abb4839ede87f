//! The Hilbert-space side of A_o(F): the matrix F, the conjugation vector
//! R_u, the Temperley–Lieb image on H^{⊗r}, invariant vectors, and checks
//! of the quasitensor axioms for the arrow-space functor.
//!
//! Multi-indices `(k_1, …, k_r)` are flattened big-endian:
//! `K = Σ k_i n^{r-i}` with `k_1` most significant.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::certificate::CaseResult;
use crate::coords::{insert_r, insert_r_star, insertion_positions, line_pairings, planar_r_arrow, tensor_arrows};
use crate::linalg::{gram_schmidt, inverse, Matrix};
use crate::markov::radical_quotient_basis;
use crate::scalar::{CoeffDomain, Scalar};
use crate::tl::{basis, Diagram, TlElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AofError {
    #[error("F must be a square matrix with n ≥ 2, got {rows}×{cols}")]
    Shape { rows: usize, cols: usize },
    #[error("F is not invertible")]
    Singular,
    #[error("F·conj(F) is not ±I")]
    NotSelfConjugate,
    #[error("F is pseudoreal (F·conj(F) = -I); the subfactor case needs a real object")]
    Pseudoreal,
    #[error("quantum dimension d = {d} does not match the index β = {beta}")]
    IndexMismatch { d: String, beta: String },
    #[error("cannot parse F: {0}")]
    Parse(String),
    #[error("operator shapes do not match: {0}")]
    OperatorShape(String),
    #[error("index i = {i} out of range for {r} tensor factors")]
    IndexOutOfRange { i: usize, r: usize },
    #[error("entry {0} cannot be moved to the target coefficient domain")]
    Rebase(String),
}

/// A validated F with `F·conj(F) = σ·I`.
#[derive(Clone, Debug)]
pub struct FMatrix {
    domain: CoeffDomain,
    entries: Matrix,
    sigma: i8,
    d: Scalar,
}

impl FMatrix {
    /// Check shape, invertibility and `F·conj(F) = ±I`; compute `d = Tr(F*F)`.
    pub fn validate(domain: &CoeffDomain, entries: Matrix) -> Result<Self, AofError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows < 2 || entries.iter().any(|r| r.len() != rows) {
            return Err(AofError::Shape { rows, cols });
        }
        if inverse(domain, &entries).is_none() {
            return Err(AofError::Singular);
        }
        let conj: Matrix = entries.iter().map(|r| r.iter().map(Scalar::conj).collect()).collect();
        let prod = crate::linalg::mat_mul(domain, &entries, &conj);
        let s = prod[0][0].clone();
        let sigma = if s == domain.one() {
            1
        } else if s == domain.int(-1) {
            -1
        } else {
            return Err(AofError::NotSelfConjugate);
        };
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { s.clone() } else { domain.zero() };
                if *x != want {
                    return Err(AofError::NotSelfConjugate);
                }
            }
        }
        let d = entries
            .iter()
            .flatten()
            .fold(domain.zero(), |acc, x| &acc + &(&x.conj() * x));
        Ok(Self {
            domain: domain.clone(),
            entries,
            sigma,
            d,
        })
    }

    /// `F = I_p`.
    pub fn identity(domain: &CoeffDomain, p: usize) -> Result<Self, AofError> {
        let m = (0..p)
            .map(|i| (0..p).map(|j| if i == j { domain.one() } else { domain.zero() }).collect())
            .collect();
        Self::validate(domain, m)
    }

    /// The real two-dimensional case `[[0, t], [1/t, 0]]`, with `d = t² + t⁻²`.
    pub fn two_by_two(domain: &CoeffDomain, t: &Scalar) -> Result<Self, AofError> {
        let inv = t.try_recip().map_err(|_| AofError::Singular)?;
        Self::validate(domain, vec![vec![domain.zero(), t.clone()], vec![inv, domain.zero()]])
    }

    /// `I<p>`, `t=<value>`, or a JSON matrix of scalar strings or numbers.
    pub fn parse(domain: &CoeffDomain, text: &str) -> Result<Self, AofError> {
        let text = text.trim();
        if let Some(p) = text.strip_prefix('I') {
            let p: usize = p.parse().map_err(|_| AofError::Parse(text.to_string()))?;
            return Self::identity(domain, p);
        }
        if let Some(t) = text.strip_prefix("t=") {
            let t = domain
                .parse_scalar(t)
                .map_err(|e| AofError::Parse(e.to_string()))?;
            return Self::two_by_two(domain, &t);
        }
        let json: serde_json::Value =
            serde_json::from_str(text).map_err(|e| AofError::Parse(e.to_string()))?;
        let rows = json
            .as_array()
            .ok_or_else(|| AofError::Parse("expected an array of rows".into()))?;
        let mut m = Vec::new();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| AofError::Parse("expected an array of rows".into()))?;
            let mut r = Vec::new();
            for x in row {
                let s = match x {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(AofError::Parse(format!("bad entry {other}"))),
                };
                r.push(domain.parse_scalar(&s).map_err(|e| AofError::Parse(e.to_string()))?);
            }
            m.push(r);
        }
        Self::validate(domain, m)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> &CoeffDomain {
        &self.domain
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn sigma(&self) -> i8 {
        self.sigma
    }

    /// Quantum dimension `Tr(F*F)`.
    pub fn d(&self) -> &Scalar {
        &self.d
    }

    /// Subfactor mode: σ = +1 and d equal to the domain's index β.
    pub fn require_subfactor(&self) -> Result<(), AofError> {
        if self.sigma != 1 {
            return Err(AofError::Pseudoreal);
        }
        let beta = self.domain.beta();
        if self.d != beta {
            return Err(AofError::IndexMismatch {
                d: self.d.to_string(),
                beta: beta.to_string(),
            });
        }
        Ok(())
    }

    /// `jψ_k = Fψ_k` (the conjugation `c` fixes basis vectors): column k.
    pub fn j_basis(&self, k: usize) -> Vec<Scalar> {
        self.entries.iter().map(|r| r[k].clone()).collect()
    }

    /// Component `(a, b)` of `R_u = Σ_k ψ_k ⊗ jψ_k`, i.e. `F_{b a}`.
    pub fn r_entry(&self, a: usize, b: usize) -> &Scalar {
        &self.entries[b][a]
    }

    /// The same F over another domain (entries must be rational, or the
    /// target must be float).
    pub fn rebase(&self, target: &CoeffDomain) -> Result<Self, AofError> {
        let lam = self.domain.lambda_f64();
        let m = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        if let Some(q) = x.as_rational() {
                            return Ok(target.rational(q));
                        }
                        let z = x.to_complex(lam);
                        target
                            .complex(z.re, z.im)
                            .ok_or_else(|| AofError::Rebase(x.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Matrix, _>>()?;
        Self::validate(target, m)
    }

    /// A domain whose λ equals d, i.e. index d². This is the engine
    /// parameter under which the concrete e_i^H satisfy the TL relations.
    pub fn loop_domain(&self) -> Result<CoeffDomain, AofError> {
        if let Some(q) = self.d.as_rational() {
            if self.domain.is_exact() {
                return CoeffDomain::rational_index(&q * &q).map_err(|e| AofError::Rebase(e.to_string()));
            }
        }
        if self.domain.is_exact() {
            return Err(AofError::Rebase(self.d.to_string()));
        }
        let d = self.d.magnitude();
        Ok(CoeffDomain::float(d * d, self.domain.eps()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| x.to_string().into()).collect()))
                .collect(),
        )
    }
}

/// Validation summary for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct FReport {
    pub n: usize,
    pub sigma: i8,
    pub d: String,
    pub subfactor: bool,
    pub detail: Option<String>,
    pub matrix: serde_json::Value,
}

pub fn validate_report(f: &FMatrix) -> FReport {
    let sub = f.require_subfactor();
    FReport {
        n: f.n(),
        sigma: f.sigma,
        d: f.d.to_string(),
        subfactor: sub.is_ok(),
        detail: sub.err().map(|e| e.to_string()),
        matrix: f.to_json(),
    }
}

/// A linear map `H^{⊗src} → H^{⊗tgt}` as an `n^tgt × n^src` matrix.
#[derive(Clone, Debug)]
pub struct ConcreteOperator {
    pub n: usize,
    pub src: usize,
    pub tgt: usize,
    pub m: Matrix,
}

impl ConcreteOperator {
    pub fn identity(domain: &CoeffDomain, n: usize, r: usize) -> Self {
        let dim = n.pow(r as u32);
        let m = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { domain.one() } else { domain.zero() }).collect())
            .collect();
        Self { n, src: r, tgt: r, m }
    }

    /// A vector of `H^{⊗r}` as a map from `ℂ = H^{⊗0}`.
    pub fn from_vector(n: usize, r: usize, v: &[Scalar]) -> Self {
        Self {
            n,
            src: 0,
            tgt: r,
            m: v.iter().map(|x| vec![x.clone()]).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, domain: &CoeffDomain, other: &Self) -> Result<Self, AofError> {
        if self.n != other.n || self.src != other.tgt {
            return Err(AofError::OperatorShape(format!(
                "({}→{}) ∘ ({}→{})",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        Ok(Self {
            n: self.n,
            src: other.src,
            tgt: self.tgt,
            m: crate::linalg::mat_mul(domain, &self.m, &other.m),
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, domain: &CoeffDomain, other: &Self) -> Self {
        let (ar, ac) = (self.m.len(), self.m.first().map_or(1, Vec::len));
        let (br, bc) = (other.m.len(), other.m.first().map_or(1, Vec::len));
        let mut m = vec![vec![domain.zero(); ac * bc]; ar * br];
        for i in 0..ar {
            for j in 0..ac {
                if self.m[i][j].is_exactly_zero() {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        m[i * br + k][j * bc + l] = &self.m[i][j] * &other.m[k][l];
                    }
                }
            }
        }
        Self {
            n: self.n,
            src: self.src + other.src,
            tgt: self.tgt + other.tgt,
            m,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            src: self.tgt,
            tgt: self.src,
            m: crate::linalg::adjoint(&self.m),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self {
            m: self.m.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.src, self.tgt), (other.src, other.tgt), "operator shapes");
        Self {
            m: self
                .m
                .iter()
                .zip(&other.m)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
            ..self.clone()
        }
    }

    pub fn equals(&self, other: &Self) -> bool {
        (self.n, self.src, self.tgt) == (other.n, other.src, other.tgt)
            && self.m.iter().flatten().zip(other.m.iter().flatten()).all(|(a, b)| a == b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "source": self.src,
            "target": self.tgt,
            "matrix": self.m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ConcreteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn digits(mut k: usize, n: usize, r: usize) -> Vec<usize> {
    let mut out = vec![0; r];
    for slot in out.iter_mut().rev() {
        *slot = k % n;
        k /= n;
    }
    out
}

fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &k| acc * n + k)
}

/// The vector `R_u = Σ_k ψ_k ⊗ jψ_k ∈ H ⊗ H`.
pub fn build_r_vector(f: &FMatrix) -> ConcreteOperator {
    let n = f.n();
    let v: Vec<Scalar> = (0..n * n).map(|k| f.r_entry(k / n, k % n).clone()).collect();
    ConcreteOperator::from_vector(n, 2, &v)
}

/// `(R_u* ⊗ 1)(1 ⊗ R_u)` on H, which equals `σ·1`.
pub fn conjugate_equation(f: &FMatrix) -> ConcreteOperator {
    let dom = f.domain();
    let n = f.n();
    let r = build_r_vector(f);
    let id = ConcreteOperator::identity(dom, n, 1);
    let up = id.kron(dom, &r);
    let down = r.adjoint().kron(dom, &id);
    down.compose(dom, &up).expect("shapes match")
}

/// `1^{⊗a} ⊗ R_u ⊗ 1^{⊗b}` applied to a vector of `H^{⊗(a+b)}`.
pub fn insert_r_vector(f: &FMatrix, a: usize, v: &[Scalar]) -> Vec<Scalar> {
    let n = f.n();
    let dom = f.domain();
    let l = level_of(v.len(), n);
    assert!(a <= l, "insertion position within the tensor power");
    let mut out = vec![dom.zero(); n.pow(l as u32 + 2)];
    for (k, c) in v.iter().enumerate() {
        if c.is_exactly_zero() {
            continue;
        }
        let idx = digits(k, n, l);
        for x in 0..n {
            for y in 0..n {
                let rxy = f.r_entry(x, y);
                if rxy.is_exactly_zero() {
                    continue;
                }
                let mut big = idx[..a].to_vec();
                big.extend([x, y]);
                big.extend(&idx[a..]);
                out[flatten(&big, n)] = &out[flatten(&big, n)] + &(c * rxy);
            }
        }
    }
    out
}

/// `1^{⊗a} ⊗ R_u* ⊗ 1^{⊗b}` applied to a vector of `H^{⊗(a+b+2)}`.
pub fn contract_r_vector(f: &FMatrix, a: usize, v: &[Scalar]) -> Vec<Scalar> {
    let n = f.n();
    let dom = f.domain();
    let l = level_of(v.len(), n);
    assert!(l >= a + 2, "contraction position within the tensor power");
    let mut out = vec![dom.zero(); n.pow(l as u32 - 2)];
    for (k, c) in v.iter().enumerate() {
        if c.is_exactly_zero() {
            continue;
        }
        let idx = digits(k, n, l);
        let rc = f.r_entry(idx[a], idx[a + 1]).conj();
        if rc.is_exactly_zero() {
            continue;
        }
        let mut small = idx[..a].to_vec();
        small.extend(&idx[a + 2..]);
        let t = flatten(&small, n);
        out[t] = &out[t] + &(&rc * c);
    }
    out
}

fn level_of(len: usize, n: usize) -> usize {
    let mut l = 0;
    let mut p = 1;
    while p < len {
        p *= n;
        l += 1;
    }
    assert_eq!(p, len, "vector length is a power of n");
    l
}

/// Tensor product of vectors.
pub fn tensor_vectors(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `⟨v, w⟩ = Σ conj(v_K) w_K`.
pub fn vector_inner(domain: &CoeffDomain, v: &[Scalar], w: &[Scalar]) -> Scalar {
    v.iter().zip(w).fold(domain.zero(), |acc, (x, y)| {
        if x.is_exactly_zero() {
            acc
        } else {
            &acc + &(&x.conj() * y)
        }
    })
}

/// `e_i^H = d⁻¹ · 1^{⊗(i-1)} ⊗ R_u R_u* ⊗ 1^{⊗(r-i-1)}`.
pub fn concrete_e(f: &FMatrix, i: usize, r: usize) -> Result<ConcreteOperator, AofError> {
    if i == 0 || i >= r {
        return Err(AofError::IndexOutOfRange { i, r });
    }
    let dinv = f.d().try_recip().map_err(|_| AofError::Singular)?;
    Ok(concrete_diagram(f, &Diagram::cup_cap(r, i).expect("index checked")).scale(&dinv))
}

/// The image of a diagram with unit weight: input on the bottom points,
/// output on the top. Through strands are δ, top caps `R_u`, bottom cups
/// `R_u*`.
pub fn concrete_diagram(f: &FMatrix, d: &Diagram) -> ConcreteOperator {
    let n = f.n();
    let r = d.strands();
    let dom = f.domain();
    let dim = n.pow(r as u32);
    let mut m = vec![vec![dom.zero(); dim]; dim];
    for (o, row) in m.iter_mut().enumerate() {
        let top = digits(o, n, r);
        for (i, slot) in row.iter_mut().enumerate() {
            let bot = digits(i, n, r);
            let mut c = dom.one();
            for p in 0..2 * r {
                let q = d.partner(p);
                if q < p {
                    continue;
                }
                let val = |x: usize| if x < r { top[x] } else { bot[x - r] };
                let factor = match (p < r, q < r) {
                    (true, true) => f.r_entry(val(p), val(q)).clone(),
                    (false, false) => f.r_entry(val(p), val(q)).conj(),
                    _ => {
                        if val(p) == val(q) {
                            continue;
                        }
                        dom.zero()
                    }
                };
                c = &c * &factor;
                if c.is_exactly_zero() {
                    break;
                }
            }
            *slot = c;
        }
    }
    ConcreteOperator { n, src: r, tgt: r, m }
}

/// The image of a TL element whose domain has λ = d (see [`FMatrix::loop_domain`]).
/// Coefficients are moved into F's domain.
pub fn concrete_element(f: &FMatrix, x: &TlElement) -> Result<ConcreteOperator, AofError> {
    let dom = f.domain();
    let n = x.strands();
    let mut acc = ConcreteOperator {
        n: f.n(),
        src: n,
        tgt: n,
        m: vec![vec![dom.zero(); f.n().pow(n as u32)]; f.n().pow(n as u32)],
    };
    let xd = x.domain();
    for (d, c) in x.terms() {
        let c = if xd == dom {
            c.clone()
        } else if let Some(q) = c.as_rational() {
            dom.rational(q)
        } else {
            let z = c.to_complex(xd.lambda_f64());
            dom.complex(z.re, z.im).ok_or_else(|| AofError::Rebase(c.to_string()))?
        };
        acc = acc.add(&concrete_diagram(f, d).scale(&c));
    }
    Ok(acc)
}

/// The vector built by R_u insertions along a noncrossing pairing, in the
/// same order as [`planar_r_arrow`].
pub fn planar_vector(f: &FMatrix, pairing: &[usize]) -> Vec<Scalar> {
    let mut v = vec![f.domain().one()];
    for a in insertion_positions(pairing) {
        v = insert_r_vector(f, a, &v);
    }
    v
}

/// Orthogonal (float: orthonormal) basis of the span of the planar
/// insertion vectors in `H^{⊗r}`, with squared norms.
#[derive(Clone, Debug)]
pub struct InvariantVectors {
    pub r: usize,
    pub vectors: Vec<Vec<Scalar>>,
    pub norms_sq: Vec<Scalar>,
    pub normalized: bool,
}

impl InvariantVectors {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn invariant_vectors(f: &FMatrix, r: usize) -> InvariantVectors {
    let dom = f.domain();
    let family: Vec<Vec<Scalar>> = line_pairings(r).iter().map(|p| planar_vector(f, p)).collect();
    let gram: Matrix = family
        .iter()
        .map(|a| family.iter().map(|b| vector_inner(dom, a, b)).collect())
        .collect();
    let (coeffs, norms) = gram_schmidt(dom, &gram);
    let normalize = !dom.is_exact();
    let dim = f.n().pow(r as u32);
    let mut vectors = Vec::new();
    let mut norms_sq = Vec::new();
    for (c, nrm) in coeffs.iter().zip(&norms) {
        let mut v = vec![dom.zero(); dim];
        for (x, fam) in c.iter().zip(&family) {
            if x.is_exactly_zero() {
                continue;
            }
            for (slot, y) in v.iter_mut().zip(fam) {
                *slot = &*slot + &(x * y);
            }
        }
        if normalize {
            let s = nrm.float_sqrt().expect("float mode").try_recip().expect("nonzero");
            v.iter_mut().for_each(|x| *x = &*x * &s);
            norms_sq.push(dom.one());
        } else {
            norms_sq.push(nrm.clone());
        }
        vectors.push(v);
    }
    InvariantVectors {
        r,
        vectors,
        norms_sq,
        normalized: normalize,
    }
}

/// Check of the quasitensor axioms for `τ: u^{⊗r} ↦ level-r arrow space`
/// with `τ̃_{r,s}(S ⊗ T) = S·p_{r,s}·T`, in F's domain (which must carry
/// λ² = d). Arrow spaces are taken modulo the trace radical, so equalities
/// are tested against a quotient basis.
pub fn verify_quasitensor(f: &FMatrix, r_max: usize) -> Vec<CaseResult> {
    if let Err(e) = f.require_subfactor() {
        return vec![CaseResult::new("subfactor-mode", f.d(), f.domain().beta(), false).with_detail(e.to_string())];
    }
    let dom = f.domain().clone();
    let mut cases = Vec::new();
    let bases: Vec<Vec<TlElement>> = (0..=r_max)
        .map(|l| radical_quotient_basis(&dom, l, true).expect("level within the Gram budget"))
        .collect();
    let grams: Vec<Matrix> = bases
        .iter()
        .map(|b| b.iter().map(|x| b.iter().map(|y| x.inner(y).unwrap()).collect()).collect())
        .collect();
    let ginv: Vec<Matrix> = grams
        .iter()
        .map(|g| inverse(&dom, g).expect("quotient Gram is nonsingular"))
        .collect();
    let quotient_equal = |x: &TlElement, y: &TlElement| {
        let diff = x - y;
        bases[x.strands()].iter().all(|b| b.inner(&diff).unwrap().is_zero())
    };
    let tens = |a: &TlElement, b: &TlElement| tensor_arrows(a, b).expect("levels valid");

    // τ_ι = ι: the level-0 space is one-dimensional with ⟨1, 1⟩ = 1
    let unit0 = TlElement::identity(&dom, 0);
    cases.push(CaseResult::new(
        "tau-iota",
        format!("dim {} norm {}", bases[0].len(), unit0.inner(&unit0).unwrap()),
        "dim 1 norm 1",
        bases[0].len() == 1 && unit0.inner(&unit0).unwrap().is_one(),
    ));

    // unit laws τ̃_{r,ι} = τ̃_{ι,r} = 1
    for r in 0..=r_max {
        for (k, s) in basis(r).diagrams.iter().enumerate() {
            let s = TlElement::from_diagram(&dom, s.clone(), dom.one());
            let right = tens(&s, &unit0);
            let left = tens(&unit0, &s);
            cases.push(CaseResult::new(
                format!("unit r={r} diagram={k}"),
                format!("{right} | {left}"),
                &s,
                right == s && left == s,
            ));
        }
    }

    // isometry on full diagram bases
    for r in 0..=r_max {
        for s in 0..=r_max - r {
            let br = &basis(r).diagrams;
            let bs = &basis(s).diagrams;
            let el = |d: &Diagram| TlElement::from_diagram(&dom, d.clone(), dom.one());
            let mut ok = true;
            let mut bad = None;
            for s1 in br {
                for s2 in br {
                    let ip_s = el(s1).inner(&el(s2)).unwrap();
                    for t1 in bs {
                        for t2 in bs {
                            let lhs = tens(&el(s1), &el(t1)).inner(&tens(&el(s2), &el(t2))).unwrap();
                            let rhs = &ip_s * &el(t1).inner(&el(t2)).unwrap();
                            if lhs != rhs {
                                ok = false;
                                bad.get_or_insert((lhs, rhs));
                            }
                        }
                    }
                }
            }
            let (l, rr) = bad.map_or(("all equal".into(), "all equal".into()), |(a, b)| (a.to_string(), b.to_string()));
            cases.push(CaseResult::new(format!("isometry r={r} s={s}"), l, rr, ok));
        }
    }

    // exchange identity τ̃*_{a,b+c} τ̃_{a+b,c} = (1 ⊗ τ̃_{b,c})(τ̃*_{a,b} ⊗ 1)
    for a in 0..=r_max {
        for b in 0..=r_max - a {
            for c in 0..=r_max - a - b {
                let (ba, bb, bc) = (&bases[a], &bases[b], &bases[b + c]);
                let (bab, bcc) = (&bases[a + b], &bases[c]);
                let gbinv_t: Matrix = {
                    let g = &ginv[b];
                    (0..g.len()).map(|i| (0..g.len()).map(|j| g[j][i].clone()).collect()).collect()
                };
                let mut ok = true;
                let mut bad = None;
                for x in bab {
                    // m_{k,l} = ⟨S_k p T_l, X⟩
                    let m: Matrix = ba
                        .iter()
                        .map(|sk| bb.iter().map(|tl| tens(sk, tl).inner(x).unwrap()).collect())
                        .collect();
                    let mg = crate::linalg::mat_mul(&dom, &m, &gbinv_t);
                    for w in bcc {
                        let xw = tens(x, w);
                        let tjw: Vec<TlElement> = bb.iter().map(|t| tens(t, w)).collect();
                        for (k, sk) in ba.iter().enumerate() {
                            for y in bc {
                                let lhs = tens(sk, y).inner(&xw).unwrap();
                                let rhs = tjw.iter().enumerate().fold(dom.zero(), |acc, (j, t)| {
                                    &acc + &(&mg[k][j] * &y.inner(t).unwrap())
                                });
                                if lhs != rhs {
                                    ok = false;
                                    bad.get_or_insert((lhs, rhs));
                                }
                            }
                        }
                    }
                }
                let (l, rr) = bad.map_or(("all equal".into(), "all equal".into()), |(p, q)| (p.to_string(), q.to_string()));
                cases.push(CaseResult::new(format!("exchange a={a} b={b} c={c}"), l, rr, ok));
            }
        }
    }

    // naturality against 1 ⊗ R ⊗ 1 and 1 ⊗ R* ⊗ 1 tensored with identities
    for total in 2..=r_max {
        for low in 0..=total - 2 {
            let c = total - 2 - low;
            for x in &bases[low] {
                for a in 0..=low {
                    let b = low - a;
                    for y in &bases[c] {
                        let lhs = insert_r(a, b + c, &tens(x, y)).unwrap();
                        let rhs = tens(&insert_r(a, b, x).unwrap(), y);
                        let lhs2 = insert_r(c + a, b, &tens(y, x)).unwrap();
                        let rhs2 = tens(y, &insert_r(a, b, x).unwrap());
                        let ok = quotient_equal(&lhs, &rhs) && quotient_equal(&lhs2, &rhs2);
                        cases.push(CaseResult::new(
                            format!("natural-R a={a} b={b} c={c} x={x} y={y}"),
                            format!("{lhs} | {lhs2}"),
                            format!("{rhs} | {rhs2}"),
                            ok,
                        ));
                    }
                }
            }
            for x in &bases[total - c] {
                for a in 0..=low {
                    let b = low - a;
                    for y in &bases[c] {
                        let lhs = insert_r_star(a, b + c, &tens(x, y)).unwrap();
                        let rhs = tens(&insert_r_star(a, b, x).unwrap(), y);
                        let lhs2 = insert_r_star(c + a, b, &tens(y, x)).unwrap();
                        let rhs2 = tens(y, &insert_r_star(a, b, x).unwrap());
                        let ok = quotient_equal(&lhs, &rhs) && quotient_equal(&lhs2, &rhs2);
                        cases.push(CaseResult::new(
                            format!("natural-R* a={a} b={b} c={c} x={x} y={y}"),
                            format!("{lhs} | {lhs2}"),
                            format!("{rhs} | {rhs2}"),
                            ok,
                        ));
                    }
                }
            }
        }
    }

    // the same identifications for the concrete generating arrows:
    // (1_a ⊗ R ⊗ 1_b) ⊗ 1_c = 1_a ⊗ R ⊗ 1_{b+c}, 1_c ⊗ (1_a ⊗ R ⊗ 1_b) = 1_{c+a} ⊗ R ⊗ 1_b
    let n = f.n();
    let rvec = build_r_vector(f);
    let id = |k| ConcreteOperator::identity(&dom, n, k);
    let placed = |a, b| id(a).kron(&dom, &rvec).kron(&dom, &id(b));
    for total in 2..=r_max {
        for a in 0..=total - 2 {
            for b in 0..=total - 2 - a {
                let c = total - 2 - a - b;
                let right = placed(a, b).kron(&dom, &id(c));
                let left = id(c).kron(&dom, &placed(a, b));
                let ok = right.equals(&placed(a, b + c)) && left.equals(&placed(c + a, b));
                let radj = right.adjoint().equals(&placed(a, b + c).adjoint());
                cases.push(CaseResult::new(
                    format!("concrete-placement a={a} b={b} c={c}"),
                    format!("{}x{}", right.m.len(), right.m[0].len()),
                    format!("{}x{}", right.m.len(), right.m[0].len()),
                    ok && radj,
                ));
            }
        }
    }

    // coordinates against concrete vectors: tensoring and R, R* insertions
    // preserve the inner products of planar arrows and planar vectors
    for level in 0..=r_max {
        let pairs = line_pairings(level);
        let arrows: Vec<TlElement> = pairs.iter().map(|p| planar_r_arrow(&dom, p)).collect();
        let vecs: Vec<Vec<Scalar>> = pairs.iter().map(|p| planar_vector(f, p)).collect();
        let mut ok = true;
        for (x, v) in arrows.iter().zip(&vecs) {
            for (y, w) in arrows.iter().zip(&vecs) {
                ok &= x.inner(y).unwrap() == vector_inner(&dom, v, w);
            }
        }
        cases.push(CaseResult::new(
            format!("planar-gram level={level}"),
            "coordinate Gram",
            "vector Gram",
            ok,
        ));
        for lo in 0..=level {
            let hi = level - lo;
            let (pl, ph) = (line_pairings(lo), line_pairings(hi));
            let mut ok = true;
            for p in &pl {
                for q in &ph {
                    let t = tens(&planar_r_arrow(&dom, p), &planar_r_arrow(&dom, q));
                    let tv = tensor_vectors(&planar_vector(f, p), &planar_vector(f, q));
                    for (y, w) in arrows.iter().zip(&vecs) {
                        ok &= t.inner(y).unwrap() == vector_inner(&dom, &tv, w);
                    }
                }
            }
            if !pl.is_empty() && !ph.is_empty() {
                cases.push(CaseResult::new(
                    format!("planar-tensor {lo}+{hi}"),
                    "⟨τ̃(A⊗B), C⟩",
                    "⟨v_A⊗v_B, v_C⟩",
                    ok,
                ));
            }
        }
        if level + 2 <= r_max {
            let up_pairs = line_pairings(level + 2);
            let up_arrows: Vec<TlElement> = up_pairs.iter().map(|p| planar_r_arrow(&dom, p)).collect();
            let up_vecs: Vec<Vec<Scalar>> = up_pairs.iter().map(|p| planar_vector(f, p)).collect();
            for a in 0..=level {
                let mut ok = true;
                for (x, v) in arrows.iter().zip(&vecs) {
                    let ix = insert_r(a, level - a, x).unwrap();
                    let iv = insert_r_vector(f, a, v);
                    for (y, w) in up_arrows.iter().zip(&up_vecs) {
                        ok &= ix.inner(y).unwrap() == vector_inner(&dom, &iv, w);
                        let cy = insert_r_star(a, level - a, y).unwrap();
                        let cw = contract_r_vector(f, a, w);
                        ok &= x.inner(&cy).unwrap() == vector_inner(&dom, v, &cw);
                    }
                }
                cases.push(CaseResult::new(
                    format!("planar-insert level={level} a={a}"),
                    "coordinates",
                    "concrete",
                    ok,
                ));
            }
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> CoeffDomain {
        CoeffDomain::parse(s).unwrap()
    }

    #[test]
    fn validation_examples() {
        let d = q("index=2");
        let f = FMatrix::parse(&d, "I2").unwrap();
        assert_eq!(f.sigma(), 1);
        assert_eq!(*f.d(), d.int(2));
        assert!(f.require_subfactor().is_ok());

        let d = q("index=17/4");
        let f = FMatrix::parse(&d, "t=2").unwrap();
        assert_eq!(*f.d(), d.rational(parse_rational("17/4").unwrap()));
        assert!(f.require_subfactor().is_ok());

        let p = FMatrix::parse(&d, "[[0,1],[-1,0]]").unwrap();
        assert_eq!(p.sigma(), -1);
        assert_eq!(p.require_subfactor(), Err(AofError::Pseudoreal));
        assert_eq!(FMatrix::parse(&d, "[[1,1],[1,1]]").unwrap_err(), AofError::Singular);
        assert_eq!(FMatrix::parse(&d, "[[1,2],[0,1]]").unwrap_err(), AofError::NotSelfConjugate);
        assert!(matches!(FMatrix::parse(&d, "[[1]]"), Err(AofError::Shape { .. })));
        assert!(matches!(
            FMatrix::parse(&d, "I3").unwrap().require_subfactor(),
            Err(AofError::IndexMismatch { .. })
        ));
    }

    #[test]
    fn r_vector_and_conjugate_equation() {
        let d = q("float:index=2.5");
        let f = FMatrix::parse(&d, "t=0.7").unwrap();
        let r = build_r_vector(&f);
        let v: Vec<Scalar> = r.m.iter().map(|row| row[0].clone()).collect();
        // t⁻¹ ψ₁ψ₂ + t ψ₂ψ₁
        assert_eq!(v[1], d.parse_scalar("1/0.7").unwrap());
        assert_eq!(v[2], d.parse_scalar("0.7").unwrap());
        assert!(v[0].is_zero() && v[3].is_zero());
        assert_eq!(vector_inner(&d, &v, &v), d.parse_scalar("0.49").unwrap() + d.parse_scalar("1/0.49").unwrap());
        let one = ConcreteOperator::identity(&d, 2, 1);
        assert!(conjugate_equation(&f).equals(&one));
        let e = q("index=2");
        let p = FMatrix::parse(&e, "[[0,1],[-1,0]]").unwrap();
        assert!(conjugate_equation(&p).equals(&one_in(&e).scale(&e.int(-1))));
    }

    fn one_in(d: &CoeffDomain) -> ConcreteOperator {
        ConcreteOperator::identity(d, 2, 1)
    }

    #[test]
    fn concrete_relations() {
        let d = q("index=17/4");
        let f = FMatrix::parse(&d, "t=2").unwrap();
        let e1 = concrete_e(&f, 1, 3).unwrap();
        let e2 = concrete_e(&f, 2, 3).unwrap();
        assert!(e1.compose(&d, &e1).unwrap().equals(&e1));
        assert!(e1.adjoint().equals(&e1));
        let dinv2 = f.d().pow(2).try_recip().unwrap();
        let e121 = e1.compose(&d, &e2).unwrap().compose(&d, &e1).unwrap();
        assert!(e121.equals(&e1.scale(&dinv2)));
        assert!(concrete_e(&f, 3, 3).is_err());
    }

    #[test]
    fn invariant_vector_dimensions() {
        let d = q("index=2");
        let f = FMatrix::parse(&d, "I2").unwrap();
        assert_eq!(invariant_vectors(&f, 0).len(), 1);
        assert_eq!(invariant_vectors(&f, 1).len(), 0);
        assert_eq!(invariant_vectors(&f, 2).len(), 1);
        assert_eq!(invariant_vectors(&f, 4).len(), 2);
        assert_eq!(invariant_vectors(&f, 6).len(), 5);
        let fl = q("float:index=2.5308");
        let f = FMatrix::parse(&fl, "t=0.7").unwrap();
        let iv = invariant_vectors(&f, 4);
        assert_eq!(iv.len(), 2);
        assert!(vector_inner(&fl, &iv.vectors[0], &iv.vectors[1]).is_zero());
    }

    #[test]
    fn quasitensor_small() {
        let d = q("index=2");
        let f = FMatrix::parse(&d, "I2").unwrap();
        let cases = verify_quasitensor(&f, 3);
        let bad: Vec<_> = cases.iter().filter(|c| !c.equal).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        let f3 = FMatrix::parse(&d, "I3").unwrap();
        assert!(!verify_quasitensor(&f3, 2)[0].equal);
    }
}
