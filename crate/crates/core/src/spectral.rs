//! The spectral *-algebra spanned by the generators `T̄ ⊗ ξ`.
//!
//! An element is a finite sum of `c · (D̄ ⊗ ψ_K)` with `D` a TL diagram at
//! level `r` and `K` a multi-index of length `r`. The bar is conjugate
//! linear, so `(Σ t_D D)‾ ⊗ (Σ x_K ψ_K) = Σ conj(t_D) x_K (D̄ ⊗ ψ_K)`.
//! Relations between levels are not applied eagerly; see [`SpectralAlgebra::apply_r_relation`].

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::aof::{contract_r_vector, insert_r_vector, planar_vector, vector_inner, AofError, FMatrix};
use crate::certificate::CaseResult;
use crate::coords::{insert_r, insert_r_star, line_pairings, planar_r_arrow, tensor_arrows};
use crate::linalg::{inverse, pivot_columns, Matrix};
use crate::scalar::{CoeffDomain, Scalar};
use crate::tl::{basis, Diagram, TlElement};

/// Default level cutoff for products.
pub const DEFAULT_MAX_LEVEL: usize = 6;

/// The cutoff, overridable through `TL_MAX_LEVEL`.
pub fn configured_max_level() -> usize {
    std::env::var("TL_MAX_LEVEL")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_LEVEL)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("level {level} exceeds the configured cutoff {max}")]
    LevelExceeded { level: usize, max: usize },
    #[error("element is not homogeneous of level {0}")]
    WrongLevel(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("multi-index entry {k} out of range for dimension {n}")]
    BadIndex { k: usize, n: usize },
    #[error(transparent)]
    Aof(#[from] AofError),
}

/// `(level, diagram, multi-index)`; the level is kept first so terms sort
/// by level.
pub type TermKey = (usize, Diagram, Vec<u8>);

#[derive(Clone, Debug)]
pub struct SpectralElement {
    domain: CoeffDomain,
    n: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

impl SpectralElement {
    pub fn zero(domain: &CoeffDomain, n: usize) -> Self {
        Self {
            domain: domain.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `c` times the unit (level 0).
    pub fn scalar(domain: &CoeffDomain, n: usize, c: Scalar) -> Self {
        let mut x = Self::zero(domain, n);
        x.add_term(Diagram::identity(0), Vec::new(), c);
        x
    }

    pub fn unit(domain: &CoeffDomain, n: usize) -> Self {
        Self::scalar(domain, n, domain.one())
    }

    /// The generator `D̄ ⊗ ψ_K` (0-based indices).
    pub fn generator(domain: &CoeffDomain, n: usize, d: Diagram, idx: Vec<u8>) -> Result<Self, SpectralError> {
        if idx.len() != d.strands() {
            return Err(SpectralError::WrongLevel(d.strands()));
        }
        if let Some(&k) = idx.iter().find(|&&k| k as usize >= n) {
            return Err(SpectralError::BadIndex { k: k as usize, n });
        }
        let mut x = Self::zero(domain, n);
        x.add_term(d, idx, domain.one());
        Ok(x)
    }

    /// `T̄ ⊗ ξ` with `ξ` given by dense coordinates over multi-indices.
    pub fn from_parts(t: &TlElement, xi: &[Scalar], n: usize) -> Result<Self, SpectralError> {
        let r = t.strands();
        if xi.len() != n.pow(r as u32) {
            return Err(SpectralError::WrongLevel(r));
        }
        let domain = t.domain();
        let mut out = Self::zero(domain, n);
        for (d, c) in t.terms() {
            let cb = c.conj();
            for (k, x) in xi.iter().enumerate() {
                if x.is_exactly_zero() {
                    continue;
                }
                out.add_term(d.clone(), digits(k, n, r), &cb * x);
            }
        }
        Ok(out)
    }

    pub fn add_term(&mut self, d: Diagram, idx: Vec<u8>, c: Scalar) {
        if c.is_exactly_zero() {
            return;
        }
        let key = (d.strands(), d, idx);
        let v = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn domain(&self) -> &CoeffDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Scalar::is_zero)
    }

    pub fn max_level(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Levels present, with the homogeneous component at each.
    pub fn levels(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.domain, self.n);
        for ((_, d, k), x) in &self.terms {
            out.add_term(d.clone(), k.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((_, d, k), x) in &other.terms {
            out.add_term(d.clone(), k.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.domain.int(-1)))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Group by multi-index: `Σ_K T_K‾ ⊗ ψ_K` with `T_K` a TL element.
    pub fn by_index(&self, level: usize) -> BTreeMap<Vec<u8>, TlElement> {
        let mut out: BTreeMap<Vec<u8>, TlElement> = BTreeMap::new();
        for ((l, d, k), c) in &self.terms {
            if *l != level {
                continue;
            }
            out.entry(k.clone())
                .or_insert_with(|| TlElement::zero(&self.domain, level))
                .add_term(d.clone(), c.conj());
        }
        out
    }

    /// Group by diagram: `Σ_D D̄ ⊗ ξ_D` with `ξ_D` dense.
    pub fn by_diagram(&self, level: usize) -> BTreeMap<Diagram, Vec<Scalar>> {
        let mut out: BTreeMap<Diagram, Vec<Scalar>> = BTreeMap::new();
        let dim = self.n.pow(level as u32);
        for ((l, d, k), c) in &self.terms {
            if *l != level {
                continue;
            }
            let v = out
                .entry(d.clone())
                .or_insert_with(|| vec![self.domain.zero(); dim]);
            let i = flatten(k, self.n);
            v[i] = &v[i] + c;
        }
        out
    }
}

impl PartialEq for SpectralElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl std::fmt::Display for SpectralElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((_, d, k), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            // the diagram as a loop-free product of U_i = λ e_i
            let word = crate::tl::words::render_letters(&crate::tl::words::diagram_word(d)).replace('e', "U");
            let idx: String = k.iter().map(|x| format!("ψ{}", x + 1)).collect();
            let idx = if idx.is_empty() { "1".to_string() } else { idx };
            write!(f, "({c})·[{word}]‾⊗{idx}")?;
        }
        Ok(())
    }
}

pub(crate) fn digits(mut k: usize, n: usize, r: usize) -> Vec<u8> {
    let mut out = vec![0u8; r];
    for slot in out.iter_mut().rev() {
        *slot = (k % n) as u8;
        k /= n;
    }
    out
}

pub(crate) fn flatten(idx: &[u8], n: usize) -> usize {
    idx.iter().fold(0, |acc, &k| acc * n + k as usize)
}

/// Which side of the conjugate-equation pair a relation removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationSide {
    /// `S̄ ⊗ (1 ⊗ R* ⊗ 1)η = insert_R(S)‾ ⊗ η`: the input's commutant part
    /// must be `insert_R(r, s, S)`; the output carries `(1 ⊗ R* ⊗ 1)η`.
    RStar,
    /// `S'‾ ⊗ (1 ⊗ R ⊗ 1)η' = insert_R*(S')‾ ⊗ η'`: the input's vector
    /// part must lie in the image of `1 ⊗ R ⊗ 1`.
    R,
}

/// Per-level data for the invariant state: `h(D̄ ⊗ ψ_K) = coeff[D][K]`.
struct LevelState {
    coeff: HashMap<Diagram, Vec<Scalar>>,
}

/// Context for computations with a fixed F: product cutoff, caches.
pub struct SpectralAlgebra {
    f: FMatrix,
    max_level: usize,
    states: Vec<OnceLock<LevelState>>,
    tensors: Mutex<HashMap<(Diagram, Diagram), Arc<TlElement>>>,
}

/// Monomial in the matrix coefficients `u_{ij}` (0-based pairs).
pub type Monomial = Vec<(u8, u8)>;

/// `β(a) = Σ_w a_w ⊗ w`, keyed by monomial.
#[derive(Clone, Debug)]
pub struct Coaction {
    pub terms: BTreeMap<Monomial, SpectralElement>,
}

impl SpectralAlgebra {
    pub fn new(f: FMatrix) -> Self {
        Self::with_max_level(f, configured_max_level())
    }

    pub fn with_max_level(f: FMatrix, max_level: usize) -> Self {
        Self {
            f,
            max_level,
            states: (0..=max_level).map(|_| OnceLock::new()).collect(),
            tensors: Mutex::new(HashMap::new()),
        }
    }

    pub fn f(&self) -> &FMatrix {
        &self.f
    }

    pub fn domain(&self) -> &CoeffDomain {
        self.f.domain()
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// All generators `D̄ ⊗ ψ_K` at level `r`.
    pub fn generators(&self, r: usize) -> Vec<SpectralElement> {
        let dom = self.domain();
        let n = self.n();
        let mut out = Vec::new();
        for d in &basis(r).diagrams {
            for k in 0..n.pow(r as u32) {
                out.push(SpectralElement::generator(dom, n, d.clone(), digits(k, n, r)).expect("valid generator"));
            }
        }
        out
    }

    fn tensor(&self, a: &Diagram, b: &Diagram) -> Arc<TlElement> {
        let key = (a.clone(), b.clone());
        if let Some(t) = self.tensors.lock().expect("cache lock").get(&key) {
            return t.clone();
        }
        let dom = self.domain();
        let x = TlElement::from_diagram(dom, a.clone(), dom.one());
        let y = TlElement::from_diagram(dom, b.clone(), dom.one());
        let t = Arc::new(tensor_arrows(&x, &y).expect("levels valid"));
        self.tensors.lock().expect("cache lock").insert(key, t.clone());
        t
    }

    /// `(T̄ ⊗ ξ)(T̄' ⊗ ξ') = (T p_{r,s} T')‾ ⊗ ξξ'`.
    pub fn product(&self, a: &SpectralElement, b: &SpectralElement) -> Result<SpectralElement, SpectralError> {
        let level = a.max_level() + b.max_level();
        if level > self.max_level {
            return Err(SpectralError::LevelExceeded {
                level,
                max: self.max_level,
            });
        }
        let mut out = SpectralElement::zero(self.domain(), self.n());
        for ((_, d1, k1), c1) in &a.terms {
            for ((_, d2, k2), c2) in &b.terms {
                let t = self.tensor(d1, d2);
                let c = c1 * c2;
                let mut idx = k1.clone();
                idx.extend(k2);
                for (e, ce) in t.terms() {
                    out.add_term(e.clone(), idx.clone(), &ce.conj() * &c);
                }
            }
        }
        Ok(out)
    }

    /// `(T̄ ⊗ ξ_1⋯ξ_r)* = (T*)‾ ⊗ jξ_r⋯jξ_1`, extended antilinearly.
    pub fn star(&self, a: &SpectralElement) -> SpectralElement {
        let n = self.n();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|k| self.f.j_basis(k)).collect();
        let mut out = SpectralElement::zero(self.domain(), n);
        for ((r, d, k), c) in &a.terms {
            let flipped = d.flip();
            let cc = c.conj();
            // expand jψ_{k_r} ⊗ ⋯ ⊗ jψ_{k_1}
            for target in 0..n.pow(*r as u32) {
                let t = digits(target, n, *r);
                let mut coef = cc.clone();
                for (pos, &tk) in t.iter().enumerate() {
                    let src = k[r - 1 - pos] as usize;
                    coef = &coef * &cols[src][tk as usize];
                    if coef.is_exactly_zero() {
                        break;
                    }
                }
                out.add_term(flipped.clone(), t, coef);
            }
        }
        out
    }

    /// Rewrite a level `r + s + 2` element to level `r + s` by one of the
    /// R-relations; checks the precondition exactly.
    pub fn apply_r_relation(
        &self,
        r: usize,
        s: usize,
        a: &SpectralElement,
        side: RelationSide,
    ) -> Result<SpectralElement, SpectralError> {
        let level = r + s + 2;
        if a.levels().iter().any(|&l| l != level) {
            return Err(SpectralError::WrongLevel(level));
        }
        let dom = self.domain();
        let n = self.n();
        let mut out = SpectralElement::zero(dom, n);
        match side {
            RelationSide::RStar => {
                let beta_inv = dom.beta().try_recip().expect("nonzero index");
                for (k, t) in a.by_index(level) {
                    let s_el = insert_r_star(r, s, &t).expect("levels valid").scale(&beta_inv);
                    let back = insert_r(r, s, &s_el).expect("levels valid");
                    if !back.equals(&t) {
                        return Err(SpectralError::Precondition(format!(
                            "commutant part at ψ-index {k:?} is not in the image of insert_R({r},{s})"
                        )));
                    }
                    let mut e = vec![dom.zero(); n.pow(level as u32)];
                    e[flatten(&k, n)] = dom.one();
                    let v = contract_r_vector(&self.f, r, &e);
                    out = out.add(&SpectralElement::from_parts(&s_el, &v, n)?);
                }
            }
            RelationSide::R => {
                let d_inv = self.f.d().try_recip().expect("nonzero dimension");
                for (d, xi) in a.by_diagram(level) {
                    let eta: Vec<Scalar> = contract_r_vector(&self.f, r, &xi).iter().map(|x| x * &d_inv).collect();
                    let back = insert_r_vector(&self.f, r, &eta);
                    if back.iter().zip(&xi).any(|(x, y)| x != y) {
                        return Err(SpectralError::Precondition(format!(
                            "vector part is not in the image of 1⊗R⊗1 at position {r}"
                        )));
                    }
                    let t = TlElement::from_diagram(dom, d, dom.one());
                    let low = insert_r_star(r, s, &t).expect("levels valid");
                    out = out.add(&SpectralElement::from_parts(&low, &eta, n)?);
                }
            }
        }
        Ok(out)
    }

    fn level_state(&self, r: usize) -> Result<&LevelState, SpectralError> {
        let cell = self.states.get(r).ok_or(SpectralError::LevelExceeded {
            level: r,
            max: self.max_level,
        })?;
        Ok(cell.get_or_init(|| self.build_state(r)))
    }

    // h(D̄ ⊗ ψ_K) = Σ ⟨D, A_π⟩ (G⁻¹)_{πσ} conj(v_σ[K]) over an independent
    // set of planar pairings, where A_π is the planar arrow and v_π the
    // planar vector, and G the Gram matrix of the v_π.
    fn build_state(&self, r: usize) -> LevelState {
        let dom = self.domain();
        let pairs = line_pairings(r);
        let vecs: Vec<Vec<Scalar>> = pairs.iter().map(|p| planar_vector(&self.f, p)).collect();
        let gram: Matrix = vecs
            .iter()
            .map(|a| vecs.iter().map(|b| vector_inner(dom, a, b)).collect())
            .collect();
        let keep = pivot_columns(dom, &gram);
        let g: Matrix = keep.iter().map(|&i| keep.iter().map(|&j| gram[i][j].clone()).collect()).collect();
        let ginv = inverse(dom, &g).unwrap_or_default();
        let arrows: Vec<TlElement> = keep.iter().map(|&i| planar_r_arrow(dom, &pairs[i])).collect();
        let vecs: Vec<&Vec<Scalar>> = keep.iter().map(|&i| &vecs[i]).collect();
        let dim = self.n().pow(r as u32);
        // w_π[K] = Σ_σ (G⁻¹)_{πσ} conj(v_σ[K])
        let w: Vec<Vec<Scalar>> = (0..keep.len())
            .map(|p| {
                (0..dim)
                    .map(|k| {
                        (0..keep.len()).fold(dom.zero(), |acc, s| &acc + &(&ginv[p][s] * &vecs[s][k].conj()))
                    })
                    .collect()
            })
            .collect();
        let coeff = basis(r)
            .diagrams
            .par_iter()
            .map(|d| {
                let de = TlElement::from_diagram(dom, d.clone(), dom.one());
                let ips: Vec<Scalar> = arrows.iter().map(|a| de.inner(a).expect("same level")).collect();
                let row: Vec<Scalar> = (0..dim)
                    .map(|k| {
                        ips.iter()
                            .zip(&w)
                            .fold(dom.zero(), |acc, (ip, wp)| &acc + &(ip * &wp[k]))
                    })
                    .collect();
                (d.clone(), row)
            })
            .collect();
        LevelState { coeff }
    }

    /// The invariant state, the projection onto the level-0 scalars through
    /// the invariant vectors.
    pub fn invariant_state(&self, a: &SpectralElement) -> Result<Scalar, SpectralError> {
        let dom = self.domain();
        let n = self.n();
        let mut acc = dom.zero();
        for ((r, d, k), c) in &a.terms {
            let st = self.level_state(*r)?;
            let h = &st.coeff[d][flatten(k, n)];
            if !h.is_exactly_zero() {
                acc = &acc + &(c * h);
            }
        }
        Ok(acc)
    }

    /// `β(D̄ ⊗ ψ_K) = Σ_J (D̄ ⊗ ψ_J) ⊗ u_{j_1 k_1}⋯u_{j_r k_r}`.
    pub fn coaction(&self, a: &SpectralElement) -> Coaction {
        coaction_expand(a)
    }
}

pub fn coaction_expand(a: &SpectralElement) -> Coaction {
    let n = a.n;
    let mut terms: BTreeMap<Monomial, SpectralElement> = BTreeMap::new();
    for ((r, d, k), c) in &a.terms {
        for j in 0..n.pow(*r as u32) {
            let jj = digits(j, n, *r);
            let word: Monomial = jj.iter().zip(k).map(|(&x, &y)| (x, y)).collect();
            terms
                .entry(word)
                .or_insert_with(|| SpectralElement::zero(&a.domain, n))
                .add_term(d.clone(), jj, c.clone());
        }
    }
    Coaction { terms }
}

impl Coaction {
    /// Substitute `u_{ij} ↦ δ_{ij}`.
    pub fn counit(&self, domain: &CoeffDomain, n: usize) -> SpectralElement {
        let mut out = SpectralElement::zero(domain, n);
        for (w, x) in &self.terms {
            if w.iter().all(|(i, j)| i == j) {
                out = out.add(x);
            }
        }
        out
    }

    /// `(x ⊗ w)(y ⊗ w') = xy ⊗ ww'`.
    pub fn product(&self, alg: &SpectralAlgebra, other: &Self) -> Result<Self, SpectralError> {
        let mut terms: BTreeMap<Monomial, SpectralElement> = BTreeMap::new();
        for (w1, x) in &self.terms {
            for (w2, y) in &other.terms {
                let mut w = w1.clone();
                w.extend(w2);
                let xy = alg.product(x, y)?;
                let slot = terms
                    .entry(w)
                    .or_insert_with(|| SpectralElement::zero(alg.domain(), alg.n()));
                *slot = slot.add(&xy);
            }
        }
        Ok(Self { terms })
    }

    pub fn equals(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| match (self.terms.get(k), other.terms.get(k)) {
            (Some(a), Some(b)) => a.equals(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

/// `h(ab) = h(ba)` over all generator pairs with levels ≤ `r_max`.
pub fn verify_traciality(alg: &SpectralAlgebra, r_max: usize) -> Vec<CaseResult> {
    if let Err(e) = alg.f().require_subfactor() {
        return vec![CaseResult::new("subfactor-mode", alg.f().d(), alg.domain().beta(), false).with_detail(e.to_string())];
    }
    let gens: Vec<SpectralElement> = (0..=r_max).flat_map(|r| alg.generators(r)).collect();
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (i..gens.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&gens[i], &gens[j]);
            let label = format!("{a} | {b}");
            let run = || -> Result<(Scalar, Scalar), SpectralError> {
                Ok((
                    alg.invariant_state(&alg.product(a, b)?)?,
                    alg.invariant_state(&alg.product(b, a)?)?,
                ))
            };
            match run() {
                Ok((x, y)) => {
                    let eq = x == y;
                    CaseResult::new(label, &x, &y, eq)
                }
                Err(e) => CaseResult::new(label, "", "", false).with_detail(e.to_string()),
            }
        })
        .collect()
}

/// Associativity on all generator triples with total level ≤ `total`.
pub fn verify_associativity(alg: &SpectralAlgebra, total: usize) -> Vec<CaseResult> {
    let gens: Vec<Vec<SpectralElement>> = (0..=total).map(|r| alg.generators(r)).collect();
    let mut shapes = Vec::new();
    for r1 in 0..=total {
        for r2 in 0..=total - r1 {
            for r3 in 0..=total - r1 - r2 {
                shapes.push((r1, r2, r3));
            }
        }
    }
    shapes
        .par_iter()
        .map(|&(r1, r2, r3)| {
            let mut count = 0usize;
            let mut bad = None;
            for a in &gens[r1] {
                for b in &gens[r2] {
                    let ab = alg.product(a, b).expect("within cutoff");
                    for c in &gens[r3] {
                        count += 1;
                        let left = alg.product(&ab, c).expect("within cutoff");
                        let right = alg.product(a, &alg.product(b, c).expect("within cutoff")).expect("within cutoff");
                        if !left.equals(&right) && bad.is_none() {
                            bad = Some((format!("{a} · {b} · {c}"), left, right));
                        }
                    }
                }
            }
            let label = format!("levels ({r1},{r2},{r3}), {count} triples");
            match bad {
                None => CaseResult::new(label, "(ab)c", "a(bc)", true),
                Some((w, l, r)) => CaseResult::new(label, l, r, false).with_detail(w),
            }
        })
        .collect()
}

/// Star involutive and antimultiplicative on all generator pairs with
/// total level ≤ `total`.
pub fn verify_star(alg: &SpectralAlgebra, total: usize) -> Vec<CaseResult> {
    let sigma = alg.f().sigma();
    let gens: Vec<Vec<SpectralElement>> = (0..=total).map(|r| alg.generators(r)).collect();
    let mut cases = Vec::new();
    for (r, g) in gens.iter().enumerate() {
        let sign = alg.domain().int(if sigma == -1 && r % 2 == 1 { -1 } else { 1 });
        let ok = g.iter().all(|a| alg.star(&alg.star(a)).equals(&a.scale(&sign)));
        cases.push(CaseResult::new(format!("involution level={r}"), "a**", "σ^r a", ok));
    }
    let mut shapes = Vec::new();
    for r1 in 0..=total {
        for r2 in 0..=total - r1 {
            shapes.push((r1, r2));
        }
    }
    let anti: Vec<CaseResult> = shapes.par_iter().map(|&(r1, r2)| {
        let mut bad = None;
        for a in &gens[r1] {
            for b in &gens[r2] {
                let lhs = alg.star(&alg.product(a, b).expect("within cutoff"));
                let rhs = alg.product(&alg.star(b), &alg.star(a)).expect("within cutoff");
                if !lhs.equals(&rhs) && bad.is_none() {
                    bad = Some((lhs, rhs));
                }
            }
        }
        let label = format!("antimultiplicative levels ({r1},{r2})");
        match bad {
            None => CaseResult::new(label, "(ab)*", "b*a*", true),
            Some((l, r)) => CaseResult::new(label, l, r, false),
        }
    }).collect();
    cases.extend(anti);
    cases
}

/// Both relation directions agree with the coordinate insertions, and the
/// invariant state is constant along them, for all `r + s ≤ total`.
///
/// For `S` in the level-`(r+s)` diagram basis and each multi-index `K`, the
/// element `insert_R(S)‾ ⊗ (1⊗R⊗1)ψ_K` satisfies both preconditions; the
/// R*-side gives `d·S̄⊗ψ_K` and the R-side `insert_R*(insert_R(S))‾ ⊗ ψ_K`.
pub fn verify_relations(alg: &SpectralAlgebra, total: usize) -> Vec<CaseResult> {
    let dom = alg.domain().clone();
    let n = alg.n();
    let mut shapes = Vec::new();
    for low in 0..=total {
        for r in 0..=low {
            shapes.push((r, low - r));
        }
    }
    shapes
        .par_iter()
        .map(|&(r, s)| {
            let low = r + s;
            let mut bad: Option<String> = None;
            for d in &basis(low).diagrams {
                let sd = TlElement::from_diagram(&dom, d.clone(), dom.one());
                let up = insert_r(r, s, &sd).expect("levels valid");
                for k in 0..n.pow(low as u32) {
                    let mut e = vec![dom.zero(); n.pow(low as u32)];
                    e[k] = dom.one();
                    let v = insert_r_vector(alg.f(), r, &e);
                    let x = SpectralElement::from_parts(&up, &v, n).expect("valid parts");
                    let base = SpectralElement::from_parts(&sd, &e, n).expect("valid parts");
                    let via_star = alg.apply_r_relation(r, s, &x, RelationSide::RStar);
                    let via_r = alg.apply_r_relation(r, s, &x, RelationSide::R);
                    let check = match (via_star, via_r) {
                        (Ok(a), Ok(b)) => {
                            let want = base.scale(alg.f().d());
                            let h = alg.invariant_state(&x).ok();
                            let ha = alg.invariant_state(&a).ok();
                            if !a.equals(&want) {
                                Err(format!("R*-side {a} ≠ {want}"))
                            } else if !b.equals(&want) {
                                Err(format!("R-side {b} ≠ {want}"))
                            } else if h != ha {
                                Err("invariant state changed under the relation".to_string())
                            } else {
                                Ok(())
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
                    };
                    if let Err(msg) = check {
                        bad.get_or_insert(msg);
                    }
                }
            }
            let label = format!("relations r={r} s={s}");
            match bad {
                None => CaseResult::new(label, "both sides", "d·S̄⊗η", true),
                Some(m) => CaseResult::new(label, "", "", false).with_detail(m),
            }
        })
        .collect()
}

/// Counit law and formal multiplicativity of the coaction on all generator
/// pairs with levels ≤ `r_max`.
pub fn verify_coaction(alg: &SpectralAlgebra, r_max: usize) -> Vec<CaseResult> {
    let gens: Vec<SpectralElement> = (0..=r_max).flat_map(|r| alg.generators(r)).collect();
    let dom = alg.domain();
    let n = alg.n();
    let counit_ok = gens.iter().all(|a| coaction_expand(a).counit(dom, n).equals(a));
    let mut cases = vec![CaseResult::new("counit", "(id⊗ε)β(a)", "a", counit_ok)];
    let mult: Vec<CaseResult> = (0..gens.len())
        .into_par_iter()
        .map(|i| {
            let a = &gens[i];
            let ba = coaction_expand(a);
            let ok = gens.iter().all(|b| {
                let lhs = coaction_expand(&alg.product(a, b).expect("within cutoff"));
                let rhs = ba.product(alg, &coaction_expand(b)).expect("within cutoff");
                lhs.equals(&rhs)
            });
            CaseResult::new(format!("multiplicative {a}"), "β(ab)", "β(a)β(b)", ok)
        })
        .collect();
    cases.extend(mult);
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kac() -> SpectralAlgebra {
        let d = CoeffDomain::parse("index=2").unwrap();
        SpectralAlgebra::with_max_level(FMatrix::parse(&d, "I2").unwrap(), 6)
    }

    fn non_kac() -> SpectralAlgebra {
        let d = CoeffDomain::parse("index=17/4").unwrap();
        SpectralAlgebra::with_max_level(FMatrix::parse(&d, "t=2").unwrap(), 6)
    }

    fn psi(alg: &SpectralAlgebra, k: u8) -> SpectralElement {
        SpectralElement::generator(alg.domain(), alg.n(), Diagram::identity(1), vec![k]).unwrap()
    }

    #[test]
    fn product_examples() {
        let alg = non_kac();
        let d = alg.domain();
        let p = alg.product(&psi(&alg, 0), &psi(&alg, 1)).unwrap();
        // (λe₁)‾ ⊗ ψ₁ψ₂ = Ū₁ ⊗ ψ₁ψ₂
        let want = SpectralElement::generator(d, 2, Diagram::cup_cap(2, 1).unwrap(), vec![0, 1]).unwrap();
        assert_eq!(p, want);
        let u = SpectralElement::unit(d, 2);
        let x = psi(&alg, 1).add(&p);
        assert_eq!(alg.product(&u, &x).unwrap(), x);
        assert_eq!(alg.product(&x, &u).unwrap(), x);
        let small = SpectralAlgebra::with_max_level(alg.f().clone(), 1);
        assert!(matches!(
            small.product(&psi(&alg, 0), &psi(&alg, 0)),
            Err(SpectralError::LevelExceeded { level: 2, max: 1 })
        ));
    }

    #[test]
    fn star_examples() {
        let alg = non_kac();
        let d = alg.domain();
        // (1̄⊗ψ₁)* = 1̄ ⊗ t⁻¹ψ₂ with t = 2
        let s = alg.star(&psi(&alg, 0));
        assert_eq!(s, psi(&alg, 1).scale(&d.rational(crate::scalar::parse_rational("1/2").unwrap())));
        let c = SpectralElement::scalar(d, 2, d.int(5));
        assert_eq!(alg.star(&c), c);
        for a in alg.generators(2) {
            assert_eq!(alg.star(&alg.star(&a)), a);
        }
    }

    #[test]
    fn state_examples() {
        for alg in [kac(), non_kac()] {
            let d = alg.domain().clone();
            assert!(alg.invariant_state(&SpectralElement::unit(&d, 2)).unwrap().is_one());
            assert!(alg.invariant_state(&psi(&alg, 0)).unwrap().is_zero());
            let a = psi(&alg, 0);
            let h = alg.invariant_state(&alg.product(&alg.star(&a), &a).unwrap()).unwrap();
            assert_eq!(h, alg.f().d().try_recip().unwrap());
        }
    }

    #[test]
    fn relation_examples() {
        let alg = non_kac();
        let d = alg.domain().clone();
        // 1̄ ⊗ R_u at level 2, R-side: insert_R*(1)‾ ⊗ 1 = λ̄·(unit)... and the
        // vector part contracts to d⁻¹·‖R‖² = 1
        let r = crate::aof::build_r_vector(alg.f());
        let rv: Vec<Scalar> = r.m.iter().map(|row| row[0].clone()).collect();
        let x = SpectralElement::from_parts(&TlElement::identity(&d, 2), &rv, 2).unwrap();
        let low = alg.apply_r_relation(0, 0, &x, RelationSide::R).unwrap();
        assert_eq!(low, SpectralElement::scalar(&d, 2, d.lambda()));
        // λ·1 at level 2 is insert_R(1); the R*-side contracts R_u to d
        let y = SpectralElement::from_parts(&TlElement::scalar(&d, 2, d.lambda()), &rv, 2).unwrap();
        let low = alg.apply_r_relation(0, 0, &y, RelationSide::RStar).unwrap();
        assert_eq!(low, SpectralElement::scalar(&d, 2, alg.f().d().clone()));
        // precondition failures
        let g = SpectralElement::generator(&d, 2, Diagram::identity(2), vec![0, 0]).unwrap();
        assert!(matches!(
            alg.apply_r_relation(0, 0, &g, RelationSide::R),
            Err(SpectralError::Precondition(_))
        ));
        assert!(alg.apply_r_relation(1, 0, &g, RelationSide::R).is_err());
        assert!(verify_relations(&alg, 2).iter().all(|c| c.equal));
    }

    #[test]
    fn coaction_examples() {
        let alg = kac();
        let d = alg.domain().clone();
        let b = coaction_expand(&SpectralElement::scalar(&d, 2, d.int(3)));
        assert_eq!(b.terms.len(), 1);
        assert!(b.terms.contains_key(&Vec::new()));
        let b = coaction_expand(&psi(&alg, 0));
        assert_eq!(b.terms.len(), 2);
        assert_eq!(b.terms[&vec![(1, 0)]], psi(&alg, 1));
        assert!(verify_coaction(&alg, 1).iter().all(|c| c.equal));
    }

    #[test]
    fn small_sweeps() {
        let alg = non_kac();
        assert!(verify_associativity(&alg, 3).iter().all(|c| c.equal));
        assert!(verify_star(&alg, 3).iter().all(|c| c.equal));
        let k = kac();
        let bad: Vec<_> = verify_traciality(&k, 2).into_iter().filter(|c| !c.equal).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
