//! Arrows of the bimodule tensor category in relative-commutant
//! coordinates.
//!
//! An arrow `ι → M^{⊗r}` is represented by its coordinate in TL_r (level 0
//! is TL_0, the scalars). The operations here are tensoring of arrows and
//! left composition with `1 ⊗ R ⊗ 1` and `1 ⊗ R* ⊗ 1`.

use rayon::prelude::*;

use crate::jones::{build_p, JonesError};
use crate::linalg::{gram_schmidt, pivot_columns, Matrix};
use crate::markov::gram_exponents;
use crate::scalar::{CoeffDomain, Scalar};
use crate::tl::{basis, TlElement};

/// Largest level for which arrow bases are built.
pub const MAX_ARROW_LEVEL: usize = 6;

/// `S ⊗ T ↦ S · p_{r,s} · T` in TL_{r+s}.
pub fn tensor_arrows(a: &TlElement, b: &TlElement) -> Result<TlElement, JonesError> {
    let (r, s) = (a.strands(), b.strands());
    let d = a.domain();
    let n = r + s;
    let p = build_p(d, 0, r, s, n)?;
    Ok(&(&a.extend_right(s) * &p) * &b.extend_right(r))
}

/// Coordinate of `(1_{M^{⊗r}} ⊗ R ⊗ 1_{M^{⊗s}}) ∘ ζ`, three cases on
/// the sign of `r - s`.
pub fn insert_r(r: usize, s: usize, zeta: &TlElement) -> Result<TlElement, JonesError> {
    check_level(zeta, r + s)?;
    let d = zeta.domain();
    let n = r + s + 2;
    let z = zeta.extend_right(2);
    let out = if r > s {
        &z * &build_p(d, 2 * s, r - s, 2, n)?
    } else if r == s {
        z
    } else {
        &build_p(d, 2 * r, 2, s - r, n)? * &z
    };
    Ok(out.scale(&d.lambda()))
}

/// Coordinate of `(1_{M^{⊗r}} ⊗ R* ⊗ 1_{M^{⊗s}}) ∘ ζ`.
pub fn insert_r_star(r: usize, s: usize, zeta: &TlElement) -> Result<TlElement, JonesError> {
    check_level(zeta, r + s + 2)?;
    let d = zeta.domain();
    let n = r + s + 2;
    let inner = if r > s {
        zeta * &build_p(d, 2 * s, r - s, 2, n)?.star()
    } else if r == s {
        zeta.clone()
    } else {
        &build_p(d, 2 * r, 2, s - r, n)?.star() * zeta
    };
    Ok(inner.composite_expectation(2)?.scale(&d.lambda()))
}

/// The antiunitary conjugation `T ↦ T*`.
pub fn conjugate_arrow(t: &TlElement) -> TlElement {
    t.star()
}

/// Trace inner product at a common level.
pub fn level_inner(a: &TlElement, b: &TlElement) -> Result<Scalar, JonesError> {
    Ok(a.inner(b)?)
}

fn check_level(x: &TlElement, level: usize) -> Result<(), JonesError> {
    if x.strands() != level {
        return Err(JonesError::AmbientTooSmall {
            n: x.strands(),
            need: level,
        });
    }
    Ok(())
}

/// Coordinates of an element in the diagram basis of its level.
pub fn coordinates(x: &TlElement) -> Vec<Scalar> {
    let b = basis(x.strands());
    let mut v = vec![x.domain().zero(); b.len()];
    for (d, c) in x.terms() {
        v[b.index_of(d).expect("diagram in basis")] = c.clone();
    }
    v
}

/// Keep a linearly independent subfamily (first occurrences win).
pub fn independent(domain: &CoeffDomain, family: Vec<TlElement>) -> Vec<TlElement> {
    if family.is_empty() {
        return family;
    }
    let cols: Vec<Vec<Scalar>> = family.iter().map(coordinates).collect();
    let rows = cols[0].len();
    let m: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let piv = pivot_columns(domain, &m);
    let mut keep = vec![false; family.len()];
    for p in piv {
        keep[p] = true;
    }
    family
        .into_iter()
        .zip(keep)
        .filter_map(|(x, k)| k.then_some(x))
        .collect()
}

/// Arrows generated from the level-0 and level-1 units by tensoring,
/// `insert_R`, and `insert_R ∘ insert_R*`, reduced to an independent family.
pub fn generated_arrows(domain: &CoeffDomain, r: usize) -> Vec<TlElement> {
    let mut levels: Vec<Vec<TlElement>> = vec![vec![TlElement::identity(domain, 0)]];
    let unit1 = TlElement::identity(domain, 1);
    for l in 1..=r {
        let mut fam = Vec::new();
        for x in &levels[l - 1] {
            fam.push(tensor_arrows(x, &unit1).expect("levels match"));
            fam.push(tensor_arrows(&unit1, x).expect("levels match"));
        }
        if l >= 2 {
            for x in &levels[l - 2] {
                for a in 0..=l - 2 {
                    fam.push(insert_r(a, l - 2 - a, x).expect("levels match"));
                }
            }
        }
        let mut fam = independent(domain, fam);
        while l >= 2 {
            let mut more = fam.clone();
            for x in &fam {
                for a in 0..=l - 2 {
                    let down = insert_r_star(a, l - 2 - a, x).expect("levels match");
                    more.push(insert_r(a, l - 2 - a, &down).expect("levels match"));
                }
            }
            let next = independent(domain, more);
            if next.len() == fam.len() {
                break;
            }
            fam = next;
        }
        levels.push(fam);
    }
    levels.pop().unwrap_or_default()
}

/// Noncrossing pairings of `r` points on a line, as partner arrays, in
/// lexicographic order.
pub fn line_pairings(r: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, open: &mut Vec<usize>, pos: usize, r: usize, out: &mut Vec<Vec<usize>>) {
        if pos == r {
            if open.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        // close the innermost open point, or open a new one
        if let Some(&o) = open.last() {
            open.pop();
            cur[o] = pos;
            cur[pos] = o;
            go(cur, open, pos + 1, r, out);
            open.push(o);
        }
        if open.len() < r - pos {
            open.push(pos);
            go(cur, open, pos + 1, r, out);
            open.pop();
        }
    }
    let mut out = Vec::new();
    if r % 2 == 0 {
        go(&mut vec![0; r], &mut Vec::new(), 0, r, &mut out);
    }
    out.sort();
    out
}

/// The order in which a pairing is built by R-insertions: positions of
/// successive insertions, innermost (leftmost) pairs last peeled first.
///
/// Returns positions `a_1, …, a_m` such that the arrow is
/// `insert_R(a_m, ·) ∘ ⋯ ∘ insert_R(a_1, ·)` applied to the level-0 unit.
pub fn insertion_positions(pairing: &[usize]) -> Vec<usize> {
    let mut pts: Vec<usize> = (0..pairing.len()).collect();
    let mut peeled = Vec::new();
    while !pts.is_empty() {
        let i = (0..pts.len() - 1)
            .find(|&i| pairing[pts[i]] == pts[i + 1])
            .expect("noncrossing pairing has an adjacent pair");
        peeled.push(i);
        pts.drain(i..i + 2);
    }
    peeled.reverse();
    peeled
}

/// The arrow built by R-insertions along a noncrossing pairing.
pub fn planar_r_arrow(domain: &CoeffDomain, pairing: &[usize]) -> TlElement {
    let mut x = TlElement::identity(domain, 0);
    for a in insertion_positions(pairing) {
        let l = x.strands();
        x = insert_r(a, l - a, &x).expect("insertion position within level");
    }
    x
}

/// One arrow per noncrossing pairing of `r` points.
pub fn planar_r_arrows(domain: &CoeffDomain, r: usize) -> Vec<TlElement> {
    line_pairings(r)
        .iter()
        .map(|p| planar_r_arrow(domain, p))
        .collect()
}

/// An orthogonal family; normalized in float mode.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    pub level: usize,
    pub vectors: Vec<TlElement>,
    /// `⟨v, v⟩` for each vector (all 1 when normalized).
    pub norms_sq: Vec<Scalar>,
    pub normalized: bool,
}

impl OrthoBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Gram matrix of a family at one level via the diagram Gram matrix.
pub fn family_gram(domain: &CoeffDomain, level: usize, family: &[TlElement]) -> Matrix {
    let exps = gram_exponents(level);
    let coords: Vec<Vec<Scalar>> = family.iter().map(coordinates).collect();
    // G · v for each family member
    let gv: Vec<Vec<Scalar>> = coords
        .par_iter()
        .map(|v| {
            exps.iter()
                .map(|row| {
                    row.iter().zip(v).fold(domain.zero(), |acc, (&k, c)| {
                        if c.is_exactly_zero() {
                            acc
                        } else {
                            &acc + &(c * &domain.lambda_pow(k))
                        }
                    })
                })
                .collect()
        })
        .collect();
    coords
        .par_iter()
        .map(|u| {
            gv.iter()
                .map(|w| {
                    u.iter().zip(w).fold(domain.zero(), |acc, (a, b)| {
                        if a.is_exactly_zero() {
                            acc
                        } else {
                            &acc + &(&a.conj() * b)
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Gram–Schmidt on a family at one level, dropping vectors that vanish in
/// the trace quotient.
pub fn orthogonalize(domain: &CoeffDomain, level: usize, family: &[TlElement]) -> OrthoBasis {
    let gram = family_gram(domain, level, family);
    let (coeffs, norms) = gram_schmidt(domain, &gram);
    let normalize = !domain.is_exact();
    let mut vectors = Vec::new();
    let mut norms_sq = Vec::new();
    for (c, n) in coeffs.iter().zip(&norms) {
        let mut v = TlElement::zero(domain, level);
        for (x, f) in c.iter().zip(family) {
            if !x.is_exactly_zero() {
                v = &v + &f.scale(x);
            }
        }
        if normalize {
            let s = n.float_sqrt().expect("float mode").try_recip().expect("nonzero norm");
            vectors.push(v.scale(&s));
            norms_sq.push(domain.one());
        } else {
            vectors.push(v);
            norms_sq.push(n.clone());
        }
    }
    OrthoBasis {
        level,
        vectors,
        norms_sq,
        normalized: normalize,
    }
}

/// Orthogonal basis of the level-`r` arrow space modulo the trace radical,
/// seeded by the unit/R-generated arrows and completed by diagrams.
pub fn invariant_arrow_basis(domain: &CoeffDomain, r: usize) -> Result<OrthoBasis, JonesError> {
    if r > MAX_ARROW_LEVEL {
        return Err(JonesError::AmbientTooSmall {
            n: MAX_ARROW_LEVEL,
            need: r,
        });
    }
    let mut family = generated_arrows(domain, r);
    for d in &basis(r).diagrams {
        family.push(TlElement::from_diagram(domain, d.clone(), domain.one()));
    }
    let family = independent(domain, family);
    Ok(orthogonalize(domain, r, &family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::gram_rank;

    fn sym() -> CoeffDomain {
        CoeffDomain::symbolic()
    }

    #[test]
    fn tensor_examples() {
        let d = sym();
        let one1 = TlElement::identity(&d, 1);
        let t = tensor_arrows(&one1, &one1).unwrap();
        assert_eq!(t, TlElement::e(&d, 2, 1).unwrap().scale(&d.lambda()));
        let c = TlElement::scalar(&d, 0, d.int(5));
        let s = TlElement::e(&d, 3, 2).unwrap();
        assert_eq!(tensor_arrows(&s, &c).unwrap(), s.scale(&d.int(5)));
        let t = tensor_arrows(&TlElement::identity(&d, 2), &one1).unwrap();
        assert_eq!(t, build_p(&d, 0, 2, 1, 3).unwrap());
    }

    #[test]
    fn insertion_examples() {
        let d = sym();
        let unit0 = TlElement::identity(&d, 0);
        let r00 = insert_r(0, 0, &unit0).unwrap();
        assert_eq!(r00, TlElement::scalar(&d, 2, d.lambda()));
        assert_eq!(insert_r_star(0, 0, &r00).unwrap(), TlElement::scalar(&d, 0, d.beta()));
        let r10 = insert_r(1, 0, &TlElement::identity(&d, 1)).unwrap();
        let expect = TlElement::from_letters(&d, 3, &[1, 2]).unwrap().scale(&d.lambda_pow(3));
        assert_eq!(r10, expect);
        let r11 = insert_r(1, 1, &TlElement::identity(&d, 2)).unwrap();
        assert_eq!(r11, TlElement::scalar(&d, 4, d.lambda()));
        for r in 0..3 {
            let u = TlElement::identity(&d, 2 * r + 2);
            assert_eq!(insert_r_star(r, r, &u).unwrap(), TlElement::scalar(&d, 2 * r, d.lambda()));
        }
    }

    #[test]
    fn zigzag_identity_at_level_one() {
        let d = sym();
        let t = TlElement::identity(&d, 1).scale(&d.int(3));
        let up = insert_r(1, 0, &t).unwrap();
        assert_eq!(insert_r_star(0, 1, &up).unwrap(), t);
        let up = insert_r(0, 1, &t).unwrap();
        assert_eq!(insert_r_star(1, 0, &up).unwrap(), t);
    }

    #[test]
    fn conjugation() {
        let d = sym();
        let x = TlElement::from_letters(&d, 3, &[1, 2]).unwrap().scale(&d.lambda());
        let y = TlElement::from_letters(&d, 3, &[2, 1]).unwrap().scale(&d.lambda());
        assert_eq!(conjugate_arrow(&x), y);
        assert_eq!(conjugate_arrow(&TlElement::identity(&d, 2)), TlElement::identity(&d, 2));
    }

    #[test]
    fn pairings_and_planar_arrows() {
        assert_eq!(line_pairings(4), vec![vec![1, 0, 3, 2], vec![3, 2, 1, 0]]);
        assert_eq!(line_pairings(6).len(), 5);
        assert!(line_pairings(3).is_empty());
        assert_eq!(line_pairings(0), vec![Vec::<usize>::new()]);
        let d = sym();
        assert_eq!(independent(&d, planar_r_arrows(&d, 6)).len(), 5);
    }

    #[test]
    fn arrow_basis_sizes() {
        let d = sym();
        assert_eq!(invariant_arrow_basis(&d, 0).unwrap().len(), 1);
        let b2 = invariant_arrow_basis(&d, 2).unwrap();
        assert_eq!(b2.len(), 2);
        assert_eq!(b2.vectors[0].inner(&b2.vectors[1]).unwrap(), d.zero());
        let q = CoeffDomain::parse("index=2").unwrap();
        assert_eq!(invariant_arrow_basis(&q, 2).unwrap().len(), 2);
        assert_eq!(invariant_arrow_basis(&q, 3).unwrap().len(), gram_rank(&q, 3).unwrap());
        let f = CoeffDomain::parse("float:index=2.5").unwrap();
        let b = invariant_arrow_basis(&f, 3).unwrap();
        assert_eq!(b.len(), 5);
        assert!(b.vectors[2].inner(&b.vectors[2]).unwrap().is_one());
    }
}
