//! Dense linear algebra over [`Scalar`].
//!
//! Rational functions use fraction-free (Bareiss) elimination, number
//! fields plain elimination with exact zero tests; float mode uses partial
//! pivoting with an `eps · scale` threshold.

use std::cmp::Ordering;

use crate::scalar::{CoeffDomain, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

fn max_magnitude(m: &Matrix) -> f64 {
    m.iter()
        .flat_map(|r| r.iter().map(Scalar::magnitude))
        .fold(0.0, f64::max)
}

/// Columns of the row-echelon form that carry pivots, in increasing order.
/// These are the lexicographically first linearly independent columns.
pub fn pivot_columns(domain: &CoeffDomain, m: &Matrix) -> Vec<usize> {
    if m.is_empty() {
        return Vec::new();
    }
    if domain.is_symbolic() {
        bareiss_pivots(m.clone())
    } else if domain.is_exact() {
        // field elements stay reduced under division, which beats the
        // fraction-free update by orders of magnitude here
        field_pivots(m.clone())
    } else {
        float_pivots(m.clone(), domain.eps())
    }
}

pub fn rank(domain: &CoeffDomain, m: &Matrix) -> usize {
    pivot_columns(domain, m).len()
}

fn bareiss_pivots(mut a: Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a[0].len();
    let mut prev_inv: Option<Scalar> = None;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let f = a[i][c].clone();
            for j in c + 1..cols {
                let mut v = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                if let Some(inv) = &prev_inv {
                    v = &v * inv;
                }
                a[i][j] = v;
            }
            a[i][c] = piv.zero_like();
        }
        // earlier columns of the remaining rows are already zero
        prev_inv = Some(piv.try_recip().expect("nonzero pivot"));
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn field_pivots(mut a: Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].try_recip().expect("nonzero pivot");
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c + 1..cols {
                if !a[r][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                }
            }
            a[i][c] = f.zero_like();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn float_pivots(mut a: Matrix, eps: f64) -> Vec<usize> {
    let rows = a.len();
    let cols = a[0].len();
    let tol = eps * max_magnitude(&a).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, a[i][c].magnitude()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best <= tol {
            continue;
        }
        a.swap(r, p);
        let inv = a[r][c].try_recip().unwrap();
        for i in r + 1..rows {
            let f = &a[i][c] * &inv;
            if f.is_exactly_zero() {
                continue;
            }
            for j in c + 1..cols {
                let v = &a[i][j] - &(&f * &a[r][j]);
                a[i][j] = v;
            }
            a[i][c] = f.zero_like();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `a · x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(domain: &CoeffDomain, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(b.clone());
    }
    let k = b[0].len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let tol = if domain.is_exact() {
        0.0
    } else {
        domain.eps() * max_magnitude(a).max(f64::MIN_POSITIVE)
    };
    for c in 0..n {
        let p = if domain.is_exact() {
            (c..n).find(|&i| !m[i][c].is_zero())?
        } else {
            let (p, best) = (c..n)
                .map(|i| (i, m[i][c].magnitude()))
                .max_by(|x, y| x.1.total_cmp(&y.1))?;
            if best <= tol {
                return None;
            }
            p
        };
        m.swap(c, p);
        let inv = m[c][c].try_recip().ok()?;
        for j in c..n + k {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_exactly_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..n + k {
                let v = &m[i][j] - &(&f * &m[c][j]);
                m[i][j] = v;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn inverse(domain: &CoeffDomain, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let id: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { domain.one() } else { domain.zero() })
                .collect()
        })
        .collect();
    solve(domain, a, &id)
}

pub fn mat_mul(domain: &CoeffDomain, a: &Matrix, b: &Matrix) -> Matrix {
    let k = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..k)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(domain.zero(), |acc, (x, rb)| &acc + &(x * &rb[j]))
                })
                .collect()
        })
        .collect()
}

/// Conjugate transpose.
pub fn adjoint(a: &Matrix) -> Matrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].conj()).collect())
        .collect()
}

/// Positivity of a Hermitian form by symmetric elimination with diagonal
/// pivoting. A zero diagonal with a nonzero row certifies indefiniteness.
/// Returns the verdict and the rank.
pub fn hermitian_positivity(domain: &CoeffDomain, m: &Matrix) -> (Positivity, usize) {
    let n = m.len();
    let mut a = m.clone();
    let tol = if domain.is_exact() {
        0.0
    } else {
        domain.eps() * max_magnitude(m).max(f64::MIN_POSITIVE)
    };
    let nonzero = |s: &Scalar| {
        if domain.is_exact() {
            !s.is_zero()
        } else {
            s.magnitude() > tol
        }
    };
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    loop {
        let pick = if domain.is_exact() {
            remaining.iter().position(|&i| nonzero(&a[i][i]))
        } else {
            remaining
                .iter()
                .enumerate()
                .filter(|(_, &i)| nonzero(&a[i][i]))
                .max_by(|x, y| a[*x.1][*x.1].magnitude().total_cmp(&a[*y.1][*y.1].magnitude()))
                .map(|(pos, _)| pos)
        };
        let Some(pos) = pick else {
            let off = remaining
                .iter()
                .any(|&i| remaining.iter().any(|&j| nonzero(&a[i][j])));
            if off {
                return (Positivity::Indefinite, rank);
            }
            break;
        };
        let k = remaining.remove(pos);
        if a[k][k].sign() != Ordering::Greater {
            return (Positivity::Indefinite, rank);
        }
        rank += 1;
        let inv = a[k][k].try_recip().unwrap();
        for &i in &remaining {
            let f = &a[i][k] * &inv;
            if f.is_exactly_zero() {
                continue;
            }
            for &j in &remaining {
                let v = &a[i][j] - &(&f * &a[k][j]);
                a[i][j] = v;
            }
        }
    }
    let verdict = if rank == n {
        Positivity::PositiveDefinite
    } else {
        Positivity::PositiveSemidefinite
    };
    (verdict, rank)
}

/// Gram–Schmidt driven by a Gram matrix `K_{ij} = ⟨f_i, f_j⟩`.
///
/// Returns, for each kept vector `w = Σ_l c_l f_l`, the coefficient row `c`
/// and `⟨w, w⟩`. Vectors whose residual norm vanishes (exactly, or below
/// `eps · max K_ii` in float mode) are dropped.
pub fn gram_schmidt(domain: &CoeffDomain, gram: &Matrix) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let k = gram.len();
    let scale = (0..k).map(|i| gram[i][i].magnitude()).fold(0.0, f64::max);
    let pair = |c: &[Scalar], i: usize| {
        c.iter().enumerate().fold(domain.zero(), |acc, (l, x)| {
            if x.is_exactly_zero() {
                acc
            } else {
                &acc + &(&x.conj() * &gram[l][i])
            }
        })
    };
    let mut coeffs: Vec<Vec<Scalar>> = Vec::new();
    let mut norms: Vec<Scalar> = Vec::new();
    for i in 0..k {
        let mut c = vec![domain.zero(); k];
        c[i] = domain.one();
        for (cj, nj) in coeffs.iter().zip(&norms) {
            let ip = pair(cj, i);
            if ip.is_exactly_zero() {
                continue;
            }
            let f = &ip / nj;
            for (cl, x) in c.iter_mut().zip(cj) {
                if !x.is_exactly_zero() {
                    *cl = &*cl - &(&f * x);
                }
            }
        }
        // w_i is orthogonal to the earlier w_j, so ⟨w_i, w_i⟩ = ⟨w_i, f_i⟩
        let n = pair(&c, i);
        if n.is_negligible(scale) {
            continue;
        }
        coeffs.push(c);
        norms.push(n);
    }
    (coeffs, norms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(d: &CoeffDomain, rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| d.int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_pivots() {
        let d = CoeffDomain::parse("index=2").unwrap();
        let m = mat(&d, &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(pivot_columns(&d, &m), vec![0, 2]);
        let f = CoeffDomain::parse("float:index=2").unwrap();
        let m = mat(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(pivot_columns(&f, &m), vec![0, 2]);
    }

    #[test]
    fn solve_and_inverse() {
        let d = CoeffDomain::symbolic();
        let l = d.lambda();
        let a = vec![vec![d.one(), l.clone()], vec![l.clone(), d.beta()]];
        assert!(inverse(&d, &a).is_none());
        let a = vec![vec![d.one(), l.clone()], vec![d.zero(), d.one()]];
        let inv = inverse(&d, &a).unwrap();
        assert_eq!(inv[0][1], -&l);
        assert_eq!(mat_mul(&d, &a, &inv)[0][1], d.zero());
    }

    #[test]
    fn positivity() {
        let d = CoeffDomain::parse("index=2").unwrap();
        let pd = mat(&d, &[&[2, 1], &[1, 2]]);
        assert_eq!(hermitian_positivity(&d, &pd), (Positivity::PositiveDefinite, 2));
        let psd = mat(&d, &[&[1, 1], &[1, 1]]);
        assert_eq!(hermitian_positivity(&d, &psd), (Positivity::PositiveSemidefinite, 1));
        let ind = mat(&d, &[&[0, 1], &[1, 0]]);
        assert_eq!(hermitian_positivity(&d, &ind).0, Positivity::Indefinite);
        let neg = mat(&d, &[&[1, 2], &[2, 1]]);
        assert_eq!(hermitian_positivity(&d, &neg).0, Positivity::Indefinite);
    }
}
