//! Real number fields ℚ(λ) with a single real generator.
//!
//! Two constructions are supported:
//! - `λ = 2cos(π/m)`, whose minimal polynomial is extracted from the
//!   factorization of the Chebyshev polynomial with roots `2cos(kπ/m)`;
//! - `λ = √q` for rational `q > 0` (degree 1 when `q` is a rational square).

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{ratio_to_f64, QPoly};

#[derive(Debug, PartialEq)]
pub struct NumberField {
    minpoly: QPoly,
    /// Floating approximation of the distinguished real root.
    approx: f64,
    /// Rational interval isolating the distinguished root.
    isolating: (BigRational, BigRational),
}

impl NumberField {
    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn generator_approx(&self) -> f64 {
        self.approx
    }

    /// ℚ(2cos(π/m)) for `m ≥ 3`.
    pub fn two_cos_pi_over(m: u64) -> Arc<Self> {
        assert!(m >= 3);
        let target = 2.0 * (std::f64::consts::PI / m as f64).cos();
        let factors = chebyshev_factors(m);
        let best = factors
            .into_iter()
            .map(|(_, f)| {
                let d = real_roots(&f)
                    .into_iter()
                    .map(|r| (r - target).abs())
                    .fold(f64::INFINITY, f64::min);
                (d, f)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, f)| f)
            .expect("Chebyshev polynomial has at least one factor");
        Arc::new(Self::with_root(best, target))
    }

    /// ℚ(√q) for rational `q > 0`.
    pub fn sqrt_of(q: &BigRational) -> Arc<Self> {
        assert!(q.is_positive());
        let target = ratio_to_f64(q).sqrt();
        let minpoly = match rational_sqrt(q) {
            Some(r) => QPoly::from_coeffs(vec![-r, BigRational::one()]),
            None => QPoly::from_coeffs(vec![-q.clone(), BigRational::zero(), BigRational::one()]),
        };
        Arc::new(Self::with_root(minpoly, target))
    }

    fn with_root(minpoly: QPoly, approx: f64) -> Self {
        let isolating = isolate(&minpoly, approx);
        // polish the float approximation from the exact interval
        let approx = (ratio_to_f64(&isolating.0) + ratio_to_f64(&isolating.1)) / 2.0;
        Self {
            minpoly,
            approx,
            isolating,
        }
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        if p.degree().unwrap_or(0) < self.degree() {
            return p.clone();
        }
        p.div_rem(&self.minpoly).1
    }

    pub fn inverse(&self, p: &QPoly) -> Option<QPoly> {
        if p.is_zero() {
            return None;
        }
        QPoly::inverse_mod(p, &self.minpoly)
    }

    /// Exact sign of a field element under the distinguished real embedding.
    pub fn sign(&self, p: &QPoly) -> Ordering {
        if p.is_zero() {
            return Ordering::Equal;
        }
        if let Some(0) = p.degree() {
            return p.coeff(0).cmp(&BigRational::zero());
        }
        let mut lo = self.isolating.0.clone();
        let mut hi = self.isolating.1.clone();
        let dp = p.derivative();
        let two = BigRational::from_integer(BigInt::from(2));
        loop {
            let mid = (&lo + &hi) / &two;
            let v = p.eval(&mid);
            // |p(x) - p(mid)| <= max|p'| * width/2 on the interval
            let bound_x = lo.abs().max(hi.abs());
            let dbound: BigRational = dp
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut t = c.abs();
                    for _ in 0..k {
                        t *= &bound_x;
                    }
                    t
                })
                .sum();
            let slack = dbound * (&hi - &lo) / &two;
            if v.abs() > slack {
                return v.cmp(&BigRational::zero());
            }
            // bisect the isolating interval
            let s_lo = self.minpoly.eval(&lo).signum();
            let s_mid = self.minpoly.eval(&mid).signum();
            if s_mid.is_zero() {
                return p.eval(&mid).cmp(&BigRational::zero());
            }
            if s_mid == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn eval_f64(&self, p: &QPoly) -> f64 {
        p.eval_f64(self.approx)
    }
}

/// `S_{m-1}`: monic, roots `2cos(kπ/m)` for `k = 1..m-1`.
pub fn chebyshev_s(m: u64) -> QPoly {
    let x = QPoly::monomial(1);
    let mut prev = QPoly::one(); // S_0
    if m == 1 {
        return prev;
    }
    let mut cur = x.clone(); // S_1
    for _ in 2..m {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Irreducible factorization of `S_{m-1}` over ℚ.
///
/// The roots `2cos(2πj/d)` group by the reduced denominator `d | 2m`, and each
/// group is the real cyclotomic polynomial `Ψ_d`, irreducible because `Φ_d`
/// is. The product is checked against `S_{m-1}` before returning.
pub fn chebyshev_factors(m: u64) -> Vec<(u64, QPoly)> {
    let mut out = Vec::new();
    let mut product = QPoly::one();
    for d in 3..=2 * m {
        if (2 * m) % d == 0 {
            let psi = real_cyclotomic(d);
            product = &product * &psi;
            out.push((d, psi));
        }
    }
    assert_eq!(product, chebyshev_s(m), "Chebyshev factorization mismatch");
    out
}

/// Cyclotomic polynomial `Φ_k`.
pub fn cyclotomic(k: u64) -> QPoly {
    let mut p = &QPoly::monomial(k as usize) - &QPoly::one();
    for d in 1..k {
        if k % d == 0 {
            p = p.exact_div(&cyclotomic(d));
        }
    }
    p
}

/// Minimal polynomial of `2cos(2π/k)`, `k ≥ 3`.
pub fn real_cyclotomic(k: u64) -> QPoly {
    let phi = cyclotomic(k);
    let deg = phi.degree().unwrap();
    let half = deg / 2;
    // z^-D Φ(z) = a_D + Σ a_{D+j} (z^j + z^-j), z^j + z^-j = T_j(z + 1/z)
    let x = QPoly::monomial(1);
    let mut t_prev = QPoly::from_ints(&[2]);
    let mut t_cur = x.clone();
    let mut psi = QPoly::constant(phi.coeff(half));
    for j in 1..=half {
        psi = &psi + &t_cur.scale(&phi.coeff(half + j));
        let next = &(&x * &t_cur) - &t_prev;
        t_prev = t_cur;
        t_cur = next;
    }
    psi
}

/// Real roots of a polynomial whose roots all lie in (-3, 3), by scanning.
fn real_roots(p: &QPoly) -> Vec<f64> {
    let steps = 60_000;
    let (a, b) = (-3.0, 3.0);
    let h = (b - a) / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = p.eval_f64(x0);
    for i in 1..=steps {
        let x1 = a + h * i as f64;
        let f1 = p.eval_f64(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if p.eval_f64(lo) * p.eval_f64(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// An exact rational interval around `approx` containing exactly one sign
/// change of the squarefree polynomial `p`.
fn isolate(p: &QPoly, approx: f64) -> (BigRational, BigRational) {
    let scale = 1u64 << 40;
    let center = BigRational::new(
        BigInt::from((approx * scale as f64).round() as i64),
        BigInt::from(scale),
    );
    let mut width = BigRational::new(BigInt::one(), BigInt::from(1u64 << 20));
    loop {
        let lo = &center - &width;
        let hi = &center + &width;
        let (a, b) = (p.eval(&lo), p.eval(&hi));
        if a.is_zero() {
            return (lo.clone(), lo);
        }
        if b.is_zero() {
            return (hi.clone(), hi);
        }
        if a.signum() != b.signum() {
            return (lo, hi);
        }
        width = width * BigRational::from_integer(BigInt::from(2));
        assert!(width < BigRational::from_integer(BigInt::from(1)), "failed to isolate root");
    }
}

/// Exact square root of a rational, if it is a square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_minpoly() {
        let f = NumberField::two_cos_pi_over(5);
        assert_eq!(f.minpoly(), &QPoly::from_ints(&[-1, -1, 1]));
        assert!((f.generator_approx() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_cases() {
        assert_eq!(NumberField::two_cos_pi_over(4).minpoly(), &QPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(NumberField::two_cos_pi_over(6).minpoly(), &QPoly::from_ints(&[-3, 0, 1]));
        assert_eq!(NumberField::two_cos_pi_over(7).minpoly(), &QPoly::from_ints(&[1, -2, -1, 1]));
        assert_eq!(NumberField::two_cos_pi_over(3).minpoly(), &QPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn factorization_degrees() {
        for m in 3..20u64 {
            let f = chebyshev_factors(m);
            let total: usize = f.iter().map(|(_, p)| p.degree().unwrap()).sum();
            assert_eq!(total as u64, m - 1);
        }
    }

    #[test]
    fn sign_near_zero() {
        let f = NumberField::two_cos_pi_over(5);
        // λ - 1.618034 is tiny but positive; λ - 1.6180340 vs 1.6180339
        let c = BigRational::new(BigInt::from(16180339), BigInt::from(10000000));
        let p = QPoly::from_coeffs(vec![-c, BigRational::one()]);
        assert_eq!(f.sign(&p), Ordering::Greater);
        let c = BigRational::new(BigInt::from(16180340), BigInt::from(10000000));
        let p = QPoly::from_coeffs(vec![-c, BigRational::one()]);
        assert_eq!(f.sign(&p), Ordering::Less);
    }

    #[test]
    fn square_detection() {
        let four = BigRational::from_integer(BigInt::from(4));
        assert_eq!(NumberField::sqrt_of(&four).degree(), 1);
        let q = BigRational::new(BigInt::from(17), BigInt::from(4));
        assert_eq!(NumberField::sqrt_of(&q).degree(), 2);
        assert_eq!(rational_sqrt(&BigRational::new(BigInt::from(9), BigInt::from(4))),
            Some(BigRational::new(BigInt::from(3), BigInt::from(2))));
    }
}
