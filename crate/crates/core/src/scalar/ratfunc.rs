//! Rational functions in λ over ℚ, stored as `λ^shift · num / den`.
//!
//! Canonical form: `num(0) ≠ 0`, `den(0) ≠ 0`, `den` monic and coprime to
//! `num`. Zero is `shift = 0, num = 0, den = 1`. Laurent polynomials (the
//! overwhelmingly common case in diagram computations) have `den = 1` and
//! never touch a gcd.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{render_term, QPoly};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    shift: i64,
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self {
            shift: 0,
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::laurent(0, QPoly::constant(c))
    }

    /// `c · λ^k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        Self::laurent(k, QPoly::constant(c))
    }

    /// `λ^shift · p` for an arbitrary polynomial `p`.
    pub fn laurent(shift: i64, p: QPoly) -> Self {
        Self::build(shift, p, QPoly::one())
    }

    /// Canonicalize `λ^shift · num / den`.
    pub fn build(mut shift: i64, num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation().unwrap_or(0);
        let vd = den.valuation().unwrap_or(0);
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        shift += vn as i64 - vd as i64;
        if !den.is_one() {
            let g = QPoly::gcd(&num, &den);
            if !g.is_one() {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
            let lc = den.leading().cloned().expect("nonzero denominator");
            if !lc.is_one() {
                let inv = lc.recip();
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        Self { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// If this is a rational constant, return it.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        (self.shift == 0 && self.den.is_one() && self.num.degree() == Some(0))
            .then(|| self.num.coeff(0))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - lo) as usize);
        let b = rhs.num.shift_up((rhs.shift - lo) as usize);
        if self.den == rhs.den {
            return Self::build(lo, &a + &b, self.den.clone());
        }
        let num = &(&a * &rhs.den) + &(&b * &self.den);
        Self::build(lo, num, &self.den * &rhs.den)
    }

    pub fn neg(&self) -> Self {
        Self {
            shift: self.shift,
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let shift = self.shift + rhs.shift;
        if self.den.is_one() && rhs.den.is_one() {
            return Self {
                shift,
                num: &self.num * &rhs.num,
                den: QPoly::one(),
            };
        }
        Self::build(shift, &self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::build(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        x.powi(self.shift as i32) * self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Exact value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() || (x.is_zero() && self.shift < 0) {
            return None;
        }
        let mut p = BigRational::one();
        let base = if self.shift >= 0 { x.clone() } else { x.recip() };
        for _ in 0..self.shift.unsigned_abs() {
            p *= &base;
        }
        Some(p * self.num.eval(x) / d)
    }

    /// Sign in the ordering where λ exceeds every rational (λ → +∞).
    pub fn sign_at_infinity(&self) -> Ordering {
        match self.num.leading() {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn approx(&self, lambda: f64) -> f64 {
        self.eval_f64(lambda)
    }

    /// Render with `var` as the indeterminate, Laurent terms highest first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let num = render_laurent(self.shift, &self.num, var);
        if self.den.is_one() {
            num
        } else {
            format!("({num})/({})", self.den.render(var))
        }
    }
}

fn render_laurent(shift: i64, p: &QPoly, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&render_term(&c.abs(), var, k as i64 + shift));
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("λ"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn laurent_arithmetic_stays_gcd_free() {
        let a = RatFunc::monomial(q(1), -2);
        let b = RatFunc::monomial(q(3), 1);
        let s = a.add(&b);
        assert!(s.is_laurent());
        assert_eq!(s.to_string(), "3*λ + λ^-2");
        assert_eq!(s.sub(&b), a);
    }

    #[test]
    fn division_cancels() {
        // (λ^2 - 1) / (λ - 1) = λ + 1
        let num = RatFunc::laurent(0, QPoly::from_ints(&[-1, 0, 1]));
        let den = RatFunc::laurent(0, QPoly::from_ints(&[-1, 1]));
        let r = num.mul(&den.recip().unwrap());
        assert_eq!(r, RatFunc::laurent(0, QPoly::from_ints(&[1, 1])));
        let inv = den.recip().unwrap();
        assert_eq!(inv.mul(&den), RatFunc::one());
        assert!(!inv.is_laurent());
    }

    #[test]
    fn sign_and_eval() {
        let r = RatFunc::laurent(-2, QPoly::from_ints(&[-5, 0, 1])); // 1 - 5 λ^-2
        assert_eq!(r.sign_at_infinity(), Ordering::Greater);
        assert_eq!(r.eval(&q(1)), Some(q(-4)));
    }
}
