//! Coefficient domains with decidable equality.
//!
//! Three modes share one [`Scalar`] type:
//! - symbolic: rational functions in an indeterminate λ;
//! - number field: ℚ(λ) for λ = 2cos(π/m) or λ = √q;
//! - float: complex doubles with a relative zero tolerance.

pub mod field;
pub mod poly;
pub mod ratfunc;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use field::NumberField;
pub use poly::QPoly;
pub use ratfunc::RatFunc;

use poly::ratio_to_f64;

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("malformed domain descriptor `{0}`")]
    MalformedDomain(String),
    #[error("index {0} must exceed 1")]
    IndexTooSmall(String),
    #[error("4cos²(π/m) requires m ≥ 4, got m = {0}")]
    RootOfUnityTooSmall(u64),
    #[error("scalars from different coefficient domains")]
    DomainMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Element of the active coefficient domain.
#[derive(Clone, Debug)]
pub enum Scalar {
    Sym(RatFunc),
    Field(FieldElem),
    Float(FloatVal),
}

#[derive(Clone, Debug)]
pub struct FieldElem {
    value: QPoly,
    field: Arc<NumberField>,
}

impl FieldElem {
    pub fn coords(&self) -> &QPoly {
        &self.value
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FloatVal {
    pub z: Complex64,
    pub eps: f64,
}

/// Which of the three arithmetic modes a domain uses.
#[derive(Clone, Debug)]
pub enum DomainKind {
    Symbolic,
    NumberField {
        field: Arc<NumberField>,
        /// `Some(m)` for λ = 2cos(π/m), `None` for λ = √q.
        root_of_unity: Option<u64>,
    },
    Float { beta: f64, eps: f64 },
}

#[derive(Debug)]
struct DomainInner {
    kind: DomainKind,
    descriptor: String,
    /// λ^k for k in -POW_CACHE..=POW_CACHE
    powers: Vec<Scalar>,
}

const POW_CACHE: i64 = 64;

/// A coefficient domain in which λ² = β is exact. Cheap to clone.
#[derive(Clone, Debug)]
pub struct CoeffDomain(Arc<DomainInner>);

impl PartialEq for CoeffDomain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl CoeffDomain {
    /// Parse a descriptor: `symbolic`, `index=q`, `index=4cos2(pi/m)`, or
    /// `float:index=x[,eps=e]`.
    pub fn parse(desc: &str) -> Result<Self, ScalarError> {
        let desc = desc.trim();
        let malformed = || ScalarError::MalformedDomain(desc.to_string());
        if desc == "symbolic" {
            return Ok(Self::symbolic());
        }
        if let Some(rest) = desc.strip_prefix("float:") {
            let mut beta = None;
            let mut eps = DEFAULT_EPS;
            for part in rest.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(malformed)?;
                match k.trim() {
                    "index" => {
                        let v = v.trim();
                        beta = Some(match parse_cos_index(v)? {
                            Some(m) => 4.0 * (std::f64::consts::PI / m as f64).cos().powi(2),
                            None => v.parse::<f64>().map_err(|_| malformed())?,
                        });
                    }
                    "eps" => eps = v.trim().parse::<f64>().map_err(|_| malformed())?,
                    _ => return Err(malformed()),
                }
            }
            let beta = beta.ok_or_else(malformed)?;
            if !(beta > 1.0) {
                return Err(ScalarError::IndexTooSmall(beta.to_string()));
            }
            if !(eps > 0.0) {
                return Err(malformed());
            }
            return Ok(Self::float(beta, eps));
        }
        if let Some(v) = desc.strip_prefix("index=") {
            let v = v.trim();
            if let Some(m) = parse_cos_index(v)? {
                return Self::root_of_unity(m);
            }
            let q = parse_rational(v).ok_or_else(malformed)?;
            return Self::rational_index(q);
        }
        Err(malformed())
    }

    pub fn symbolic() -> Self {
        Self::build(DomainKind::Symbolic, "symbolic".into())
    }

    /// λ = 2cos(π/m), β = 4cos²(π/m).
    pub fn root_of_unity(m: u64) -> Result<Self, ScalarError> {
        if m < 4 {
            return Err(ScalarError::RootOfUnityTooSmall(m));
        }
        let field = NumberField::two_cos_pi_over(m);
        let kind = DomainKind::NumberField {
            field,
            root_of_unity: Some(m),
        };
        Ok(Self::build(kind, format!("index=4cos2(pi/{m})")))
    }

    /// λ = √q for rational `q > 1`.
    pub fn rational_index(q: BigRational) -> Result<Self, ScalarError> {
        if q <= BigRational::one() {
            return Err(ScalarError::IndexTooSmall(q.to_string()));
        }
        let field = NumberField::sqrt_of(&q);
        let descriptor = format!("index={q}");
        let kind = DomainKind::NumberField {
            field,
            root_of_unity: None,
        };
        Ok(Self::build(kind, descriptor))
    }

    pub fn float(beta: f64, eps: f64) -> Self {
        Self::build(
            DomainKind::Float { beta, eps },
            format!("float:index={beta},eps={eps:e}"),
        )
    }

    fn build(kind: DomainKind, descriptor: String) -> Self {
        let lambda = match &kind {
            DomainKind::Symbolic => Scalar::Sym(RatFunc::monomial(BigRational::one(), 1)),
            DomainKind::NumberField { field, .. } => Scalar::Field(FieldElem {
                value: field.reduce(&QPoly::monomial(1)),
                field: field.clone(),
            }),
            DomainKind::Float { beta, eps } => Scalar::Float(FloatVal {
                z: Complex64::new(beta.sqrt(), 0.0),
                eps: *eps,
            }),
        };
        let inv = lambda.try_recip().expect("λ is nonzero");
        let one = lambda.one_like();
        let mut up = vec![one.clone()];
        let mut down = vec![one];
        for _ in 0..POW_CACHE {
            let u = up.last().unwrap() * &lambda;
            up.push(u);
            let d = down.last().unwrap() * &inv;
            down.push(d);
        }
        let mut powers: Vec<Scalar> = down.into_iter().skip(1).rev().collect();
        powers.extend(up);
        Self(Arc::new(DomainInner {
            kind,
            descriptor,
            powers,
        }))
    }

    pub fn kind(&self) -> &DomainKind {
        &self.0.kind
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.0.kind, DomainKind::Float { .. })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.0.kind, DomainKind::Symbolic)
    }

    /// Relative tolerance in float mode, zero otherwise.
    pub fn eps(&self) -> f64 {
        match self.0.kind {
            DomainKind::Float { eps, .. } => eps,
            _ => 0.0,
        }
    }

    /// The number field, in number-field mode.
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match &self.0.kind {
            DomainKind::NumberField { field, .. } => Some(field),
            _ => None,
        }
    }

    /// Floating value of λ; `None` in symbolic mode.
    pub fn lambda_f64(&self) -> Option<f64> {
        match &self.0.kind {
            DomainKind::Symbolic => None,
            DomainKind::NumberField { field, .. } => Some(field.generator_approx()),
            DomainKind::Float { beta, .. } => Some(beta.sqrt()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.lambda().zero_like()
    }

    pub fn one(&self) -> Scalar {
        self.lambda_pow(0)
    }

    pub fn int(&self, k: i64) -> Scalar {
        self.rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn rational(&self, q: BigRational) -> Scalar {
        match &self.0.kind {
            DomainKind::Symbolic => Scalar::Sym(RatFunc::constant(q)),
            DomainKind::NumberField { field, .. } => Scalar::Field(FieldElem {
                value: QPoly::constant(q),
                field: field.clone(),
            }),
            DomainKind::Float { eps, .. } => Scalar::Float(FloatVal {
                z: Complex64::new(ratio_to_f64(&q), 0.0),
                eps: *eps,
            }),
        }
    }

    /// A float-mode scalar, or the nearest exact rational is refused.
    pub fn complex(&self, re: f64, im: f64) -> Option<Scalar> {
        match &self.0.kind {
            DomainKind::Float { eps, .. } => Some(Scalar::Float(FloatVal {
                z: Complex64::new(re, im),
                eps: *eps,
            })),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Scalar {
        self.lambda_pow(1)
    }

    /// β = λ².
    pub fn beta(&self) -> Scalar {
        self.lambda_pow(2)
    }

    pub fn lambda_pow(&self, k: i64) -> Scalar {
        if k.abs() <= POW_CACHE {
            return self.0.powers[(k + POW_CACHE) as usize].clone();
        }
        let base = if k > 0 {
            self.lambda_pow(POW_CACHE)
        } else {
            self.lambda_pow(-POW_CACHE)
        };
        let rest = k - k.signum() * POW_CACHE;
        &base * &self.lambda_pow(rest)
    }

    /// Polynomial in λ with rational coefficients, evaluated in this domain.
    pub fn from_laurent(&self, shift: i64, p: &QPoly) -> Scalar {
        let mut acc = self.zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&self.rational(c.clone()) * &self.lambda_pow(k as i64 + shift));
        }
        acc
    }

    /// Parse a scalar expression such as `3/4`, `λ^-2`, `2*λ + 1`,
    /// `(λ^2 - 1)/(λ + 1)`, `0.5`, or (float mode) `0.3 - 2i`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ScalarError> {
        parse::parse_scalar(self, text)
    }

    pub fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        if same_kind(&self.zero(), s) {
            Ok(())
        } else {
            Err(ScalarError::DomainMismatch)
        }
    }
}

impl fmt::Display for CoeffDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.descriptor)
    }
}

fn parse_cos_index(v: &str) -> Result<Option<u64>, ScalarError> {
    let Some(rest) = v.strip_prefix("4cos2(pi/") else {
        return Ok(None);
    };
    let m = rest
        .strip_suffix(')')
        .and_then(|s| s.trim().parse::<u64>().ok())
        .ok_or_else(|| ScalarError::MalformedDomain(v.to_string()))?;
    if m < 4 {
        return Err(ScalarError::RootOfUnityTooSmall(m));
    }
    Ok(Some(m))
}

/// Parse `a`, `a/b`, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = parse_rational(a)?;
        let b = parse_rational(b)?;
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, d);
    Some(if neg { -r } else { r })
}

fn same_kind(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Sym(_), Scalar::Sym(_)) => true,
        (Scalar::Field(x), Scalar::Field(y)) => {
            Arc::ptr_eq(&x.field, &y.field) || x.field.minpoly() == y.field.minpoly()
        }
        (Scalar::Float(_), Scalar::Float(_)) => true,
        _ => false,
    }
}

impl Scalar {
    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Sym(_) => Scalar::Sym(RatFunc::zero()),
            Scalar::Field(x) => Scalar::Field(FieldElem {
                value: QPoly::zero(),
                field: x.field.clone(),
            }),
            Scalar::Float(v) => Scalar::Float(FloatVal {
                z: Complex64::zero(),
                eps: v.eps,
            }),
        }
    }

    pub fn one_like(&self) -> Scalar {
        match self {
            Scalar::Sym(_) => Scalar::Sym(RatFunc::one()),
            Scalar::Field(x) => Scalar::Field(FieldElem {
                value: QPoly::one(),
                field: x.field.clone(),
            }),
            Scalar::Float(v) => Scalar::Float(FloatVal {
                z: Complex64::one(),
                eps: v.eps,
            }),
        }
    }

    /// Exact zero test in exact modes; `|x| ≤ eps` in float mode.
    pub fn is_zero(&self) -> bool {
        self.is_negligible(1.0)
    }

    /// Zero test relative to a magnitude scale (float mode: `|x| ≤ eps·scale`).
    pub fn is_negligible(&self, scale: f64) -> bool {
        match self {
            Scalar::Sym(r) => r.is_zero(),
            Scalar::Field(x) => x.value.is_zero(),
            Scalar::Float(v) => v.z.norm() <= v.eps * scale.max(f64::MIN_POSITIVE),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Sym(r) => r.is_one(),
            Scalar::Field(x) => x.value.is_one(),
            Scalar::Float(v) => (v.z - Complex64::one()).norm() <= v.eps,
        }
    }

    /// Exact structural zero; always false for floats that are not exactly 0.
    pub fn is_exactly_zero(&self) -> bool {
        match self {
            Scalar::Float(v) => v.z == Complex64::zero(),
            _ => self.is_zero(),
        }
    }

    /// Magnitude used for float tolerances (exact modes report the
    /// embedding value when available).
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Float(v) => v.z.norm(),
            Scalar::Field(x) => x.field.eval_f64(&x.value).abs(),
            Scalar::Sym(_) => {
                if self.is_zero() {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Complex conjugate (identity on the real exact fields).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Float(v) => Scalar::Float(FloatVal {
                z: v.z.conj(),
                eps: v.eps,
            }),
            _ => self.clone(),
        }
    }

    /// Sign of the real part. Number fields use the distinguished real
    /// embedding; symbolic mode orders by λ → +∞.
    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Sym(r) => r.sign_at_infinity(),
            Scalar::Field(x) => x.field.sign(&x.value),
            Scalar::Float(v) => {
                if v.z.re.abs() <= v.eps {
                    Ordering::Equal
                } else if v.z.re > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    /// Numerical value. Symbolic scalars need a value for λ.
    pub fn to_complex(&self, lambda: Option<f64>) -> Complex64 {
        match self {
            Scalar::Float(v) => v.z,
            Scalar::Field(x) => Complex64::new(x.field.eval_f64(&x.value), 0.0),
            Scalar::Sym(r) => Complex64::new(r.eval_f64(lambda.unwrap_or(f64::NAN)), 0.0),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Sym(r) => r.as_constant(),
            Scalar::Field(x) => match x.value.degree() {
                None => Some(BigRational::zero()),
                Some(0) => Some(x.value.coeff(0)),
                _ => None,
            },
            Scalar::Float(_) => None,
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if !same_kind(self, rhs) {
            return Err(ScalarError::DomainMismatch);
        }
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if !same_kind(self, rhs) {
            return Err(ScalarError::DomainMismatch);
        }
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if !same_kind(self, rhs) {
            return Err(ScalarError::DomainMismatch);
        }
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if !same_kind(self, rhs) {
            return Err(ScalarError::DomainMismatch);
        }
        let inv = rhs.try_recip()?;
        Ok(self * &inv)
    }

    pub fn try_recip(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Sym(r) => r.recip().map(Scalar::Sym).ok_or(ScalarError::DivisionByZero),
            Scalar::Field(x) => x
                .field
                .inverse(&x.value)
                .map(|value| {
                    Scalar::Field(FieldElem {
                        value,
                        field: x.field.clone(),
                    })
                })
                .ok_or(ScalarError::DivisionByZero),
            Scalar::Float(v) => {
                if v.z == Complex64::zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Float(FloatVal {
                        z: v.z.inv(),
                        eps: v.eps,
                    }))
                }
            }
        }
    }

    /// Square root of a float-mode scalar (principal branch).
    pub fn float_sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Float(v) => Some(Scalar::Float(FloatVal {
                z: v.z.sqrt(),
                eps: v.eps,
            })),
            _ => None,
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Sym(r) => write!(f, "{r}"),
            Scalar::Field(x) => f.write_str(&x.value.render("λ")),
            Scalar::Float(v) => {
                let (re, im) = (v.z.re, v.z.im);
                if im == 0.0 {
                    write!(f, "{re}")
                } else if re == 0.0 {
                    write!(f, "{im}i")
                } else if im < 0.0 {
                    write!(f, "{re}-{}i", -im)
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars from different coefficient domains")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.add(b)),
            (Scalar::Field(a), Scalar::Field(b)) => Scalar::Field(FieldElem {
                value: &a.value + &b.value,
                field: a.field.clone(),
            }),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(FloatVal {
                z: a.z + b.z,
                eps: a.eps,
            }),
            _ => mismatch(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.sub(b)),
            (Scalar::Field(a), Scalar::Field(b)) => Scalar::Field(FieldElem {
                value: &a.value - &b.value,
                field: a.field.clone(),
            }),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(FloatVal {
                z: a.z - b.z,
                eps: a.eps,
            }),
            _ => mismatch(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.mul(b)),
            (Scalar::Field(a), Scalar::Field(b)) => Scalar::Field(FieldElem {
                value: a.field.reduce(&(&a.value * &b.value)),
                field: a.field.clone(),
            }),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(FloatVal {
                z: a.z * b.z,
                eps: a.eps,
            }),
            _ => mismatch(),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.try_recip().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Sym(a) => Scalar::Sym(a.neg()),
            Scalar::Field(a) => Scalar::Field(FieldElem {
                value: -&a.value,
                field: a.field.clone(),
            }),
            Scalar::Float(a) => Scalar::Float(FloatVal {
                z: -a.z,
                eps: a.eps,
            }),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Exact equality in exact modes; float mode compares within the relative
/// tolerance of the larger operand.
impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if !same_kind(self, other) {
            return false;
        }
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => {
                let scale = a.z.norm().max(b.z.norm()).max(1.0);
                (a.z - b.z).norm() <= a.eps * scale
            }
            _ => (self - other).is_zero(),
        }
    }
}

mod parse {
    use super::*;

    /// Polynomial-in-λ accumulator used by the parser: a Laurent part with
    /// rational coefficients plus an optional float imaginary part.
    struct Acc {
        terms: Vec<(i64, BigRational)>,
        float_terms: Vec<(i64, Complex64)>,
    }

    pub(super) fn parse_scalar(dom: &CoeffDomain, text: &str) -> Result<Scalar, ScalarError> {
        let err = || ScalarError::Parse(text.to_string());
        let t = text.trim();
        if t.is_empty() {
            return Err(err());
        }
        // (P)/(Q)
        if let Some(rest) = t.strip_prefix('(') {
            if let Some(close) = matching_paren(rest) {
                let num = &rest[..close];
                let after = rest[close + 1..].trim();
                if after.is_empty() {
                    return parse_scalar(dom, num);
                }
                if let Some(den) = after.strip_prefix('/') {
                    let den = den.trim();
                    let den = den
                        .strip_prefix('(')
                        .and_then(|d| d.strip_suffix(')'))
                        .unwrap_or(den);
                    let a = parse_scalar(dom, num)?;
                    let b = parse_scalar(dom, den)?;
                    return a.checked_div(&b).map_err(|_| err());
                }
                return Err(err());
            }
        }
        let acc = parse_sum(t).ok_or_else(err)?;
        let mut out = dom.zero();
        for (k, c) in acc.terms {
            out = &out + &(&dom.rational(c) * &dom.lambda_pow(k));
        }
        if !acc.float_terms.is_empty() {
            if dom.is_exact() {
                return Err(err());
            }
            for (k, z) in acc.float_terms {
                let s = dom.complex(z.re, z.im).ok_or_else(err)?;
                out = &out + &(&s * &dom.lambda_pow(k));
            }
        }
        Ok(out)
    }

    fn matching_paren(s: &str) -> Option<usize> {
        let mut depth = 1usize;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn parse_sum(t: &str) -> Option<Acc> {
        let mut acc = Acc {
            terms: Vec::new(),
            float_terms: Vec::new(),
        };
        // split on top-level + / - that are not exponent signs
        let chars: Vec<char> = t.chars().collect();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 0..chars.len() {
            let c = chars[i];
            if (c == '+' || c == '-') && i > 0 {
                let prev = chars[..i].iter().rev().find(|c| !c.is_whitespace()).copied();
                if matches!(prev, Some('^') | Some('e') | Some('E') | Some('*') | Some('/')) {
                    continue;
                }
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        pieces.push(chars[start..].iter().collect::<String>());
        for p in pieces {
            let p = p.trim();
            if p.is_empty() {
                return None;
            }
            parse_term(p, &mut acc)?;
        }
        Some(acc)
    }

    fn parse_term(p: &str, acc: &mut Acc) -> Option<()> {
        let (neg, body) = match p.strip_prefix('-') {
            Some(b) => (true, b.trim()),
            None => (false, p.strip_prefix('+').unwrap_or(p).trim()),
        };
        let sign = if neg { -1 } else { 1 };
        // locate the λ factor
        let (coef, power) = match find_lambda(body) {
            Some((pos, len)) => {
                let coef = body[..pos].trim().trim_end_matches('*').trim();
                let rest = body[pos + len..].trim();
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')?.trim().parse::<i64>().ok()?
                };
                (coef, power)
            }
            None => (body, 0),
        };
        if let Some(im) = coef.strip_suffix('i') {
            let im = im.trim().trim_end_matches('*').trim();
            let v = if im.is_empty() { 1.0 } else { im.parse::<f64>().ok()? };
            acc.float_terms
                .push((power, Complex64::new(0.0, v * sign as f64)));
            return Some(());
        }
        let c = if coef.is_empty() {
            BigRational::one()
        } else if let Some(q) = parse_rational(coef) {
            q
        } else if let Ok(x) = coef.parse::<f64>() {
            // scientific notation: exact modes take the binary value
            BigRational::from_float(x)?
        } else {
            return None;
        };
        let c = if neg { -c } else { c };
        acc.terms.push((power, c));
        Some(())
    }

    fn find_lambda(s: &str) -> Option<(usize, usize)> {
        for pat in ["lambda", "λ", "l"] {
            if let Some(pos) = s.find(pat) {
                return Some((pos, pat.len()));
            }
        }
        None
    }
}

/// Convert a rational to the nearest double.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    ratio_to_f64(q)
}

/// `|x|` of a rational, exposed for the linear algebra module.
pub fn rational_abs(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_squared_is_beta() {
        for desc in ["symbolic", "index=2", "index=4", "index=4cos2(pi/5)", "float:index=2.5"] {
            let d = CoeffDomain::parse(desc).unwrap();
            let l = d.lambda();
            assert_eq!(&l * &l, d.beta(), "{desc}");
        }
        let d = CoeffDomain::parse("index=4").unwrap();
        assert_eq!(d.lambda().as_rational(), Some(BigRational::from_integer(2.into())));
    }

    #[test]
    fn golden_field_reduction() {
        let d = CoeffDomain::parse("index=4cos2(pi/5)").unwrap();
        let l = d.lambda();
        assert_eq!(&l * &l, &l + &d.one());
        assert_eq!(d.field().unwrap().minpoly(), &QPoly::from_ints(&[-1, -1, 1]));
    }

    #[test]
    fn sqrt_two_minpoly() {
        let d = CoeffDomain::parse("index=2").unwrap();
        assert_eq!(d.field().unwrap().minpoly(), &QPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(CoeffDomain::parse("index=4cos2(pi/3)"), Err(ScalarError::RootOfUnityTooSmall(3))));
        assert!(matches!(CoeffDomain::parse("index=1"), Err(ScalarError::IndexTooSmall(_))));
        assert!(matches!(CoeffDomain::parse("index=1/2"), Err(ScalarError::IndexTooSmall(_))));
        assert!(matches!(CoeffDomain::parse("bogus"), Err(ScalarError::MalformedDomain(_))));
        assert!(matches!(CoeffDomain::parse("float:eps=1e-9"), Err(ScalarError::MalformedDomain(_))));
    }

    #[test]
    fn self_cancellation_and_division() {
        let d = CoeffDomain::symbolic();
        let l = d.lambda();
        assert!((&l - &l).is_zero());
        assert!(matches!(d.one().checked_div(&d.zero()), Err(ScalarError::DivisionByZero)));
        let other = CoeffDomain::parse("index=2").unwrap();
        assert!(matches!(l.checked_add(&other.lambda()), Err(ScalarError::DomainMismatch)));
    }

    #[test]
    fn parse_and_render() {
        let d = CoeffDomain::symbolic();
        let s = d.parse_scalar("2*λ^2 - 1/3 + λ^-2").unwrap();
        assert_eq!(s.to_string(), "2*λ^2 - 1/3 + λ^-2");
        assert_eq!(d.parse_scalar(&s.to_string()).unwrap(), s);
        let q = d.parse_scalar("(λ^2 - 1)/(λ - 1)").unwrap();
        assert_eq!(q, d.parse_scalar("lambda + 1").unwrap());
        let f = CoeffDomain::parse("float:index=2.5").unwrap();
        let z = f.parse_scalar("0.5 - 2i").unwrap();
        assert_eq!(z.to_string(), "0.5-2i");
        let e = CoeffDomain::parse("index=4").unwrap();
        assert_eq!(e.lambda_pow(-2).to_string(), "1/4");
        assert_eq!(e.parse_scalar("0.25").unwrap(), e.lambda_pow(-2));
    }
}
