use proptest::prelude::*;

use tl_core::{CoeffDomain, Scalar, TlElement};

fn domains() -> Vec<CoeffDomain> {
    ["symbolic", "index=2", "index=4cos2(pi/5)", "index=17/4", "float:index=2.5"]
        .iter()
        .map(|s| CoeffDomain::parse(s).unwrap())
        .collect()
}

/// `Σ c_k λ^k` for small integer `c_k`, `k ∈ -3..=3`.
fn scalar(d: &CoeffDomain, coeffs: &[i64]) -> Scalar {
    coeffs
        .iter()
        .enumerate()
        .fold(d.zero(), |acc, (k, &c)| &acc + &(&d.int(c) * &d.lambda_pow(k as i64 - 3)))
}

fn element(d: &CoeffDomain, n: usize, terms: &[(i64, Vec<usize>)]) -> TlElement {
    terms.iter().fold(TlElement::zero(d, n), |acc, (c, w)| {
        let w: Vec<usize> = w.iter().map(|&i| 1 + i % (n - 1)).collect();
        &acc + &TlElement::from_letters(d, n, &w).unwrap().scale(&d.int(*c))
    })
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 7)
}

fn terms() -> impl Strategy<Value = Vec<(i64, Vec<usize>)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..8, 0..6)), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_ring_axioms(a in coeffs(), b in coeffs(), c in coeffs(), di in 0usize..5) {
        let d = &domains()[di];
        let (a, b, c) = (scalar(d, &a), scalar(d, &b), scalar(d, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, d.zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.try_recip().unwrap()).is_one());
        }
    }

    #[test]
    fn trace_is_tracial(x in terms(), y in terms(), n in 2usize..6, di in 0usize..5) {
        let d = &domains()[di];
        let (x, y) = (element(d, n, &x), element(d, n, &y));
        prop_assert_eq!((&x * &y).trace(), (&y * &x).trace());
        prop_assert_eq!(x.cond_expectation().unwrap().trace(), x.trace());
        // Markov property on one more strand
        let xe = &x.extend_right(1) * &TlElement::e(d, n + 1, n).unwrap();
        prop_assert_eq!(xe.trace(), &x.trace() * &d.lambda_pow(-2));
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(x in terms(), y in terms(), n in 2usize..6, di in 0usize..5) {
        let d = &domains()[di];
        let (x, y) = (element(d, n, &x), element(d, n, &y));
        prop_assert_eq!(x.star().star(), x.clone());
        prop_assert_eq!((&x * &y).star(), &y.star() * &x.star());
        prop_assert_eq!(x.star().inner(&y.star()).unwrap(), y.inner(&x).unwrap());
        prop_assert_eq!(x.star().trace(), x.trace().conj());
    }

    #[test]
    fn product_is_associative(x in terms(), y in terms(), z in terms(), n in 2usize..6) {
        let d = CoeffDomain::symbolic();
        let (x, y, z) = (element(&d, n, &x), element(&d, n, &y), element(&d, n, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }
}
