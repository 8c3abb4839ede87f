//! Cross-check of diagram composition against a rewriting oracle that
//! never builds a diagram: words in the e_i are reduced with
//! `e_i e_i → e_i`, `e_i e_{i±1} e_i → λ⁻² e_i` modulo the commutations
//! `e_i e_j = e_j e_i` (|i − j| ≥ 2), and compared by the lexicographically
//! least word of the commutation class.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;

use tl_core::tl::words::diagram_word;
use tl_core::{CoeffDomain, TlElement};

fn commutation_class(w: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([w.to_vec()]);
    seen.insert(w.to_vec());
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            if x[i].abs_diff(x[i + 1]) >= 2 {
                let mut y = x.clone();
                y.swap(i, i + 1);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// One reduction step somewhere in the class, returning the shorter word
/// and how many factors of λ⁻² it produced.
fn reduce_once(class: &BTreeSet<Vec<usize>>) -> Option<(Vec<usize>, u32)> {
    for x in class {
        for i in 0..x.len() {
            if i + 1 < x.len() && x[i] == x[i + 1] {
                let mut y = x.clone();
                y.remove(i);
                return Some((y, 0));
            }
            if i + 2 < x.len() && x[i] == x[i + 2] && x[i].abs_diff(x[i + 1]) == 1 {
                let mut y = x.clone();
                y.drain(i + 1..i + 3);
                return Some((y, 1));
            }
        }
    }
    None
}

/// `(k, canonical word)` with `w = λ^{-2k} · word`.
fn oracle(w: &[usize]) -> (u32, Vec<usize>) {
    let mut cur = w.to_vec();
    let mut k = 0;
    loop {
        let class = commutation_class(&cur);
        match reduce_once(&class) {
            Some((y, dk)) => {
                cur = y;
                k += dk;
            }
            None => return (k, class.into_iter().next().unwrap()),
        }
    }
}

#[test]
fn random_words_match_rewriting_oracle() {
    let d = CoeffDomain::symbolic();
    let mut rng = StdRng::seed_from_u64(0x7e1);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=7);
        let len = rng.gen_range(0..=12);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(1..n)).collect();
        let (k, canon) = oracle(&w);
        let x = TlElement::from_letters(&d, n, &w).unwrap();
        assert_eq!(x.len(), 1, "word {w:?}");
        let (diag, c) = x.terms().iter().next().unwrap();
        // a diagram equals λ^{|v|} e_v for its loop-free word v
        let v = diagram_word(diag);
        let expect = d.lambda_pow(-2 * k as i64 - v.len() as i64);
        assert_eq!(*c, expect, "coefficient for {w:?}");
        let class = commutation_class(&v);
        assert_eq!(class.into_iter().next().unwrap(), canon, "normal form for {w:?}");
    }
}

#[test]
fn oracle_sanity() {
    assert_eq!(oracle(&[1, 2, 1]), (1, vec![1]));
    assert_eq!(oracle(&[3, 1]), (0, vec![1, 3]));
    assert_eq!(oracle(&[2, 2, 2]), (0, vec![2]));
    assert_eq!(oracle(&[1, 3, 2, 1, 3]), (1, vec![1, 3]));
    assert_eq!(oracle(&[2, 3, 1, 2]), (0, vec![2, 1, 3, 2]));
}
