//! Jones-projection words and the reduced-word normal form.
//!
//! A word is reduced when it factors into descending runs
//! `(e_{j1}⋯e_{i1})(e_{j2}⋯e_{i2})⋯` with `j1 < j2 < …` and `i1 < i2 < …`.
//! Reduced words are in bijection with planar diagrams, and the diagram of a
//! reduced word closes no loops.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::diagram::{catalan, Diagram};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct JonesWord {
    pub prefactor: Scalar,
    pub letters: Vec<usize>,
}

impl JonesWord {
    pub fn new(prefactor: Scalar, letters: Vec<usize>) -> Self {
        Self { prefactor, letters }
    }

    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.letters)
    }

    /// Letter reversal (the involution on words, with conjugated prefactor).
    pub fn reversed(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        Self::new(self.prefactor.conj(), letters)
    }
}

/// Render letters as `e2e1e3`, or `e10·e9` once indices need two digits.
pub fn render_letters(letters: &[usize]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    let sep = if letters.iter().all(|&i| i < 10) { "" } else { "·" };
    letters
        .iter()
        .map(|i| format!("e{i}"))
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for JonesWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = self.prefactor.to_string();
        let coeff = if coeff.contains(" + ") || coeff.contains(" - ") {
            format!("({coeff})")
        } else {
            coeff
        };
        if self.letters.is_empty() {
            f.write_str(&coeff)
        } else if self.prefactor.is_one() {
            f.write_str(&render_letters(&self.letters))
        } else {
            write!(f, "{coeff} · {}", render_letters(&self.letters))
        }
    }
}

/// Split a word into maximal descending runs `(start, end)` with
/// `start ≥ end`.
pub fn runs(letters: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in letters {
        match out.last_mut() {
            Some((_, end)) if i + 1 == *end => *end = i,
            _ => out.push((i, i)),
        }
    }
    out
}

/// Reduced-form shape test.
pub fn is_reduced(letters: &[usize]) -> bool {
    let r = runs(letters);
    r.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
}

/// The descending run `e_j e_{j-1} ⋯ e_i` (empty when `j < i`).
pub fn run(j: usize, i: usize) -> Vec<usize> {
    if j < i {
        return Vec::new();
    }
    (i..=j).rev().collect()
}

/// All reduced words on `n` strands.
pub fn reduced_words(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, min_j: usize, min_i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for j in min_j..n {
            for i in min_i..=j {
                let len = cur.len();
                cur.extend(run(j, i));
                go(n, j + 1, i + 1, cur, out);
                cur.truncate(len);
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, 1, &mut Vec::new(), &mut out);
    out
}

struct WordTable {
    word_of: HashMap<Diagram, Vec<usize>>,
}

fn table(n: usize) -> Arc<WordTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WordTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let mut word_of = HashMap::new();
    for w in reduced_words(n) {
        let (d, loops) = Diagram::from_word(n, &w).expect("reduced word letters in range");
        assert_eq!(loops, 0, "reduced word {w:?} closes a loop");
        let prev = word_of.insert(d, w);
        assert!(prev.is_none(), "two reduced words share a diagram");
    }
    assert_eq!(word_of.len() as u128, catalan(n), "reduced words do not cover TL_{n}");
    let t = Arc::new(WordTable { word_of });
    cache.lock().unwrap().entry(n).or_insert(t).clone()
}

/// The reduced word `w` with `D = U_w`.
pub fn diagram_word(d: &Diagram) -> Vec<usize> {
    table(d.strands())
        .word_of
        .get(d)
        .cloned()
        .expect("every planar diagram has a reduced word")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_words_biject_with_diagrams() {
        for n in 0..=7 {
            assert_eq!(reduced_words(n).len() as u128, catalan(n));
            let _ = table(n);
        }
    }

    #[test]
    fn runs_and_shape() {
        assert_eq!(runs(&[2, 1, 3, 2]), vec![(2, 1), (3, 2)]);
        assert!(is_reduced(&[2, 1, 3, 2]));
        assert!(!is_reduced(&[1, 2, 1]));
        assert!(is_reduced(&[1, 3]));
        assert!(!is_reduced(&[3, 1]));
        assert!(is_reduced(&[]));
    }

    #[test]
    fn diagram_word_lookup() {
        let (d, _) = Diagram::from_word(4, &[2, 1, 3, 2]).unwrap();
        assert_eq!(diagram_word(&d), vec![2, 1, 3, 2]);
        assert_eq!(diagram_word(&Diagram::identity(3)), Vec::<usize>::new());
        // e3 e1 has the same diagram as e1 e3
        let (d, _) = Diagram::from_word(4, &[3, 1]).unwrap();
        assert_eq!(diagram_word(&d), vec![1, 3]);
    }
}
