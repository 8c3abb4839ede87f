//! Noncrossing planar diagrams on n strands.
//!
//! Boundary points are numbered `0..n` along the top and `n..2n` along the
//! bottom, both left to right. A diagram is the involution `pairing` on
//! these `2n` points.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("pairing is not a fixed-point-free involution")]
    NotPerfectMatching,
    #[error("pairing has crossing arcs")]
    Crossing,
    #[error("generator index {index} out of range for {n} strands")]
    LetterOutOfRange { index: usize, n: usize },
    #[error("at most {max} strands are supported, got {0}", max = MAX_STRANDS)]
    TooManyStrands(usize),
}

pub const MAX_STRANDS: usize = 120;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Diagram {
    pairing: Vec<u8>,
}

impl Diagram {
    /// Validate and wrap a pairing array of even length.
    pub fn from_pairing(pairing: Vec<u8>) -> Result<Self, DiagramError> {
        let len = pairing.len();
        if len % 2 != 0 {
            return Err(DiagramError::NotPerfectMatching);
        }
        if len / 2 > MAX_STRANDS {
            return Err(DiagramError::TooManyStrands(len / 2));
        }
        for (i, &j) in pairing.iter().enumerate() {
            let j = j as usize;
            if j >= len || j == i || pairing[j] as usize != i {
                return Err(DiagramError::NotPerfectMatching);
            }
        }
        let d = Self { pairing };
        if !d.is_planar() {
            return Err(DiagramError::Crossing);
        }
        Ok(d)
    }

    pub fn identity(n: usize) -> Self {
        let mut pairing = vec![0u8; 2 * n];
        for i in 0..n {
            pairing[i] = (n + i) as u8;
            pairing[n + i] = i as u8;
        }
        Self { pairing }
    }

    /// Cup-cap diagram `U_i` joining strands `i` and `i+1` (1-based `i`).
    pub fn cup_cap(n: usize, i: usize) -> Result<Self, DiagramError> {
        if i == 0 || i >= n {
            return Err(DiagramError::LetterOutOfRange { index: i, n });
        }
        let mut d = Self::identity(n);
        let (a, b) = (i - 1, i);
        d.pairing[a] = b as u8;
        d.pairing[b] = a as u8;
        d.pairing[n + a] = (n + b) as u8;
        d.pairing[n + b] = (n + a) as u8;
        Ok(d)
    }

    pub fn strands(&self) -> usize {
        self.pairing.len() / 2
    }

    pub fn pairing(&self) -> &[u8] {
        &self.pairing
    }

    pub fn partner(&self, p: usize) -> usize {
        self.pairing[p] as usize
    }

    pub fn is_identity(&self) -> bool {
        let n = self.strands();
        (0..n).all(|i| self.partner(i) == n + i)
    }

    /// Number of arcs joining top to bottom.
    pub fn through_strands(&self) -> usize {
        let n = self.strands();
        (0..n).filter(|&i| self.partner(i) >= n).count()
    }

    /// Position in the cyclic order t0..t(n-1), b(n-1)..b0.
    fn cyc(n: usize, p: usize) -> usize {
        if p < n {
            p
        } else {
            3 * n - 1 - p
        }
    }

    fn is_planar(&self) -> bool {
        let n = self.strands();
        let mut by_pos = vec![0usize; 2 * n];
        for p in 0..2 * n {
            by_pos[Self::cyc(n, p)] = Self::cyc(n, self.partner(p));
        }
        let mut stack = Vec::new();
        for (pos, &other) in by_pos.iter().enumerate() {
            if other > pos {
                stack.push(pos);
            } else if stack.pop() != Some(other) {
                return false;
            }
        }
        true
    }

    /// Stack `self` on top of `other`; returns the product diagram and the
    /// number of closed loops removed.
    pub fn compose(&self, other: &Diagram) -> Result<(Diagram, usize), DiagramError> {
        let n = self.strands();
        if other.strands() != n {
            return Err(DiagramError::StrandMismatch(n, other.strands()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Diagram) -> (Diagram, usize) {
        let n = self.strands();
        let mut out = vec![u8::MAX; 2 * n];
        // middle points: bottom of self == top of other, indexed 0..n
        let mut middle_seen = vec![false; n];
        // endpoint kinds: (layer 0 = self, point) or (layer 1 = other, point)
        let trace = |start_layer: u8, start: usize, seen: &mut Vec<bool>| -> usize {
            let (mut layer, mut p) = (start_layer, start);
            loop {
                let q = if layer == 0 { self.partner(p) } else { other.partner(p) };
                if layer == 0 {
                    if q < n {
                        return q;
                    }
                    let m = q - n;
                    seen[m] = true;
                    layer = 1;
                    p = m;
                } else {
                    if q >= n {
                        return q;
                    }
                    seen[q] = true;
                    layer = 0;
                    p = n + q;
                }
            }
        };
        for t in 0..n {
            if out[t] != u8::MAX {
                continue;
            }
            let end = trace(0, t, &mut middle_seen);
            out[t] = end as u8;
            out[end] = t as u8;
        }
        for b in n..2 * n {
            if out[b] != u8::MAX {
                continue;
            }
            let end = trace(1, b, &mut middle_seen);
            out[b] = end as u8;
            out[end] = b as u8;
        }
        // remaining middle points lie on closed loops
        let mut loops = 0;
        for m in 0..n {
            if middle_seen[m] {
                continue;
            }
            loops += 1;
            let mut p = m;
            loop {
                middle_seen[p] = true;
                // through self from bottom point n+p
                let q = self.partner(n + p) - n;
                middle_seen[q] = true;
                let r = other.partner(q);
                if r == m {
                    break;
                }
                p = r;
            }
        }
        (Diagram { pairing: out }, loops)
    }

    /// Vertical reflection (the diagrammatic adjoint).
    pub fn flip(&self) -> Diagram {
        let n = self.strands();
        let swap = |p: usize| if p < n { p + n } else { p - n };
        let mut out = vec![0u8; 2 * n];
        for p in 0..2 * n {
            out[swap(p)] = swap(self.partner(p)) as u8;
        }
        Diagram { pairing: out }
    }

    /// Loops of the full trace closure (top `i` joined to bottom `i`).
    pub fn closure_loops(&self) -> usize {
        let n = self.strands();
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            loop {
                seen[p] = true;
                let q = self.partner(p);
                seen[q] = true;
                let next = if q < n { q + n } else { q - n };
                if next == s {
                    break;
                }
                p = next;
            }
        }
        loops
    }

    /// Close the rightmost strand (top `n-1` to bottom `2n-1`). Returns the
    /// diagram on `n-1` strands and the number of loops formed (0 or 1).
    pub fn close_last(&self) -> (Diagram, usize) {
        let n = self.strands();
        assert!(n >= 1, "cannot close a strand of the empty diagram");
        let (t, b) = (n - 1, 2 * n - 1);
        let m = n - 1;
        let loop_formed = self.partner(t) == b;
        // old bottom points n..2n-1 shift down by one
        let mut fixed = vec![0u8; 2 * m];
        for p in 0..2 * n {
            if p == t || p == b {
                continue;
            }
            let np = if p < n { p } else { p - 1 };
            let mut q = self.partner(p);
            if q == t {
                q = self.partner(b);
            } else if q == b {
                q = self.partner(t);
            }
            let nq = if q < n { q } else { q - 1 };
            fixed[np] = nq as u8;
        }
        (Diagram { pairing: fixed }, usize::from(loop_formed))
    }

    /// Add `k` through strands on the right.
    pub fn extend_right(&self, k: usize) -> Diagram {
        let n = self.strands();
        let m = n + k;
        let map = |p: usize| if p < n { p } else { p + k };
        let mut out = vec![0u8; 2 * m];
        for p in 0..2 * n {
            out[map(p)] = map(self.partner(p)) as u8;
        }
        for i in n..m {
            out[i] = (m + i) as u8;
            out[m + i] = i as u8;
        }
        Diagram { pairing: out }
    }

    /// Add `k` through strands on the left.
    pub fn extend_left(&self, k: usize) -> Diagram {
        Diagram::identity(k).juxtapose(self)
    }

    /// Horizontal juxtaposition: `self` on the left, `other` on the right.
    pub fn juxtapose(&self, other: &Diagram) -> Diagram {
        let (a, b) = (self.strands(), other.strands());
        let m = a + b;
        let map_a = |p: usize| if p < a { p } else { m + (p - a) };
        let map_b = |p: usize| if p < b { a + p } else { m + a + (p - b) };
        let mut out = vec![0u8; 2 * m];
        for p in 0..2 * a {
            out[map_a(p)] = map_a(self.partner(p)) as u8;
        }
        for p in 0..2 * b {
            out[map_b(p)] = map_b(other.partner(p)) as u8;
        }
        Diagram { pairing: out }
    }

    /// Diagram of the word `U_{i1}⋯U_{ik}` and the loops it closes.
    pub fn from_word(n: usize, letters: &[usize]) -> Result<(Diagram, usize), DiagramError> {
        let mut d = Diagram::identity(n);
        let mut loops = 0;
        for &i in letters {
            let u = Diagram::cup_cap(n, i)?;
            let (next, l) = d.compose_unchecked(&u);
            d = next;
            loops += l;
        }
        Ok((d, loops))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.pairing)
    }
}

/// All diagrams on `n` strands in lexicographic pairing order, with an index.
#[derive(Debug)]
pub struct DiagramBasis {
    pub n: usize,
    pub diagrams: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
}

impl DiagramBasis {
    pub fn index_of(&self, d: &Diagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }
}

/// Cached diagram basis of TL_n.
pub fn basis(n: usize) -> Arc<DiagramBasis> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DiagramBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&n) {
        return b.clone();
    }
    let diagrams = enumerate(n);
    let index = diagrams
        .iter()
        .enumerate()
        .map(|(i, d)| (d.clone(), i))
        .collect();
    let b = Arc::new(DiagramBasis {
        n,
        diagrams,
        index,
    });
    cache.lock().unwrap().entry(n).or_insert(b).clone()
}

/// Enumerate noncrossing perfect matchings of the 2n boundary points.
pub fn enumerate(n: usize) -> Vec<Diagram> {
    let total = 2 * n;
    // matchings on cyclic positions, then converted to point labels
    let point_of = |pos: usize| if pos < n { pos } else { 3 * n - 1 - pos };
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; total];
    noncrossing(0, total, &mut cur, &mut |m: &[usize]| {
        let mut pairing = vec![0u8; total];
        for pos in 0..total {
            pairing[point_of(pos)] = point_of(m[pos]) as u8;
        }
        out.push(Diagram { pairing });
    });
    out.sort();
    out
}

/// Enumerate noncrossing matchings of the interval `lo..hi` of positions.
fn noncrossing(lo: usize, hi: usize, cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    fn go(stack: &mut Vec<(usize, usize)>, cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        let Some((lo, hi)) = stack.pop() else {
            emit(cur);
            return;
        };
        if lo >= hi {
            go(stack, cur, emit);
            stack.push((lo, hi));
            return;
        }
        let mut k = lo + 1;
        while k < hi {
            cur[lo] = k;
            cur[k] = lo;
            stack.push((k + 1, hi));
            stack.push((lo + 1, k));
            go(stack, cur, emit);
            stack.pop();
            stack.pop();
            k += 2;
        }
        stack.push((lo, hi));
    }
    let mut stack = vec![(lo, hi)];
    go(&mut stack, cur, emit);
}

/// Catalan number C_n.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_catalan() {
        for n in 0..=8 {
            assert_eq!(enumerate(n).len() as u128, catalan(n), "n = {n}");
        }
        assert_eq!(catalan(10), 16796);
    }

    #[test]
    fn cup_cap_squares_to_loop() {
        let u = Diagram::cup_cap(2, 1).unwrap();
        assert_eq!(u.compose(&u).unwrap(), (u.clone(), 1));
        let id = Diagram::identity(3);
        let u1 = Diagram::cup_cap(3, 1).unwrap();
        assert_eq!(id.compose(&u1).unwrap(), (u1.clone(), 0));
    }

    #[test]
    fn zigzag() {
        let u1 = Diagram::cup_cap(3, 1).unwrap();
        let u2 = Diagram::cup_cap(3, 2).unwrap();
        let (z, loops) = u1.compose(&u2).unwrap();
        assert_eq!(loops, 0);
        // top 0-1 cap, bottom 1-2 cup, top 2 runs to bottom 0
        assert_eq!(z.pairing(), &[1, 0, 3, 2, 5, 4]);
        assert_eq!(z.through_strands(), 1);
        let (back, l2) = z.compose(&u1).unwrap();
        assert_eq!((back, l2), (u1, 0));
    }

    #[test]
    fn validation() {
        assert_eq!(Diagram::from_pairing(vec![2, 3, 0, 1]), Ok(Diagram::identity(2)));
        // t0-b1 and t1-b0 cross
        assert_eq!(Diagram::from_pairing(vec![3, 2, 1, 0]), Err(DiagramError::Crossing));
        assert_eq!(Diagram::from_pairing(vec![0, 1]), Err(DiagramError::NotPerfectMatching));
        assert!(Diagram::cup_cap(3, 3).is_err());
    }

    #[test]
    fn closures() {
        assert_eq!(Diagram::identity(3).closure_loops(), 3);
        assert_eq!(Diagram::cup_cap(2, 1).unwrap().closure_loops(), 1);
        let (d, l) = Diagram::identity(3).close_last();
        assert_eq!((d, l), (Diagram::identity(2), 1));
        let (d, l) = Diagram::cup_cap(3, 1).unwrap().close_last();
        assert_eq!((d, l), (Diagram::cup_cap(2, 1).unwrap(), 1));
        let (d, l) = Diagram::cup_cap(3, 2).unwrap().close_last();
        assert_eq!((d, l), (Diagram::identity(2), 0));
    }

    #[test]
    fn flip_and_embeddings() {
        let u1 = Diagram::cup_cap(3, 1).unwrap();
        let u2 = Diagram::cup_cap(3, 2).unwrap();
        let (z, _) = u1.compose(&u2).unwrap();
        let (z2, _) = u2.compose(&u1).unwrap();
        assert_eq!(z.flip(), z2);
        assert_eq!(Diagram::cup_cap(2, 1).unwrap().extend_right(1), u1);
        assert_eq!(Diagram::cup_cap(2, 1).unwrap().extend_left(1), u2);
        for d in enumerate(4) {
            assert_eq!(d.flip().flip(), d);
            assert!(Diagram::from_pairing(d.extend_right(2).pairing().to_vec()).is_ok());
        }
    }
}
