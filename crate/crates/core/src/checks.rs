//! Exhaustive identity sweeps over diagram bases, shared by the CLI and the
//! acceptance tests.

use rayon::prelude::*;

use crate::certificate::CaseResult;
use crate::coords::{insert_r, insert_r_star};
use crate::graph::{path_dims, PrincipalGraph};
use crate::markov::gram_rank;
use crate::scalar::CoeffDomain;
use crate::tl::diagram::{basis, catalan, enumerate};
use crate::tl::TlElement;

fn e(d: &CoeffDomain, n: usize, i: usize) -> TlElement {
    TlElement::e(d, n, i).expect("generator index in range")
}

/// Idempotence, the braid-type relation `e_i e_{i±1} e_i = λ⁻² e_i`,
/// far commutativity and self-adjointness for every index at every
/// `n ≤ n_max`.
pub fn relation_suite(d: &CoeffDomain, n_max: usize) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let gens: Vec<TlElement> = (1..n).map(|i| e(d, n, i)).collect();
        let l2 = d.lambda_pow(-2);
        for i in 0..n - 1 {
            let ei = &gens[i];
            let sq = ei * ei;
            out.push(CaseResult::new(format!("n={n} e{0}e{0}=e{0}", i + 1), &sq, ei, sq == *ei));
            out.push(CaseResult::new(format!("n={n} e{0}*=e{0}", i + 1), ei.star(), ei, ei.star() == *ei));
            for j in 0..n - 1 {
                let ej = &gens[j];
                if i.abs_diff(j) == 1 {
                    let lhs = &(ei * ej) * ei;
                    let rhs = ei.scale(&l2);
                    let ok = lhs == rhs;
                    out.push(CaseResult::new(format!("n={n} e{a}e{b}e{a}=λ^-2e{a}", a = i + 1, b = j + 1), lhs, rhs, ok));
                } else if i.abs_diff(j) >= 2 && i < j {
                    let (lhs, rhs) = (ei * ej, ej * ei);
                    let ok = lhs == rhs;
                    out.push(CaseResult::new(format!("n={n} e{}e{} commute", i + 1, j + 1), lhs, rhs, ok));
                }
            }
        }
    }
    out
}

/// Trace property, trace preservation of the conditional expectation, the
/// Markov property and `⟨S*, T*⟩ = ⟨T, S⟩`, over full diagram bases.
pub fn markov_suite(d: &CoeffDomain, n_max: usize) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let diags: Vec<TlElement> = basis(n)
            .diagrams
            .iter()
            .map(|x| TlElement::from_diagram(d, x.clone(), d.one()))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..diags.len())
            .flat_map(|i| (0..diags.len()).map(move |j| (i, j)))
            .collect();
        let (trace_bad, anti_bad) = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (s, t) = (&diags[i], &diags[j]);
                let tr = (s * t).trace() != (t * s).trace();
                let anti = s.star().inner(&t.star()).ok() != t.inner(s).ok();
                (tr as usize, anti as usize)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let total = pairs.len();
        out.push(CaseResult::new(format!("n={n} tr(xy)=tr(yx), {total} pairs"), trace_bad, 0, trace_bad == 0));
        out.push(CaseResult::new(format!("n={n} <S*,T*>=<T,S>, {total} pairs"), anti_bad, 0, anti_bad == 0));
        let mut e_bad = 0;
        let mut m_bad = 0;
        let en = e(d, n + 1, n);
        for x in &diags {
            if n >= 2 && x.cond_expectation().map(|y| y.trace()).ok() != Some(x.trace()) {
                e_bad += 1;
            }
            if (&x.extend_right(1) * &en).trace() != &x.trace() * &d.lambda_pow(-2) {
                m_bad += 1;
            }
        }
        if n >= 2 {
            out.push(CaseResult::new(format!("n={n} tr∘E=tr"), e_bad, 0, e_bad == 0));
        }
        out.push(CaseResult::new(format!("n={n} tr(x e_{})=λ^-2 tr(x)", n), m_bad, 0, m_bad == 0));
    }
    out
}

/// Both zigzag identities and the loop value `R*R = β` for the coordinate
/// insertions, on every diagram of every level `r + s ≤ low_max`.
pub fn conjugate_suite(d: &CoeffDomain, low_max: usize) -> Vec<CaseResult> {
    let shapes: Vec<(usize, usize)> = (0..=low_max).flat_map(|l| (0..=l).map(move |r| (r, l - r))).collect();
    shapes
        .par_iter()
        .flat_map_iter(|&(r, s)| {
            let mut loop_bad = 0;
            let mut left_bad = 0;
            let mut right_bad = 0;
            let diags = &basis(r + s).diagrams;
            for x in diags {
                let z = TlElement::from_diagram(d, x.clone(), d.one());
                let up = insert_r(r, s, &z).expect("levels valid");
                if insert_r_star(r, s, &up).expect("levels valid") != z.scale(&d.beta()) {
                    loop_bad += 1;
                }
                if r >= 1 && insert_r_star(r - 1, s + 1, &up).expect("levels valid") != z {
                    left_bad += 1;
                }
                if s >= 1 && insert_r_star(r + 1, s - 1, &up).expect("levels valid") != z {
                    right_bad += 1;
                }
            }
            let k = diags.len();
            let mut cases = vec![CaseResult::new(format!("r={r} s={s} R*R=β on {k} diagrams"), loop_bad, 0, loop_bad == 0)];
            if r >= 1 {
                cases.push(CaseResult::new(format!("r={r} s={s} left zigzag"), left_bad, 0, left_bad == 0));
            }
            if s >= 1 {
                cases.push(CaseResult::new(format!("r={r} s={s} right zigzag"), right_bad, 0, right_bad == 0));
            }
            cases
        })
        .collect()
}

/// Gram rank of TL_n at index `4cos²(π/m)` against closed walks of length
/// `2n` at the end vertex of A_{m−1}.
pub fn gram_dimension_suite(ms: &[u64], n_max: usize) -> Vec<CaseResult> {
    let cases: Vec<(u64, usize)> = ms.iter().flat_map(|&m| (1..=n_max).map(move |n| (m, n))).collect();
    cases
        .par_iter()
        .map(|&(m, n)| {
            let label = format!("m={m} n={n}");
            let dom = match CoeffDomain::root_of_unity(m) {
                Ok(x) => x,
                Err(e) => return CaseResult::new(label, "", "", false).with_detail(e.to_string()),
            };
            let g = PrincipalGraph::a_series(m as usize - 1).expect("m ≥ 3");
            let walks = path_dims(&g, n).values[n].clone();
            match gram_rank(&dom, n) {
                Ok(rank) => {
                    let ok = walks == rank.into();
                    CaseResult::new(label, rank, walks, ok)
                }
                Err(e) => CaseResult::new(label, "", walks, false).with_detail(e.to_string()),
            }
        })
        .collect()
}

/// Number of enumerated diagrams against the Catalan numbers.
pub fn catalan_suite(n_max: usize) -> Vec<CaseResult> {
    (0..=n_max)
        .map(|n| {
            let k = enumerate(n).len() as u128;
            CaseResult::new(format!("n={n}"), k, catalan(n), k == catalan(n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let d = CoeffDomain::symbolic();
        assert!(relation_suite(&d, 4).iter().all(|c| c.equal));
        assert!(markov_suite(&d, 3).iter().all(|c| c.equal));
        assert!(conjugate_suite(&d, 2).iter().all(|c| c.equal));
        assert!(catalan_suite(6).iter().all(|c| c.equal));
        let dims = gram_dimension_suite(&[4], 3);
        assert!(dims.iter().all(|c| c.equal), "{dims:?}");
        assert_eq!(dims[2].lhs, "4");
    }
}
