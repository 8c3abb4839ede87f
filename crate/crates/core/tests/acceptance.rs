//! Exit gate: one PASS/FAIL line per criterion, with wall time against a
//! pinned budget. A criterion passes only if every case holds and the
//! budget is met.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tl_core::aof::{invariant_vectors, verify_quasitensor, FMatrix};
use tl_core::certificate::CaseResult;
use tl_core::checks::{catalan_suite, conjugate_suite, gram_dimension_suite, markov_suite, relation_suite};
use tl_core::graph::{growth_rate, path_dims, PrincipalGraph};
use tl_core::jones::{p_exchange_sweep, run_pair_sweep};
use tl_core::spectral::{verify_associativity, verify_relations, verify_star, verify_traciality, SpectralAlgebra};
use tl_core::tl::diagram::catalan;
use tl_core::CoeffDomain;

/// Rank tolerance for float intertwiner dimensions.
const RANK_EPS: f64 = 1e-9;
/// Relative tolerance on the A₄ growth rate at r = 32.
const GROWTH_TOL: f64 = 0.10;

struct Outcome {
    cases: Vec<CaseResult>,
    notes: Vec<String>,
}

impl From<Vec<CaseResult>> for Outcome {
    fn from(cases: Vec<CaseResult>) -> Self {
        Self { cases, notes: Vec::new() }
    }
}

fn domain(s: &str) -> CoeffDomain {
    CoeffDomain::parse(s).expect("valid domain descriptor")
}

fn criterion(id: usize, name: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let failed: Vec<&CaseResult> = out.cases.iter().filter(|c| !c.equal).collect();
    let in_budget = elapsed <= budget;
    let pass = failed.is_empty() && in_budget && !out.cases.is_empty();
    for note in &out.notes {
        println!("      {note}");
    }
    println!(
        "{} {id:>2} {name}: {}/{} cases, {:.2} s (budget {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.cases.len() - failed.len(),
        out.cases.len(),
        elapsed.as_secs_f64(),
        budget.as_secs(),
    );
    for c in failed.iter().take(5) {
        println!("      failed {}: {} ≠ {} {}", c.case, c.lhs, c.rhs, c.detail.as_deref().unwrap_or(""));
    }
    if !in_budget {
        println!("      over budget");
    }
    pass
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut results = Vec::new();

    results.push(criterion(1, "TL relations, n ≤ 8, symbolic", secs(10), || {
        relation_suite(&CoeffDomain::symbolic(), 8).into()
    }));

    results.push(criterion(2, "run-pair reduction s ≤ 8 and p-exchange r ≤ 5, symbolic", secs(60), || {
        let d = CoeffDomain::symbolic();
        let mut cases = run_pair_sweep(&d, 8);
        cases.extend(p_exchange_sweep(&d, 5));
        cases.into()
    }));

    results.push(criterion(3, "conjugate equations in coordinates, levels ≤ 6", secs(60), || {
        // source level r + s ≤ 4, so every arrow involved has level ≤ 6
        conjugate_suite(&CoeffDomain::symbolic(), 4).into()
    }));

    results.push(criterion(4, "Markov trace metric on full bases, n ≤ 6, symbolic", secs(120), || {
        markov_suite(&CoeffDomain::symbolic(), 6).into()
    }));

    results.push(criterion(5, "Gram rank = path count on A_{m-1}, m ∈ {4,5,6,7}, n ≤ 6", secs(600), || {
        let cases = gram_dimension_suite(&[4, 5, 6, 7], 6);
        let anchor = cases.iter().find(|c| c.case == "m=4 n=3").map(|c| c.lhs.clone()).unwrap_or_default();
        let mut cases = cases;
        let ok = anchor == "4";
        cases.push(CaseResult::new("rank at m=4 n=3", anchor, 4, ok));
        cases.into()
    }));

    results.push(criterion(6, "Catalan counts n ≤ 10, invariant dims at t=0.7, even r ≤ 8", secs(60), || {
        let mut cases = catalan_suite(10);
        let t = 0.7f64;
        let d = t * t + 1.0 / (t * t);
        let dom = CoeffDomain::float(d, RANK_EPS);
        let f = FMatrix::parse(&dom, "t=0.7").expect("valid F");
        for r in (0..=8).step_by(2) {
            let got = invariant_vectors(&f, r).len();
            let want = catalan(r / 2) as usize;
            cases.push(CaseResult::new(format!("dim Hom(1, u^⊗{r})"), got, want, got == want));
        }
        cases.into()
    }));

    results.push(criterion(7, "A₄ growth rate at r = 32 within 10%", secs(5), || {
        let g = PrincipalGraph::a_series(4).expect("A4");
        let report = growth_rate(&path_dims(&g, 32));
        let beta = 4.0 * (std::f64::consts::PI / 5.0).cos().powi(2);
        let mut notes = vec!["r   d_r          d_r^(1/r)".to_string()];
        notes.extend(report.rows.iter().map(|row| format!("{:<3} {:<12} {:.6}", row.r, row.d_r, row.root)));
        let rel = (report.estimate - beta).abs() / beta;
        let case = CaseResult::new("r=32", format!("{:.6}", report.estimate), format!("{beta:.6}"), rel <= GROWTH_TOL)
            .with_detail(format!("relative error {rel:.4}"));
        notes.push(format!("estimate {:.6} vs 4cos²(π/5) = {beta:.6}, relative error {rel:.4}", report.estimate));
        Outcome { cases: vec![case], notes }
    }));

    results.push(criterion(8, "spectral algebra associativity/star total ≤ 6, relations r+s ≤ 4", secs(600), || {
        let dom = domain("index=17/4");
        let alg = SpectralAlgebra::with_max_level(FMatrix::parse(&dom, "t=2").expect("valid F"), 6);
        let mut cases = verify_associativity(&alg, 6);
        cases.extend(verify_star(&alg, 6));
        cases.extend(verify_relations(&alg, 4));
        cases.into()
    }));

    results.push(criterion(9, "traciality for F = I₂, levels ≤ 3", secs(60), || {
        let dom = domain("index=2");
        let alg = SpectralAlgebra::with_max_level(FMatrix::parse(&dom, "I2").expect("valid F"), 6);
        verify_traciality(&alg, 3).into()
    }));

    results.push(criterion(10, "quasitensor axioms, total level ≤ 3", secs(60), || {
        let mut cases = Vec::new();
        for (d, f) in [("index=2", "I2"), ("index=17/4", "t=2")] {
            let dom = domain(d);
            let f = FMatrix::parse(&dom, f).expect("valid F");
            cases.extend(verify_quasitensor(&f, 3));
        }
        cases.into()
    }));

    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
