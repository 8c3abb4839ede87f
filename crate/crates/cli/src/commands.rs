use std::error::Error;
use std::fmt;
use std::io::Read;
use std::process::ExitCode;

use serde_json::{json, Value};

use tl_core::aof::{invariant_vectors, validate_report, verify_quasitensor, build_r_vector, FMatrix};
use tl_core::certificate::{CaseResult, Certificate};
use tl_core::checks::{catalan_suite, conjugate_suite, gram_dimension_suite, markov_suite, relation_suite};
use tl_core::coords::{insert_r, insert_r_star};
use tl_core::graph::{bratteli_export, embedability_check, growth_rate, path_dims, PrincipalGraph};
use tl_core::io::{coaction_to_json, element_from_json, element_to_json, parse_word_str, spectral_from_json, spectral_to_json};
use tl_core::jones::{build_f, build_p, p_exchange_sweep, run_pair_sweep};
use tl_core::markov::gram_matrix;
use tl_core::spectral::{
    configured_max_level, verify_associativity, verify_coaction, verify_relations, verify_star, verify_traciality,
    SpectralAlgebra, SpectralElement,
};
use tl_core::{CoeffDomain, TlElement};

use crate::{Command, DomainArgs, ElementArgs, GraphArgs, Lemma, SpectralArgs, SpectralOp, Suite, VerifyArgs};

/// An input problem, reported against the flag that caused it.
#[derive(Debug)]
pub struct UsageError {
    flag: &'static str,
    msg: String,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.flag, self.msg)
    }
}

impl Error for UsageError {}

type Result<T> = std::result::Result<T, UsageError>;

fn bad(flag: &'static str, e: impl ToString) -> UsageError {
    UsageError { flag, msg: e.to_string() }
}

fn domain(args: &DomainArgs) -> Result<CoeffDomain> {
    let d = CoeffDomain::parse(&args.domain).map_err(|e| bad("--domain", e))?;
    match args.eps {
        None => Ok(d),
        Some(eps) if eps > 0.0 => match d.lambda_f64() {
            Some(l) if !d.is_exact() => Ok(CoeffDomain::float(l * l, eps)),
            _ => Err(bad("--eps", "only meaningful for float domains")),
        },
        Some(_) => Err(bad("--eps", "must be positive")),
    }
}

fn read_source(path: Option<&str>, flag: &'static str) -> Result<String> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| bad(flag, e))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| bad(flag, format!("{p}: {e}"))),
    }
}

fn parse_json(text: &str, flag: &'static str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(flag, e))
}

fn word_element(d: &CoeffDomain, n: usize, word: &str, flag: &'static str) -> Result<TlElement> {
    let letters = parse_word_str(word).ok_or_else(|| bad(flag, format!("cannot parse word {word:?}")))?;
    TlElement::from_letters(d, n, &letters).map_err(|e| bad(flag, e))
}

fn element(d: &CoeffDomain, args: &ElementArgs) -> Result<TlElement> {
    match (&args.word, &args.input) {
        (Some(w), _) => {
            let n = args.n.ok_or_else(|| bad("--n", "required with --word"))?;
            word_element(d, n, w, "--word")
        }
        (None, path) => {
            let v = parse_json(&read_source(path.as_deref(), "--input")?, "--input")?;
            let x = element_from_json(d, &v).map_err(|e| bad("--input", e))?;
            if args.n.is_some_and(|n| n != x.strands()) {
                return Err(bad("--n", "does not match the element's strand count"));
            }
            Ok(x)
        }
    }
}

fn print_element(x: &TlElement, json: bool) {
    if json {
        println!("{}", element_to_json(x));
    } else {
        println!("{x}");
    }
}

fn graph(args: &GraphArgs) -> Result<PrincipalGraph> {
    let text = if std::path::Path::new(&args.graph).is_file() {
        std::fs::read_to_string(&args.graph).map_err(|e| bad("--graph", e))?
    } else {
        args.graph.clone()
    };
    PrincipalGraph::parse(&text).map_err(|e| bad("--graph", e))
}

fn algebra(args: &SpectralArgs) -> Result<SpectralAlgebra> {
    let d = domain(&args.domain)?;
    let f = FMatrix::parse(&d, &args.f).map_err(|e| bad("--F", e))?;
    Ok(SpectralAlgebra::with_max_level(f, args.max_level.unwrap_or_else(configured_max_level)))
}

fn spectral_input(alg: &SpectralAlgebra, path: Option<&str>) -> Result<SpectralElement> {
    let v = parse_json(&read_source(path, "input")?, "input")?;
    spectral_from_json(alg.domain(), alg.n(), &v).map_err(|e| bad("input", e))
}

fn emit_certificate(cert: &Certificate) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(cert).expect("certificate serializes"));
    let failed = cert.failures().count();
    eprintln!(
        "{}: {}/{} cases pass ({} ms)",
        cert.suite,
        cert.cases.len() - failed,
        cert.cases.len(),
        cert.wall_time_ms
    );
    if cert.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Mul { domain: da, n, words, input, out } => {
            let d = domain(&da)?;
            let mut acc = TlElement::identity(&d, n);
            for w in words.iter().flat_map(|w| w.split(';')) {
                acc = acc.checked_mul(&word_element(&d, n, w, "--words")?).map_err(|e| bad("--words", e))?;
            }
            for p in &input {
                let v = parse_json(&read_source(Some(p), "--input")?, "--input")?;
                let x = element_from_json(&d, &v).map_err(|e| bad("--input", e))?;
                acc = acc.checked_mul(&x).map_err(|e| bad("--input", e))?;
            }
            print_element(&acc, out.json);
        }
        Command::Nf { domain: da, element: ea, out } => {
            let d = domain(&da)?;
            let x = element(&d, &ea)?;
            if out.json {
                let diagrams: Vec<Value> = x
                    .terms()
                    .iter()
                    .map(|(g, c)| json!({"pairing": g.pairing(), "coeff": c.to_string()}))
                    .collect();
                println!("{}", json!({"words": element_to_json(&x), "diagrams": diagrams}));
            } else {
                println!("{x}");
            }
        }
        Command::Trace { domain: da, element: ea } => {
            let d = domain(&da)?;
            println!("{}", element(&d, &ea)?.trace());
        }
        Command::Expect { domain: da, element: ea, steps, out } => {
            let d = domain(&da)?;
            let x = element(&d, &ea)?.composite_expectation(steps).map_err(|e| bad("--steps", e))?;
            print_element(&x, out.json);
        }
        Command::Gram { domain: da, n, out } => {
            let d = domain(&da)?;
            let g = gram_matrix(&d, n).map_err(|e| bad("--n", e))?;
            if out.json {
                println!("{}", serde_json::to_string(&g).expect("report serializes"));
            } else {
                println!("n = {}, dimension {}", g.n, g.labels.len());
                println!("rank {} ({})", g.rank, g.method);
                println!("positivity {:?}", g.positivity);
                let q: Vec<String> = g
                    .quotient_basis
                    .iter()
                    .map(|&i| TlElement::from_diagram(&d, g.labels[i].clone(), d.one()).to_string())
                    .collect();
                println!("quotient basis: {}", q.join(", "));
            }
        }
        Command::Pword { domain: da, k, r, s, n, out } => {
            let d = domain(&da)?;
            let x = build_p(&d, k, r, s, n.unwrap_or(k + r + s)).map_err(|e| bad("--n", e))?;
            print_element(&x, out.json);
        }
        Command::F { domain: da, r, n, out } => {
            let d = domain(&da)?;
            let x = build_f(&d, r, n.unwrap_or(2 * r)).map_err(|e| bad("--n", e))?;
            print_element(&x, out.json);
        }
        Command::Insert { domain: da, element: ea, r, r_star, out } => {
            let d = domain(&da)?;
            let x = element(&d, &ea)?;
            let y = match (r, r_star) {
                (Some(rs), None) => insert_r(rs[0], rs[1], &x).map_err(|e| bad("--R", e))?,
                (None, Some(rs)) => insert_r_star(rs[0], rs[1], &x).map_err(|e| bad("--R-star", e))?,
                _ => return Err(bad("--R", "give exactly one of --R or --R-star")),
            };
            print_element(&y, out.json);
        }
        Command::Spectral { op } => spectral(op)?,
        Command::Verify(args) => return verify(args),
        Command::Dims { graph: ga, embed, csv, out } => {
            let g = graph(&ga)?;
            let dims = path_dims(&g, ga.levels);
            let verdict = embed.map(|n| embedability_check(&dims, n));
            if out.json {
                let values: Vec<String> = dims.values.iter().map(ToString::to_string).collect();
                println!("{}", json!({"graph": dims.graph, "beta": dims.beta, "d": values, "embed": verdict}));
            } else {
                println!("{}", if csv { "r,d_r" } else { "r\td_r" });
                for (r, v) in dims.values.iter().enumerate() {
                    println!("{r}{}{v}", if csv { "," } else { "\t" });
                }
                if let Some(v) = verdict {
                    eprintln!("{}", v.summary());
                }
            }
        }
        Command::Growth { graph: ga, csv, out } => {
            let g = graph(&ga)?;
            let report = growth_rate(&path_dims(&g, ga.levels));
            if out.json {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            } else {
                println!("{}", if csv { "r,d_r,root" } else { "r\td_r\td_r^(1/r)" });
                let sep = if csv { "," } else { "\t" };
                for row in &report.rows {
                    println!("{}{sep}{}{sep}{:.6}", row.r, row.d_r, row.root);
                }
                eprintln!("estimate {:.6}, index {:.6}", report.estimate, report.beta);
            }
        }
        Command::Bratteli { graph: ga, dot: _, out } => {
            let g = graph(&ga)?;
            let dot = bratteli_export(&g, ga.levels);
            if out.json {
                println!("{}", json!({"dot": dot}));
            } else {
                print!("{dot}");
            }
        }
        Command::Aof { domain: da, f, levels } => {
            let d = domain(&da)?;
            let f = FMatrix::parse(&d, &f).map_err(|e| bad("--F", e))?;
            let dims: Vec<Value> = (0..=levels)
                .map(|r| json!({"r": r, "invariant_vectors": invariant_vectors(&f, r).len()}))
                .collect();
            let report = json!({
                "report": validate_report(&f),
                "R": build_r_vector(&f).to_json(),
                "invariants": dims,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn spectral(op: SpectralOp) -> Result<()> {
    match op {
        SpectralOp::Mul { alg, a, b } => {
            let alg = algebra(&alg)?;
            let x = spectral_input(&alg, Some(&a))?;
            let y = spectral_input(&alg, Some(&b))?;
            let z = alg.product(&x, &y).map_err(|e| bad("--max-level", e))?;
            println!("{}", spectral_to_json(&z));
        }
        SpectralOp::Star { alg, input } => {
            let alg = algebra(&alg)?;
            let x = spectral_input(&alg, input.as_deref())?;
            println!("{}", spectral_to_json(&alg.star(&x)));
        }
        SpectralOp::State { alg, input } => {
            let alg = algebra(&alg)?;
            let x = spectral_input(&alg, input.as_deref())?;
            println!("{}", alg.invariant_state(&x).map_err(|e| bad("input", e))?);
        }
        SpectralOp::Coact { alg, input } => {
            let alg = algebra(&alg)?;
            let x = spectral_input(&alg, input.as_deref())?;
            println!("{}", coaction_to_json(&alg.coaction(&x)));
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let d = domain(&args.domain)?;
    let desc = d.descriptor().to_string();
    let max = args.max;
    let spectral_alg = || -> Result<SpectralAlgebra> {
        let f = FMatrix::parse(&d, &args.f).map_err(|e| bad("--F", e))?;
        Ok(SpectralAlgebra::with_max_level(f, configured_max_level().max(max)))
    };
    let cert = if let Some(lemma) = args.lemma {
        match lemma {
            Lemma::PairReduction => Certificate::run("pair-reduction", &desc, || run_pair_sweep(&d, max)),
            Lemma::PExchange => Certificate::run("p-exchange", &desc, || p_exchange_sweep(&d, max)),
        }
    } else if args.conjugate_eq {
        if args.max_level < 2 {
            return Err(bad("--max-level", "must be at least 2"));
        }
        Certificate::run("conjugate-equations", &desc, || conjugate_suite(&d, args.max_level - 2))
    } else {
        let suite = args.suite.expect("clap enforces one of the group");
        let cases: Box<dyn FnOnce() -> Vec<CaseResult>> = match suite {
            Suite::Relations => Box::new(|| relation_suite(&d, max)),
            Suite::Markov => Box::new(|| markov_suite(&d, max)),
            Suite::Catalan => Box::new(move || catalan_suite(max)),
            Suite::GramDims => Box::new(move || gram_dimension_suite(&[4, 5, 6, 7], max)),
            Suite::Associativity => {
                let alg = spectral_alg()?;
                Box::new(move || verify_associativity(&alg, max))
            }
            Suite::Star => {
                let alg = spectral_alg()?;
                Box::new(move || verify_star(&alg, max))
            }
            Suite::SpectralRelations => {
                let alg = spectral_alg()?;
                Box::new(move || verify_relations(&alg, max))
            }
            Suite::Traciality => {
                let alg = spectral_alg()?;
                Box::new(move || verify_traciality(&alg, max))
            }
            Suite::Coaction => {
                let alg = spectral_alg()?;
                Box::new(move || verify_coaction(&alg, max))
            }
            Suite::Quasitensor => {
                let f = FMatrix::parse(&d, &args.f).map_err(|e| bad("--F", e))?;
                Box::new(move || verify_quasitensor(&f, max))
            }
        };
        let name = clap::ValueEnum::to_possible_value(&suite).expect("no skipped variants").get_name().to_string();
        Certificate::run(&name, &desc, cases)
    };
    Ok(emit_certificate(&cert))
}
