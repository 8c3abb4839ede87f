//! Principal-graph path models: level dimensions as loop counts, growth
//! rates, an embedding obstruction, and Bratteli diagrams.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("adjacency matrix must be square, symmetric, with zero diagonal")]
    BadAdjacency,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("distinguished vertex {0} out of range")]
    BadStar(usize),
    #[error("unknown graph name {0:?}; built-ins are A<m> for m ≥ 2")]
    UnknownName(String),
    #[error("cannot parse graph JSON: {0}")]
    Json(String),
}

/// A connected bipartite graph with a distinguished vertex `*`.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipalGraph {
    pub name: String,
    pub adjacency: Vec<Vec<u32>>,
    pub star: usize,
}

#[derive(Deserialize)]
struct GraphJson {
    adjacency: Vec<Vec<u32>>,
    #[serde(default)]
    star: usize,
    #[serde(default)]
    name: Option<String>,
}

impl PrincipalGraph {
    pub fn new(name: impl Into<String>, adjacency: Vec<Vec<u32>>, star: usize) -> Result<Self, GraphError> {
        let v = adjacency.len();
        if v == 0 || adjacency.iter().any(|r| r.len() != v) {
            return Err(GraphError::BadAdjacency);
        }
        for i in 0..v {
            if adjacency[i][i] != 0 || (0..v).any(|j| adjacency[i][j] != adjacency[j][i]) {
                return Err(GraphError::BadAdjacency);
            }
        }
        if star >= v {
            return Err(GraphError::BadStar(star));
        }
        // 2-colour from the star; its colour class is the even part
        let mut colour = vec![None; v];
        colour[star] = Some(0u8);
        let mut stack = vec![star];
        while let Some(i) = stack.pop() {
            let c = colour[i].unwrap();
            for j in 0..v {
                if adjacency[i][j] == 0 {
                    continue;
                }
                match colour[j] {
                    None => {
                        colour[j] = Some(1 - c);
                        stack.push(j);
                    }
                    Some(cj) if cj == c => return Err(GraphError::NotBipartite),
                    _ => {}
                }
            }
        }
        if colour.iter().any(Option::is_none) {
            return Err(GraphError::Disconnected);
        }
        Ok(Self {
            name: name.into(),
            adjacency,
            star,
        })
    }

    /// The path `A_m` on `m` vertices, starred at an end.
    pub fn a_series(m: usize) -> Result<Self, GraphError> {
        if m < 2 {
            return Err(GraphError::UnknownName(format!("A{m}")));
        }
        let mut a = vec![vec![0; m]; m];
        for i in 0..m - 1 {
            a[i][i + 1] = 1;
            a[i + 1][i] = 1;
        }
        Self::new(format!("A{m}"), a, 0)
    }

    /// `A<m>` or a JSON object `{"adjacency": [[…]], "star": 0}`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let text = text.trim();
        if text.starts_with('{') {
            let g: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
            return Self::new(g.name.unwrap_or_else(|| "custom".into()), g.adjacency, g.star);
        }
        let m = text
            .strip_prefix('A')
            .or_else(|| text.strip_prefix("A_"))
            .and_then(|s| s.trim_start_matches('_').parse().ok())
            .ok_or_else(|| GraphError::UnknownName(text.to_string()))?;
        Self::a_series(m)
    }

    pub fn vertices(&self) -> usize {
        self.adjacency.len()
    }

    fn apply(&self, v: &[BigUint]) -> Vec<BigUint> {
        self.adjacency
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| **a != 0)
                    .fold(BigUint::zero(), |acc, (&a, x)| acc + x * a)
            })
            .collect()
    }

    /// Path counts `A^r e_*` for `r = 0..=levels`.
    pub fn floor_counts(&self, levels: usize) -> Vec<Vec<BigUint>> {
        let mut v = vec![BigUint::zero(); self.vertices()];
        v[self.star] = BigUint::one();
        let mut out = vec![v.clone()];
        for _ in 0..levels {
            v = self.apply(&v);
            out.push(v.clone());
        }
        out
    }

    /// Perron–Frobenius eigenvalue of the adjacency matrix (power iteration
    /// on `A²`, which is what converges for a bipartite graph).
    pub fn perron_frobenius(&self) -> f64 {
        let n = self.vertices();
        let mut v = vec![1.0f64; n];
        let mut mu = 0.0;
        let mul = |x: &[f64]| -> Vec<f64> {
            self.adjacency
                .iter()
                .map(|row| row.iter().zip(x).map(|(&a, y)| a as f64 * y).sum())
                .collect()
        };
        for _ in 0..10_000 {
            let w = mul(&mul(&v));
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let old = mu;
            mu = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v = next;
            if (mu - old).abs() <= 1e-15 * mu {
                break;
            }
        }
        mu.sqrt()
    }

    /// Index `β`: the squared Perron–Frobenius eigenvalue.
    pub fn index(&self) -> f64 {
        self.perron_frobenius().powi(2)
    }
}

/// `d_r` for `r = 0..=R`.
#[derive(Clone, Debug, Serialize)]
pub struct DimSequence {
    pub graph: String,
    #[serde(serialize_with = "ser_big")]
    pub values: Vec<BigUint>,
    pub beta: f64,
}

fn ser_big<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl DimSequence {
    pub fn from_values(values: Vec<BigUint>, beta: f64) -> Self {
        Self {
            graph: "custom".into(),
            values,
            beta,
        }
    }
}

/// `d_r = (A^{2r})_{*,*} = ‖A^r e_*‖²`, exactly.
pub fn path_dims(g: &PrincipalGraph, levels: usize) -> DimSequence {
    let values = g
        .floor_counts(levels)
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum())
        .collect();
    DimSequence {
        graph: g.name.clone(),
        values,
        beta: g.index(),
    }
}

fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    // keep the top 64 bits
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub r: usize,
    pub d_r: String,
    pub root: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub estimate: f64,
    pub beta: f64,
}

/// The table `d_r^{1/r}`; the estimate is the last entry.
pub fn growth_rate(d: &DimSequence) -> GrowthReport {
    let rows: Vec<GrowthRow> = d
        .values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(r, x)| GrowthRow {
            r,
            d_r: x.to_string(),
            root: (big_ln(x) / r as f64).exp(),
        })
        .collect();
    let estimate = rows.last().map_or(1.0, |row| row.root);
    GrowthReport {
        rows,
        estimate,
        beta: d.beta,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedRow {
    pub r: usize,
    pub d_r: String,
    pub n_pow_r: String,
    pub violates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedVerdict {
    pub n: u64,
    /// Least `r` with `d_r > n^r`.
    pub first_violation: Option<usize>,
    pub rows: Vec<EmbedRow>,
}

impl EmbedVerdict {
    pub fn summary(&self) -> String {
        match self.first_violation {
            Some(r) => format!("obstruction at r = {r}: d_r exceeds {}^r", self.n),
            None => format!("no obstruction up to r = {}", self.rows.len().saturating_sub(1)),
        }
    }
}

/// Compare `d_r` with `n^r`.
pub fn embedability_check(d: &DimSequence, n: u64) -> EmbedVerdict {
    let mut pow = BigUint::one();
    let mut rows = Vec::new();
    let mut first = None;
    for (r, x) in d.values.iter().enumerate() {
        let violates = *x > pow;
        if violates && first.is_none() {
            first = Some(r);
        }
        rows.push(EmbedRow {
            r,
            d_r: x.to_string(),
            n_pow_r: pow.to_string(),
            violates,
        });
        pow *= n;
    }
    EmbedVerdict {
        n,
        first_violation: first,
        rows,
    }
}

/// Layered DOT graph of floors `0..=levels`; each node is a vertex reached
/// at that floor, labelled with its path count.
pub fn bratteli_export(g: &PrincipalGraph, levels: usize) -> String {
    let floors = g.floor_counts(levels);
    let mut out = String::new();
    let _ = writeln!(out, "digraph bratteli {{");
    let _ = writeln!(out, "  rankdir=TB;");
    let _ = writeln!(out, "  label=\"{} floors 0..{}\";", g.name, levels);
    for (r, counts) in floors.iter().enumerate() {
        let _ = write!(out, "  {{ rank=same;");
        for (v, c) in counts.iter().enumerate() {
            if !c.is_zero() {
                let _ = write!(out, " f{r}_v{v};");
            }
        }
        let _ = writeln!(out, " }}");
        for (v, c) in counts.iter().enumerate() {
            if !c.is_zero() {
                let _ = writeln!(out, "  f{r}_v{v} [label=\"{c}\", tooltip=\"floor {r}, vertex {v}\"];");
            }
        }
    }
    for r in 1..floors.len() {
        for (v, c) in floors[r].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (u, p) in floors[r - 1].iter().enumerate() {
                let m = g.adjacency[u][v];
                if p.is_zero() || m == 0 {
                    continue;
                }
                for _ in 0..m {
                    let _ = writeln!(out, "  f{}_v{u} -> f{r}_v{v};", r - 1);
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(d: &DimSequence) -> Vec<u64> {
        d.values.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn a_series_dims() {
        let a3 = PrincipalGraph::a_series(3).unwrap();
        assert_eq!(vals(&path_dims(&a3, 4)), vec![1, 1, 2, 4, 8]);
        let a4 = PrincipalGraph::parse("A4").unwrap();
        assert_eq!(vals(&path_dims(&a4, 5)), vec![1, 1, 2, 5, 13, 34]);
        assert!((a3.index() - 2.0).abs() < 1e-12);
        let golden2 = 4.0 * (std::f64::consts::PI / 5.0).cos().powi(2);
        assert!((a4.index() - golden2).abs() < 1e-12);
    }

    #[test]
    fn growth() {
        let a3 = PrincipalGraph::a_series(3).unwrap();
        let g = growth_rate(&path_dims(&a3, 40));
        assert!((g.estimate - 2.0).abs() < 0.05);
        let a4 = PrincipalGraph::a_series(4).unwrap();
        let g = growth_rate(&path_dims(&a4, 32));
        assert!((g.estimate - g.beta).abs() < 0.1 * g.beta);
        let flat = DimSequence::from_values(vec![BigUint::one(); 6], 1.0);
        assert!((growth_rate(&flat).estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedability() {
        let a3 = path_dims(&PrincipalGraph::a_series(3).unwrap(), 8);
        assert_eq!(embedability_check(&a3, 1).first_violation, Some(2));
        let a4 = path_dims(&PrincipalGraph::a_series(4).unwrap(), 20);
        // β ≈ 2.618 > 2, so d_r eventually outgrows 2^r: 34 > 32 at r = 5
        assert_eq!(embedability_check(&a4, 2).first_violation, Some(5));
        assert_eq!(embedability_check(&a4, 3).first_violation, None);
        assert_eq!(embedability_check(&a4, 1).first_violation, Some(2));
    }

    #[test]
    fn bratteli() {
        let a3 = PrincipalGraph::a_series(3).unwrap();
        let dot = bratteli_export(&a3, 2);
        // floors {v0}, {v1}, {v0, v2}
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert_eq!(dot.matches("[label=").count(), 4);
        let floors = a3.floor_counts(2);
        let sums: Vec<u64> = floors.iter().map(|f| f.iter().map(|x| x.to_u64().unwrap()).sum()).collect();
        assert_eq!(sums, vec![1, 1, 2]);
        let dot0 = bratteli_export(&a3, 0);
        assert_eq!(dot0.matches("[label=").count(), 1);
    }

    #[test]
    fn validation() {
        assert!(PrincipalGraph::parse(r#"{"adjacency": [[0,1],[1,0]], "star": 0}"#).is_ok());
        assert_eq!(
            PrincipalGraph::parse(r#"{"adjacency": [[0,1,1],[1,0,1],[1,1,0]]}"#).unwrap_err(),
            GraphError::NotBipartite
        );
        assert_eq!(
            PrincipalGraph::parse(r#"{"adjacency": [[0,0],[0,0]]}"#).unwrap_err(),
            GraphError::Disconnected
        );
        assert!(PrincipalGraph::parse("D5").is_err());
        assert!(PrincipalGraph::parse("A1").is_err());
    }
}
