//! Machine-readable verification results.

use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseResult {
    pub fn new(case: impl Into<String>, lhs: impl ToString, rhs: impl ToString, equal: bool) -> Self {
        Self {
            case: case.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub suite: String,
    pub domain: String,
    pub version: String,
    pub pass: bool,
    pub cases: Vec<CaseResult>,
    pub wall_time_ms: u128,
}

impl Certificate {
    /// Run `f` and wrap its cases; overall pass iff every case passes.
    pub fn run(suite: &str, domain: &str, f: impl FnOnce() -> Vec<CaseResult>) -> Self {
        let start = Instant::now();
        let cases = f();
        let pass = cases.iter().all(|c| c.equal);
        Self {
            suite: suite.to_string(),
            domain: domain.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            pass,
            cases,
            wall_time_ms: start.elapsed().as_millis(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.equal)
    }
}
