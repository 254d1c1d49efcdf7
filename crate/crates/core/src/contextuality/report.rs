use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::NcInequality;
use crate::graphs::Graph;
use crate::polytope::Inequality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Names a graph and pins its exact content by digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub name: String,
    pub n: usize,
    pub edges: usize,
    /// SHA-256 of the canonical graph JSON.
    pub digest: String,
}

impl GraphDescriptor {
    pub fn new(name: impl Into<String>, g: &Graph) -> Self {
        let json = serde_json::to_string(g).expect("graph serializes");
        GraphDescriptor {
            name: name.into(),
            n: g.n(),
            edges: g.edge_count(),
            digest: hex::encode(Sha256::digest(json.as_bytes())),
        }
    }
}

/// One member of a named inequality family and what enumeration found for
/// it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub k: usize,
    #[serde(flatten)]
    pub inequality: Inequality,
    pub support: Vec<usize>,
    pub valid: bool,
    pub facet: bool,
    /// Affine dimension of the face the row cuts out of the polytope.
    pub face_dim: Option<usize>,
}

/// Outcome of one mechanically checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub claim: String,
    pub graph: GraphDescriptor,
    pub verdict: Verdict,
    pub evidence: BTreeMap<String, u64>,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_inequality: Option<Inequality>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub families: BTreeMap<String, Vec<FamilyRow>>,
    pub facets: Vec<NcInequality>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TheoremReport {
    pub(crate) fn new(claim: &str, graph: GraphDescriptor) -> Self {
        TheoremReport {
            claim: claim.to_string(),
            graph,
            verdict: Verdict::Fail,
            evidence: BTreeMap::new(),
            checks: BTreeMap::new(),
            unique_inequality: None,
            families: BTreeMap::new(),
            facets: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub(crate) fn count(&mut self, key: &str, value: usize) {
        self.evidence.insert(key.to_string(), value as u64);
    }

    pub(crate) fn check(&mut self, key: &str, holds: bool) {
        self.checks.insert(key.to_string(), holds);
    }

    /// Sets the verdict from the recorded checks: pass only if there is at
    /// least one check and every check holds.
    pub(crate) fn finish(mut self, started: std::time::Instant) -> Self {
        self.verdict = if !self.checks.is_empty() && self.checks.values().all(|&c| c) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self.wall_time = started.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        let _ = writeln!(out, "## {} on {}: {verdict}\n", self.claim, self.graph.name);
        let _ = writeln!(
            out,
            "Graph: n = {}, {} edges, sha256 `{}`\n",
            self.graph.n, self.graph.edges, self.graph.digest
        );
        let _ = writeln!(out, "| evidence | value |\n|---|---|");
        for (k, v) in &self.evidence {
            let _ = writeln!(out, "| {k} | {v} |");
        }
        let _ = writeln!(out, "\n| check | holds |\n|---|---|");
        for (k, v) in &self.checks {
            let _ = writeln!(out, "| {k} | {} |", if *v { "yes" } else { "no" });
        }
        if let Some(u) = &self.unique_inequality {
            let _ = writeln!(out, "\nUnique non-trivial facet: `{u}`");
        }
        for (name, rows) in &self.families {
            let _ = writeln!(out, "\n### {name} ({} rows)\n", rows.len());
            let _ = writeln!(out, "| k | inequality | valid | facet | face dim |\n|---|---|---|---|---|");
            for r in rows {
                let face = r.face_dim.map_or_else(|| "-".to_string(), |d| d.to_string());
                let _ = writeln!(
                    out,
                    "| {} | `{}` | {} | {} | {face} |",
                    r.k,
                    r.inequality,
                    yes_no(r.valid),
                    yes_no(r.facet)
                );
            }
        }
        if !self.facets.is_empty() {
            let _ = writeln!(out, "\n| facet | classification | saturating vertices |\n|---|---|---|");
            for f in &self.facets {
                let sat = f
                    .saturating_vertex_count
                    .map_or_else(|| "-".to_string(), |c| c.to_string());
                let _ = writeln!(out, "| `{}` | {:?} | {sat} |", f.inequality, f.classification);
            }
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
