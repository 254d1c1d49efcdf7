//! Exclusivity-graph polytopes and non-contextuality inequalities.
//!
//! For an exclusivity graph `G` the non-contextual behaviours form
//! `STAB(G)`, the convex hull of stable-set incidence vectors, and the
//! behaviours obeying pairwise exclusivity form `QSTAB(G)`, cut out by one
//! row per maximal clique. A facet of `STAB(G)` that is neither a
//! nonnegativity row nor a clique row is a non-trivial NC inequality.

mod report;
mod verify;

pub use report::{FamilyRow, GraphDescriptor, TheoremReport, Verdict};
pub use verify::{
    circulant_bell_check, facet_inheritance_check, oracle_equivalence_check, sandwich_check,
    verify_unique_fanc, verify_unique_fcnc,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{self, Graph, GraphError, SetKind, VertexSet};
use crate::polytope::{self, HPolytope, Inequality, Limits, PolytopeError, VPolytope};
use crate::rational::{int, Rational};
use crate::Caps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextualityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("{0}")]
    Domain(String),
    #[error("{what} {value} exceeds cap {cap}")]
    SizeLimit { what: &'static str, value: usize, cap: usize },
}

impl ContextualityError {
    /// Resource exhaustion, as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            ContextualityError::SizeLimit { .. }
                | ContextualityError::Graph(GraphError::SizeLimit { .. })
                | ContextualityError::Polytope(PolytopeError::SizeLimit { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FacetKind {
    Nonnegativity,
    Clique,
    Fcnc,
    Fanc,
    Other,
}

impl FacetKind {
    pub fn is_trivial(self) -> bool {
        matches!(self, FacetKind::Nonnegativity | FacetKind::Clique)
    }
}

/// A non-contextuality inequality together with its support and
/// classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcInequality {
    #[serde(flatten)]
    pub inequality: Inequality,
    pub support: Vec<usize>,
    pub classification: FacetKind,
    /// Number of STAB vertices on the hyperplane; only known for
    /// inequalities produced by enumeration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturating_vertex_count: Option<usize>,
}

impl NcInequality {
    pub fn support_set(&self) -> VertexSet {
        VertexSet::plain(self.support.iter().copied())
    }
}

fn support_of(ineq: &Inequality) -> Vec<usize> {
    ineq.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Pattern-based classification of a normalized row against graph `g`.
pub fn classify(ineq: &Inequality, g: &Graph) -> FacetKind {
    let coeffs = ineq.coeffs();
    let support = support_of(ineq);
    let bound = ineq.bound();
    if support.len() == 1 && coeffs[support[0]] == -Rational::one() && bound.is_zero() {
        return FacetKind::Nonnegativity;
    }
    let unit = support.iter().all(|&i| coeffs[i].is_one());
    if unit && bound.is_one() && g.is_clique(&support) {
        return FacetKind::Clique;
    }
    let n = coeffs.len();
    if unit && support.len() == n && n >= 5 && n % 2 == 1 {
        if *bound == int(((n - 1) / 2) as i64) {
            return FacetKind::Fcnc;
        }
        if *bound == int(2) {
            return FacetKind::Fanc;
        }
    }
    FacetKind::Other
}

fn check_odd(n: usize) -> Result<(), ContextualityError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(ContextualityError::Domain(format!(
            "fundamental inequalities need an odd n >= 5, got {n}"
        )));
    }
    Ok(())
}

fn all_ones(n: usize, bound: i64) -> Inequality {
    Inequality::new(vec![int(1); n], int(bound)).expect("all-ones row is nonzero")
}

/// `sum p_i <= (n - 1) / 2` on the odd n-cycle.
pub fn fcnc_inequality(n: usize) -> Result<NcInequality, ContextualityError> {
    check_odd(n)?;
    Ok(NcInequality {
        inequality: all_ones(n, ((n - 1) / 2) as i64),
        support: (0..n).collect(),
        classification: FacetKind::Fcnc,
        saturating_vertex_count: None,
    })
}

/// `sum p_i <= 2` on the odd n-anti-cycle.
pub fn fanc_inequality(n: usize) -> Result<NcInequality, ContextualityError> {
    check_odd(n)?;
    Ok(NcInequality {
        inequality: all_ones(n, 2),
        support: (0..n).collect(),
        classification: FacetKind::Fanc,
        saturating_vertex_count: None,
    })
}

/// Stable-set polytope as the hull of stable-set incidence vectors.
pub fn stab(g: &Graph, caps: &Caps) -> Result<VPolytope, ContextualityError> {
    let sets = graphs::enumerate_stable_sets(g, caps.max_graph_vertices)?;
    let points = sets
        .iter()
        .map(|s| s.incidence(g.n()).into_iter().map(|b| int(b as i64)).collect())
        .collect();
    Ok(VPolytope::new(g.n(), points)?)
}

/// Nonnegativity plus one row per maximal clique.
pub fn qstab(g: &Graph, caps: &Caps) -> Result<HPolytope, ContextualityError> {
    let n = g.n();
    let mut rows = polytope::nonnegativity_rows(n);
    for clique in graphs::enumerate_maximal_cliques(g, caps.max_graph_vertices)? {
        rows.push(clique_row(n, &clique));
    }
    Ok(HPolytope::new(n, rows)?)
}

fn clique_row(n: usize, clique: &VertexSet) -> Inequality {
    debug_assert_eq!(clique.kind, SetKind::Clique);
    let mut c = vec![Rational::zero(); n];
    for &v in &clique.members {
        c[v] = Rational::one();
    }
    Inequality::new(c, Rational::one()).expect("clique is nonempty")
}

/// Every facet of `STAB(g)`, classified and annotated with the number of
/// vertices it contains.
pub fn enumerate_nc_facets(g: &Graph, caps: &Caps) -> Result<Vec<NcInequality>, ContextualityError> {
    let v = stab(g, caps)?;
    nc_facets_of(g, &v, caps)
}

pub(crate) fn nc_facets_of(g: &Graph, v: &VPolytope, caps: &Caps) -> Result<Vec<NcInequality>, ContextualityError> {
    let h = polytope::facets_from_vertices(v, &Limits::from(caps))?;
    Ok(h.inequalities()
        .iter()
        .map(|ineq| NcInequality {
            classification: classify(ineq, g),
            support: support_of(ineq),
            saturating_vertex_count: Some(polytope::saturating_vertices(ineq, v).len()),
            inequality: ineq.clone(),
        })
        .collect())
}

pub fn nontrivial(facets: &[NcInequality]) -> Vec<&NcInequality> {
    facets.iter().filter(|f| !f.classification.is_trivial()).collect()
}

/// Whether any coordinate of `x` is fractional.
pub(crate) fn has_fraction(x: &[Rational]) -> bool {
    x.iter().any(|c| !c.denom().is_one())
}

#[cfg(test)]
mod tests;
