use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{assignments, check_measurements, require_nondisturbing, Behaviour, CompatibilityError, CompatibilityScenario};
use crate::graphs::{self, Graph};
use crate::polytope::{HPolytope, Inequality, VPolytope};
use crate::rational::{int, Rational};
use crate::Caps;

/// `(q_0, ..., q_(n-1), q_e ...)` with edges in the graph's sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationVector {
    pub graph: Graph,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub q: Vec<Rational>,
}

impl CorrelationVector {
    pub fn new(graph: Graph, q: Vec<Rational>) -> Result<Self, CompatibilityError> {
        let expected = graph.n() + graph.edge_count();
        if q.len() != expected {
            return Err(CompatibilityError::Shape { expected, found: q.len() });
        }
        Ok(CorrelationVector { graph, q })
    }

    pub fn vertex(&self, i: usize) -> &Rational {
        &self.q[i]
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&Rational> {
        self.graph.edge_index(i, j).map(|e| &self.q[self.graph.n() + e])
    }
}

/// The graph of a pairwise scenario: one vertex per measurement, one edge
/// per two-element context.
pub fn compatibility_graph(s: &CompatibilityScenario) -> Result<Graph, CompatibilityError> {
    if !s.is_pairwise() {
        return Err(CompatibilityError::Unsupported(
            "polytope operations need contexts of size <= 2".into(),
        ));
    }
    let edges = s.contexts().iter().filter(|c| c.len() == 2).map(|c| (c[0], c[1]));
    Ok(Graph::new(s.measurements(), edges)?)
}

/// Deterministic behaviours of every global assignment.
pub fn classical_polytope(s: &CompatibilityScenario, caps: &Caps) -> Result<VPolytope, CompatibilityError> {
    check_measurements(s, caps)?;
    let points = assignments(s.measurements())
        .map(|a| Behaviour::deterministic(s, &a).map(|b| b.to_vector()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VPolytope::new(s.behaviour_dim(), points)?)
}

fn singles_and_pairs(g: &Graph) -> (usize, usize) {
    (g.n(), g.n() + g.edge_count())
}

/// The non-disturbing set of a pairwise scenario in `q` coordinates: per
/// edge `q_ij >= 0`, `q_ij <= q_i`, `q_ij <= q_j` and
/// `q_i + q_j - q_ij <= 1`, plus `0 <= q_i <= 1` for measurements on no
/// edge.
pub fn nondisturbing_polytope(s: &CompatibilityScenario) -> Result<HPolytope, CompatibilityError> {
    let g = compatibility_graph(s)?;
    let (n, d) = singles_and_pairs(&g);
    let row = |terms: &[(usize, i64)], bound: i64| {
        let mut c = vec![0; d];
        for &(k, v) in terms {
            c[k] += v;
        }
        Inequality::from_ints(&c, bound).expect("row is nonzero")
    };
    let mut rows = Vec::new();
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        let ij = n + e;
        rows.push(row(&[(ij, -1)], 0));
        rows.push(row(&[(ij, 1), (i, -1)], 0));
        rows.push(row(&[(ij, 1), (j, -1)], 0));
        rows.push(row(&[(i, 1), (j, 1), (ij, -1)], 1));
    }
    for i in 0..n {
        if g.neighbours(i).next().is_none() {
            rows.push(row(&[(i, -1)], 0));
            rows.push(row(&[(i, 1)], 1));
        }
    }
    Ok(HPolytope::new(d, rows)?)
}

/// `q_i = p_i(1)` and `q_ij = p_ij(11)`.
pub fn phi_map(s: &CompatibilityScenario, b: &Behaviour) -> Result<CorrelationVector, CompatibilityError> {
    let g = compatibility_graph(s)?;
    require_nondisturbing(s, b)?;
    let (n, d) = singles_and_pairs(&g);
    let mut q = vec![Rational::zero(); d];
    for i in 0..n {
        let c = s
            .contexts()
            .iter()
            .position(|c| c.contains(&i))
            .expect("every measurement is in a context");
        q[i] = super::marginalize(s, b, c, &[i])?[1].clone();
    }
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        let c = s.context_index(&[i, j]).expect("edge comes from a context");
        q[n + e] = b.probability(c, &[1, 1]);
    }
    CorrelationVector::new(g, q)
}

/// Rebuilds the tables: `p(11) = q_ij`, `p(10) = q_i - q_ij`,
/// `p(01) = q_j - q_ij`, `p(00) = 1 - q_i - q_j + q_ij`, with `i` the first
/// declared member of the context.
pub fn phi_inverse(s: &CompatibilityScenario, q: &CorrelationVector) -> Result<Behaviour, CompatibilityError> {
    let g = compatibility_graph(s)?;
    if g != q.graph {
        return Err(CompatibilityError::Domain("correlation vector belongs to another graph".into()));
    }
    let tables = s
        .contexts()
        .iter()
        .map(|c| match c[..] {
            [i] => vec![Rational::one() - q.vertex(i), q.vertex(i).clone()],
            [i, j] => {
                let (qi, qj) = (q.vertex(i), q.vertex(j));
                let qij = q.edge(i, j).expect("context is an edge");
                vec![Rational::one() - qi - qj + qij, qj - qij, qi - qij, qij.clone()]
            }
            _ => unreachable!("scenario is pairwise"),
        })
        .collect();
    Behaviour::new(s, tables)
}

/// `v(S)_i = [i in S]`, `v(S)_ij = [i, j in S]` over all subsets `S`.
pub fn correlation_polytope(g: &Graph, caps: &Caps) -> Result<VPolytope, CompatibilityError> {
    if g.n() > caps.max_measurements {
        return Err(CompatibilityError::SizeLimit {
            what: "vertices",
            value: g.n(),
            cap: caps.max_measurements,
        });
    }
    let (_, d) = singles_and_pairs(g);
    let points = assignments(g.n())
        .map(|a| {
            let mut v: Vec<Rational> = a.iter().map(|&x| int(x as i64)).collect();
            v.extend(g.edges().iter().map(|&(i, j)| int((a[i] & a[j]) as i64)));
            v
        })
        .collect();
    Ok(VPolytope::new(d, points)?)
}

/// Edge-XOR vectors `x_ij = c_i xor c_j` of every 0/1 labelling of `g`.
/// Labellings and their complements give the same vector, so the apex of a
/// suspension can be held at 0 without losing any.
pub fn cut_polytope_01(g: &Graph, caps: &Caps) -> Result<VPolytope, CompatibilityError> {
    if g.n() > caps.max_measurements + 1 {
        return Err(CompatibilityError::SizeLimit {
            what: "vertices",
            value: g.n(),
            cap: caps.max_measurements + 1,
        });
    }
    let points = assignments(g.n())
        .map(|c| g.edges().iter().map(|&(i, j)| int((c[i] ^ c[j]) as i64)).collect())
        .collect();
    Ok(VPolytope::new(g.edge_count(), points)?)
}

/// Coordinates over the suspension's sorted edges: `x_(i,apex) = q_i` and
/// `x_ij = q_i + q_j - 2 q_ij`.
pub fn psi_map(q: &CorrelationVector) -> Vec<Rational> {
    let g = &q.graph;
    let apex = g.n();
    graphs::suspension(g)
        .edges()
        .iter()
        .map(|&(i, j)| {
            if j == apex {
                q.vertex(i).clone()
            } else {
                let qij = q.edge(i, j).expect("edge of the base graph");
                q.vertex(i) + q.vertex(j) - int(2) * qij
            }
        })
        .collect()
}

pub fn psi_inverse(g: &Graph, x: &[Rational]) -> Result<CorrelationVector, CompatibilityError> {
    let sus = graphs::suspension(g);
    if x.len() != sus.edge_count() {
        return Err(CompatibilityError::Shape {
            expected: sus.edge_count(),
            found: x.len(),
        });
    }
    let apex = g.n();
    let at = |i: usize, j: usize| &x[sus.edge_index(i, j).expect("edge of the suspension")];
    let mut q: Vec<Rational> = (0..apex).map(|i| at(i, apex).clone()).collect();
    for &(i, j) in g.edges() {
        q.push((at(i, apex) + at(j, apex) - at(i, j)) / int(2));
    }
    CorrelationVector::new(g.clone(), q)
}

/// `y = 2x - 1`.
pub fn alpha_map(x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|v| int(2) * v - Rational::one()).collect()
}

pub fn alpha_inverse(y: &[Rational]) -> Vec<Rational> {
    y.iter().map(|v| (v + Rational::one()) / int(2)).collect()
}
