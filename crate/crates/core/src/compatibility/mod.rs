//! Compatibility scenarios: measurements, contexts and per-context outcome
//! distributions, with the correlation and cut polytopes of pairwise
//! scenarios.
//!
//! Outcomes are stored as `0`/`1`. The signed view maps `0 -> +1` and
//! `1 -> -1`. A context's table is indexed by outcome tuples in
//! lexicographic order over the context's members in declared order, so
//! for `[4, 0]` the entry `"01"` means `M4 = 0, M0 = 1`.

mod checks;
mod maps;

pub use checks::{cut_maps_check, kcbs_bridge_check, kcbs_identity, odd_gamma_facets_check, odd_gamma_inequality};
pub use maps::{
    alpha_inverse, alpha_map, classical_polytope, compatibility_graph, correlation_polytope, cut_polytope_01,
    nondisturbing_polytope, phi_inverse, phi_map, psi_inverse, psi_map, CorrelationVector,
};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{Graph, GraphError};
use crate::polytope::PolytopeError;
use crate::rational::{self, int, Rational};
use crate::Caps;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatibilityError {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("{0}")]
    Domain(String),
    #[error("behaviour is disturbing: {0}")]
    Disturbing(String),
    #[error("unsupported scenario: {0}")]
    Unsupported(String),
    #[error("expected length {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("{what} {value} exceeds cap {cap}")]
    SizeLimit { what: &'static str, value: usize, cap: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl CompatibilityError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            CompatibilityError::SizeLimit { .. }
                | CompatibilityError::Polytope(PolytopeError::SizeLimit { .. })
                | CompatibilityError::Graph(GraphError::SizeLimit { .. })
        )
    }
}

/// Dichotomic measurements `0..measurements` grouped into contexts of
/// jointly measurable members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct CompatibilityScenario {
    measurements: usize,
    contexts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub measurements: usize,
    pub outcomes: usize,
    pub contexts: Vec<Vec<usize>>,
}

impl TryFrom<ScenarioFile> for CompatibilityScenario {
    type Error = CompatibilityError;

    fn try_from(f: ScenarioFile) -> Result<Self, Self::Error> {
        if f.outcomes != 2 {
            return Err(CompatibilityError::Unsupported(format!(
                "only dichotomic measurements are supported, got {} outcomes",
                f.outcomes
            )));
        }
        CompatibilityScenario::new(f.measurements, f.contexts)
    }
}

impl From<CompatibilityScenario> for ScenarioFile {
    fn from(s: CompatibilityScenario) -> Self {
        ScenarioFile {
            measurements: s.measurements,
            outcomes: 2,
            contexts: s.contexts,
        }
    }
}

impl CompatibilityScenario {
    pub fn new(measurements: usize, contexts: Vec<Vec<usize>>) -> Result<Self, CompatibilityError> {
        let bad = |msg: String| Err(CompatibilityError::Scenario(msg));
        let mut covered = vec![false; measurements];
        let mut sets = Vec::with_capacity(contexts.len());
        for c in &contexts {
            if c.is_empty() {
                return bad("empty context".into());
            }
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() {
                return bad(format!("context {c:?} repeats a measurement"));
            }
            if let Some(&m) = set.iter().find(|&&m| m >= measurements) {
                return bad(format!("measurement {m} out of range 0..{measurements}"));
            }
            set.iter().for_each(|&m| covered[m] = true);
            sets.push(set);
        }
        if let Some(m) = covered.iter().position(|c| !c) {
            return bad(format!("measurement {m} is in no context"));
        }
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return bad(format!("context {:?} is contained in {:?}", contexts[i], contexts[j]));
                }
            }
        }
        Ok(CompatibilityScenario { measurements, contexts })
    }

    pub fn measurements(&self) -> usize {
        self.measurements
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    /// Index of the context whose member set is exactly `members`.
    pub fn context_index(&self, members: &[usize]) -> Option<usize> {
        let want: BTreeSet<usize> = members.iter().copied().collect();
        self.contexts
            .iter()
            .position(|c| c.len() == want.len() && c.iter().all(|m| want.contains(m)))
    }

    /// Length of the stacked behaviour vector.
    pub fn behaviour_dim(&self) -> usize {
        self.contexts.iter().map(|c| 1usize << c.len()).sum()
    }

    fn is_pairwise(&self) -> bool {
        self.contexts.iter().all(|c| c.len() <= 2)
    }
}

/// Contexts `{M_i, M_(i+1 mod n)}` of the odd n-cycle.
pub fn n_cycle_scenario(n: usize) -> Result<CompatibilityScenario, CompatibilityError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(CompatibilityError::Domain(format!("n-cycle scenario needs an odd n >= 3, got {n}")));
    }
    CompatibilityScenario::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

/// One probability table per context, aligned with the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Behaviour {
    tables: Vec<Vec<Rational>>,
}

fn outcome_bit(index: usize, len: usize, pos: usize) -> usize {
    (index >> (len - 1 - pos)) & 1
}

fn outcome_label(index: usize, len: usize) -> String {
    (0..len).map(|p| if outcome_bit(index, len, p) == 1 { '1' } else { '0' }).collect()
}

impl Behaviour {
    pub fn new(s: &CompatibilityScenario, tables: Vec<Vec<Rational>>) -> Result<Self, CompatibilityError> {
        if tables.len() != s.contexts.len() {
            return Err(CompatibilityError::Shape {
                expected: s.contexts.len(),
                found: tables.len(),
            });
        }
        for (c, t) in s.contexts.iter().zip(&tables) {
            if t.len() != 1 << c.len() {
                return Err(CompatibilityError::Shape {
                    expected: 1 << c.len(),
                    found: t.len(),
                });
            }
            if t.iter().any(|p| p.is_negative() || *p > Rational::one()) {
                return Err(CompatibilityError::Domain(format!("table for {c:?} has an entry outside [0, 1]")));
            }
            if t.iter().sum::<Rational>() != Rational::one() {
                return Err(CompatibilityError::Domain(format!("table for {c:?} does not sum to 1")));
            }
        }
        Ok(Behaviour { tables })
    }

    /// Tables stacked in context order.
    pub fn from_vector(s: &CompatibilityScenario, v: &[Rational]) -> Result<Self, CompatibilityError> {
        if v.len() != s.behaviour_dim() {
            return Err(CompatibilityError::Shape {
                expected: s.behaviour_dim(),
                found: v.len(),
            });
        }
        let mut rest = v;
        let mut tables = Vec::new();
        for c in &s.contexts {
            let (head, tail) = rest.split_at(1 << c.len());
            tables.push(head.to_vec());
            rest = tail;
        }
        Behaviour::new(s, tables)
    }

    /// The behaviour of one global 0/1 assignment.
    pub fn deterministic(s: &CompatibilityScenario, assignment: &[u8]) -> Result<Self, CompatibilityError> {
        if assignment.len() != s.measurements {
            return Err(CompatibilityError::Shape {
                expected: s.measurements,
                found: assignment.len(),
            });
        }
        let tables = s
            .contexts
            .iter()
            .map(|c| {
                let idx = c.iter().fold(0, |acc, &m| (acc << 1) | (assignment[m] & 1) as usize);
                let mut t = vec![Rational::zero(); 1 << c.len()];
                t[idx] = Rational::one();
                t
            })
            .collect();
        Ok(Behaviour { tables })
    }

    pub fn tables(&self) -> &[Vec<Rational>] {
        &self.tables
    }

    pub fn table(&self, context: usize) -> &[Rational] {
        &self.tables[context]
    }

    pub fn to_vector(&self) -> Vec<Rational> {
        self.tables.iter().flatten().cloned().collect()
    }

    /// Probability of `outcomes` (one per member, declared order) in a
    /// context.
    pub fn probability(&self, context: usize, outcomes: &[u8]) -> Rational {
        let idx = outcomes.iter().fold(0, |acc, &o| (acc << 1) | (o & 1) as usize);
        self.tables[context][idx].clone()
    }
}

/// Marginal of context `context` on `subset`, listed in the order of
/// `subset`.
pub fn marginalize(
    s: &CompatibilityScenario,
    b: &Behaviour,
    context: usize,
    subset: &[usize],
) -> Result<Vec<Rational>, CompatibilityError> {
    let members = s
        .contexts
        .get(context)
        .ok_or_else(|| CompatibilityError::Domain(format!("no context {context}")))?;
    let positions: Vec<usize> = subset
        .iter()
        .map(|m| {
            members.iter().position(|x| x == m).ok_or_else(|| {
                CompatibilityError::Domain(format!("measurement {m} is not in context {members:?}"))
            })
        })
        .collect::<Result<_, _>>()?;
    let k = members.len();
    let mut out = vec![Rational::zero(); 1 << subset.len()];
    for (idx, p) in b.tables[context].iter().enumerate() {
        let target = positions.iter().fold(0, |acc, &pos| (acc << 1) | outcome_bit(idx, k, pos));
        out[target] += p;
    }
    Ok(out)
}

/// First pair of contexts whose marginals on their overlap disagree.
fn disturbance(s: &CompatibilityScenario, b: &Behaviour) -> Option<(usize, usize)> {
    for i in 0..s.contexts.len() {
        for j in i + 1..s.contexts.len() {
            let overlap: Vec<usize> = s.contexts[i]
                .iter()
                .copied()
                .filter(|m| s.contexts[j].contains(m))
                .collect();
            if overlap.is_empty() {
                continue;
            }
            let a = marginalize(s, b, i, &overlap).expect("overlap is in context");
            let c = marginalize(s, b, j, &overlap).expect("overlap is in context");
            if a != c {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn is_nondisturbing(s: &CompatibilityScenario, b: &Behaviour) -> bool {
    disturbance(s, b).is_none()
}

pub(crate) fn require_nondisturbing(s: &CompatibilityScenario, b: &Behaviour) -> Result<(), CompatibilityError> {
    match disturbance(s, b) {
        None => Ok(()),
        Some((i, j)) => Err(CompatibilityError::Disturbing(format!(
            "contexts {:?} and {:?} disagree on their overlap",
            s.contexts[i], s.contexts[j]
        ))),
    }
}

/// `<i,j> = p(++) + p(--) - p(+-) - p(-+)` for the context `{i, j}`.
pub fn correlator(s: &CompatibilityScenario, b: &Behaviour, i: usize, j: usize) -> Result<Rational, CompatibilityError> {
    let c = s
        .context_index(&[i, j])
        .filter(|_| i != j)
        .ok_or_else(|| CompatibilityError::Domain(format!("{{{i}, {j}}} is not a context")))?;
    let t = &b.tables[c];
    Ok(&t[0] + &t[3] - &t[1] - &t[2])
}

/// An event: one outcome tuple of one context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub context: usize,
    pub outcomes: Vec<u8>,
}

/// Events are exclusive when they share a measurement and assign it
/// different outcomes.
pub fn exclusivity_graph_of_events(s: &CompatibilityScenario, events: &[Event]) -> Result<Graph, CompatibilityError> {
    let mut assigned: Vec<BTreeMap<usize, u8>> = Vec::with_capacity(events.len());
    for e in events {
        let members = s
            .contexts
            .get(e.context)
            .ok_or_else(|| CompatibilityError::Domain(format!("no context {}", e.context)))?;
        if e.outcomes.len() != members.len() || e.outcomes.iter().any(|&o| o > 1) {
            return Err(CompatibilityError::Domain(format!(
                "outcomes {:?} do not fit context {members:?}",
                e.outcomes
            )));
        }
        assigned.push(members.iter().copied().zip(e.outcomes.iter().copied()).collect());
    }
    let mut edges = Vec::new();
    for a in 0..events.len() {
        for b in a + 1..events.len() {
            if assigned[a]
                .iter()
                .any(|(m, o)| assigned[b].get(m).is_some_and(|x| x != o))
            {
                edges.push((a, b));
            }
        }
    }
    Ok(Graph::new(events.len(), edges)?)
}

/// On-disk behaviour: `{"tables": {"i,j": {"00": "a/b", ...}}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviourFile {
    pub tables: BTreeMap<String, BTreeMap<String, String>>,
}

fn context_key(c: &[usize]) -> String {
    c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl BehaviourFile {
    pub fn from_behaviour(s: &CompatibilityScenario, b: &Behaviour) -> Self {
        let tables = s
            .contexts
            .iter()
            .zip(&b.tables)
            .map(|(c, t)| {
                let entries = t
                    .iter()
                    .enumerate()
                    .map(|(idx, p)| (outcome_label(idx, c.len()), rational::format(p)))
                    .collect();
                (context_key(c), entries)
            })
            .collect();
        BehaviourFile { tables }
    }

    pub fn into_behaviour(self, s: &CompatibilityScenario) -> Result<Behaviour, CompatibilityError> {
        if self.tables.len() != s.contexts.len() {
            return Err(CompatibilityError::Shape {
                expected: s.contexts.len(),
                found: self.tables.len(),
            });
        }
        let mut tables = Vec::new();
        for c in &s.contexts {
            let key = context_key(c);
            let entries = self
                .tables
                .get(&key)
                .ok_or_else(|| CompatibilityError::Domain(format!("missing table \"{key}\"")))?;
            let mut t = Vec::with_capacity(1 << c.len());
            for idx in 0..1usize << c.len() {
                let label = outcome_label(idx, c.len());
                let lit = entries
                    .get(&label)
                    .ok_or_else(|| CompatibilityError::Domain(format!("table \"{key}\" misses \"{label}\"")))?;
                t.push(rational::parse(lit).map_err(|e| CompatibilityError::Domain(e.to_string()))?);
            }
            if entries.len() != t.len() {
                return Err(CompatibilityError::Domain(format!("table \"{key}\" has extra entries")));
            }
            tables.push(t);
        }
        Behaviour::new(s, tables)
    }
}

fn check_measurements(s: &CompatibilityScenario, caps: &Caps) -> Result<(), CompatibilityError> {
    if s.measurements > caps.max_measurements {
        return Err(CompatibilityError::SizeLimit {
            what: "measurements",
            value: s.measurements,
            cap: caps.max_measurements,
        });
    }
    Ok(())
}

/// Every global 0/1 assignment, the first measurement most significant.
pub(crate) fn assignments(m: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1usize << m).map(move |idx| (0..m).map(|i| outcome_bit(idx, m, i) as u8).collect())
}

/// Behaviours drawn as convex combinations, with weights summing to 32, of
/// deterministic behaviours and of the behaviour that makes every pair
/// perfectly anticorrelated with uniform marginals. Every entry is then a
/// multiple of 1/64.
pub fn random_nondisturbing_behaviours(
    s: &CompatibilityScenario,
    seed: u64,
    count: usize,
    caps: &Caps,
) -> Result<Vec<Behaviour>, CompatibilityError> {
    check_measurements(s, caps)?;
    if !s.is_pairwise() {
        return Err(CompatibilityError::Unsupported("sampling needs contexts of size <= 2".into()));
    }
    const TOTAL: i64 = 32;
    let m = s.measurements;
    let anti = anticorrelated(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let parts = rng.random_range(1..=4usize);
        let mut left = TOTAL;
        let mut acc = vec![Rational::zero(); s.behaviour_dim()];
        for p in 0..parts {
            let w = if p + 1 == parts { left } else { rng.random_range(0..=left) };
            left -= w;
            let point = if rng.random_bool(0.25) {
                anti.clone()
            } else {
                let a: Vec<u8> = (0..m).map(|_| rng.random_range(0..=1u8)).collect();
                Behaviour::deterministic(s, &a)?.to_vector()
            };
            for (x, y) in acc.iter_mut().zip(point) {
                *x += y * int(w);
            }
        }
        let v: Vec<Rational> = acc.into_iter().map(|x| x / int(TOTAL)).collect();
        out.push(Behaviour::from_vector(s, &v)?);
    }
    Ok(out)
}

/// `p(01) = p(10) = 1/2` on pairs, uniform on singletons.
fn anticorrelated(s: &CompatibilityScenario) -> Vec<Rational> {
    let h = rational::half();
    s.contexts
        .iter()
        .flat_map(|c| match c.len() {
            1 => vec![h.clone(), h.clone()],
            _ => vec![Rational::zero(), h.clone(), h.clone(), Rational::zero()],
        })
        .collect()
}
