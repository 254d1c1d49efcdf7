//! Simple undirected graphs on vertices `0..n` and the combinatorial
//! enumerations the polytope builders need: stable sets, maximal cliques,
//! and induced odd holes / antiholes.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("offset {offset} is outside 1..={max} for a circulant on {n} vertices")]
    InvalidOffset { n: usize, offset: i64, max: usize },
    #[error("circulant needs at least one vertex and one offset")]
    EmptyCirculant,
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has {n} vertices, enumeration cap is {cap}")]
    SizeLimit { n: usize, cap: usize },
}

/// Hard ceiling for bitmask-based enumeration regardless of the configured cap.
const BITMASK_LIMIT: usize = 64;

/// Simple undirected graph. Edges are stored once, as `(min, max)` pairs,
/// in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<bool>,
}

/// On-disk form: `{"n": int, "edges": [[i, j], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = GraphError;

    fn try_from(file: GraphFile) -> Result<Self, Self::Error> {
        Graph::new(file.n, file.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut canonical = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::InvalidVertex { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            canonical.push((a.min(b), a.max(b)));
        }
        canonical.sort_unstable();
        canonical.dedup();
        let mut adjacency = vec![false; n * n];
        for &(i, j) in &canonical {
            adjacency[i * n + j] = true;
            adjacency[j * n + i] = true;
        }
        Ok(Graph {
            n,
            edges: canonical,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, std::iter::empty()).expect("empty graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).tuple_combinations()).expect("complete graph is valid")
    }

    /// The n-cycle `0-1-...-(n-1)-0`. For `n < 3` this degenerates to a path
    /// or a single vertex.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).filter(|(a, b)| a != b);
        Graph::new(n, edges).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).cartesian_product(a..a + b);
        Graph::new(a + b, edges).expect("complete bipartite graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adjacency[i * self.n + j]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adjacent(v, u))
    }

    /// Position of edge `(i, j)` in the canonical edge list.
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    pub fn is_stable(&self, members: &[usize]) -> bool {
        members
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| !self.adjacent(a, b))
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        members
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| self.adjacent(a, b))
    }

    fn masks(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| self.neighbours(v).fold(0u64, |m, u| m | (1 << u)))
            .collect()
    }

    fn check_cap(&self, cap: usize) -> Result<(), GraphError> {
        let cap = cap.min(BITMASK_LIMIT);
        if self.n > cap {
            Err(GraphError::SizeLimit { n: self.n, cap })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Stable,
    Clique,
    Plain,
}

/// A sorted, duplicate-free set of vertices tagged with what it is in its
/// owning graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet {
    pub members: Vec<usize>,
    pub kind: SetKind,
}

impl VertexSet {
    /// Builds a set for `g`, checking ranges and that the tag is truthful.
    pub fn new(g: &Graph, members: impl IntoIterator<Item = usize>, kind: SetKind) -> Result<Self, GraphError> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= g.n()) {
            return Err(GraphError::InvalidVertex { vertex: v, n: g.n() });
        }
        let tag_holds = match kind {
            SetKind::Stable => g.is_stable(&members),
            SetKind::Clique => g.is_clique(&members),
            SetKind::Plain => true,
        };
        assert!(tag_holds, "vertex set {members:?} is not a {kind:?} set of the graph");
        Ok(VertexSet { members, kind })
    }

    pub fn plain(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet {
            members,
            kind: SetKind::Plain,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// 0/1 indicator vector of length `n`.
    pub fn incidence(&self, n: usize) -> Vec<u8> {
        let mut x = vec![0; n];
        for &v in &self.members {
            x[v] = 1;
        }
        x
    }
}

/// `Ci_n[L]`: vertex `i` adjacent to `(i + l) mod n` for each offset `l`.
pub fn make_circulant(n: usize, offsets: &[i64]) -> Result<Graph, GraphError> {
    if n == 0 || offsets.is_empty() {
        return Err(GraphError::EmptyCirculant);
    }
    let max = n / 2;
    let mut edges = Vec::new();
    for &l in offsets.iter().unique() {
        if l < 1 || l as usize > max {
            return Err(GraphError::InvalidOffset { n, offset: l, max });
        }
        let l = l as usize;
        edges.extend((0..n).map(|i| (i, (i + l) % n)));
    }
    Graph::new(n, edges)
}

pub fn complement(g: &Graph) -> Graph {
    let edges = (0..g.n())
        .tuple_combinations()
        .filter(|&(i, j)| !g.adjacent(i, j));
    Graph::new(g.n(), edges).expect("complement of a valid graph is valid")
}

/// Subgraph induced on `s`, relabelled `0..|s|` in the order of `s`.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<Graph, GraphError> {
    if let Some(&v) = s.members.iter().find(|&&v| v >= g.n()) {
        return Err(GraphError::InvalidVertex { vertex: v, n: g.n() });
    }
    let edges = s
        .members
        .iter()
        .enumerate()
        .tuple_combinations()
        .filter(|((_, &a), (_, &b))| g.adjacent(a, b))
        .map(|((ia, _), (ib, _))| (ia, ib));
    Graph::new(s.len(), edges)
}

/// All stable sets, the empty set included, in lexicographic order of their
/// sorted member lists.
pub fn enumerate_stable_sets(g: &Graph, cap: usize) -> Result<Vec<VertexSet>, GraphError> {
    g.check_cap(cap)?;
    let masks = g.masks();
    let mut out = Vec::new();
    let mut current = Vec::new();
    stable_sets_from(&masks, g.n(), 0, 0, &mut current, &mut out);
    Ok(out)
}

fn stable_sets_from(
    masks: &[u64],
    n: usize,
    start: usize,
    blocked: u64,
    current: &mut Vec<usize>,
    out: &mut Vec<VertexSet>,
) {
    out.push(VertexSet {
        members: current.clone(),
        kind: SetKind::Stable,
    });
    for v in start..n {
        if blocked & (1 << v) != 0 {
            continue;
        }
        current.push(v);
        stable_sets_from(masks, n, v + 1, blocked | masks[v], current, out);
        current.pop();
    }
}

/// Inclusion-maximal cliques via Bron–Kerbosch with Tomita pivoting,
/// sorted lexicographically.
pub fn enumerate_maximal_cliques(g: &Graph, cap: usize) -> Result<Vec<VertexSet>, GraphError> {
    g.check_cap(cap)?;
    let masks = g.masks();
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut found = Vec::new();
    if g.n() > 0 {
        bron_kerbosch(&masks, 0, all, 0, &mut found);
    }
    let mut cliques: Vec<VertexSet> = found
        .into_iter()
        .map(|m| VertexSet {
            members: bits(m).collect(),
            kind: SetKind::Clique,
        })
        .collect();
    cliques.sort();
    Ok(cliques)
}

fn bron_kerbosch(masks: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| (p & masks[u]).count_ones())
        .expect("p is nonempty");
    for v in bits(p & !masks[pivot]) {
        bron_kerbosch(masks, r | (1 << v), p & masks[v], x & masks[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| mask & (1 << b) != 0)
}

pub fn independence_number(g: &Graph, cap: usize) -> Result<usize, GraphError> {
    Ok(enumerate_stable_sets(g, cap)?
        .iter()
        .map(VertexSet::len)
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HoleKind {
    Hole,
    Antihole,
}

/// An odd vertex subset inducing a cycle, the complement of a cycle, or
/// both (the pentagon is self-complementary).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OddHoleWitness {
    pub vertices: VertexSet,
    pub kinds: Vec<HoleKind>,
}

/// Every odd subset of size at least `min_len` that induces a cycle
/// (hole) or the complement of a cycle (antihole). Each subset appears
/// once, sorted lexicographically.
pub fn find_odd_holes_and_antiholes(
    g: &Graph,
    min_len: usize,
    cap: usize,
) -> Result<Vec<OddHoleWitness>, GraphError> {
    g.check_cap(cap)?;
    let min_len = min_len.max(3);
    let holes = induced_odd_cycles(&g.masks(), g.n(), min_len);
    let antiholes = induced_odd_cycles(&complement(g).masks(), g.n(), min_len);

    let mut tagged: std::collections::BTreeMap<u64, Vec<HoleKind>> = Default::default();
    for m in holes {
        tagged.entry(m).or_default().push(HoleKind::Hole);
    }
    for m in antiholes {
        tagged.entry(m).or_default().push(HoleKind::Antihole);
    }
    let mut out: Vec<OddHoleWitness> = tagged
        .into_iter()
        .map(|(m, kinds)| OddHoleWitness {
            vertices: VertexSet::plain(bits(m)),
            kinds,
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Bitmasks of odd vertex subsets (size ≥ `min_len`) inducing a single
/// cycle. Enumeration prunes any partial subset with an induced degree
/// above two.
fn induced_odd_cycles(masks: &[u64], n: usize, min_len: usize) -> Vec<u64> {
    fn walk(masks: &[u64], n: usize, start: usize, chosen: u64, size: usize, min_len: usize, out: &mut Vec<u64>) {
        if size >= min_len && size % 2 == 1 && is_single_cycle(masks, chosen) {
            out.push(chosen);
        }
        for v in start..n {
            let with = chosen | (1 << v);
            if (masks[v] & chosen).count_ones() > 2 {
                continue;
            }
            if bits(masks[v] & chosen).any(|u| (masks[u] & with).count_ones() > 2) {
                continue;
            }
            walk(masks, n, v + 1, with, size + 1, min_len, out);
        }
    }
    let mut out = Vec::new();
    walk(masks, n, 0, 0, 0, min_len, &mut out);
    out
}

fn is_single_cycle(masks: &[u64], set: u64) -> bool {
    if set == 0 || bits(set).any(|v| (masks[v] & set).count_ones() != 2) {
        return false;
    }
    let start = set.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let next = bits(frontier).fold(0u64, |acc, v| acc | (masks[v] & set)) & !seen;
        seen |= next;
        frontier = next;
    }
    seen == set
}

/// Brute-force isomorphism test; only intended for graphs with at most
/// eight vertices.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    assert!(a.n() <= 8, "brute-force isomorphism is limited to 8 vertices");
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    (0..a.n()).permutations(a.n()).any(|perm| {
        a.edges()
            .iter()
            .all(|&(i, j)| b.adjacent(perm[i], perm[j]))
    })
}

/// New vertex `n` joined to every original vertex.
pub fn suspension(g: &Graph) -> Graph {
    let apex = g.n();
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain((0..apex).map(|i| (i, apex)));
    Graph::new(apex + 1, edges).expect("suspension of a valid graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 24;

    fn c(n: usize) -> Graph {
        make_circulant(n, &[1]).unwrap()
    }

    #[test]
    fn circulant_examples() {
        let c5 = c(5);
        assert_eq!(c5.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(make_circulant(8, &[1, 4]).unwrap().edge_count(), 12);
        assert_eq!(c(3), Graph::complete(3));
        assert_eq!(make_circulant(8, &[4, 1, 4]).unwrap().edge_count(), 12);
    }

    #[test]
    fn circulant_rejects_bad_offsets() {
        assert!(matches!(make_circulant(8, &[5]), Err(GraphError::InvalidOffset { .. })));
        assert!(matches!(make_circulant(8, &[0]), Err(GraphError::InvalidOffset { .. })));
        assert!(matches!(make_circulant(5, &[-1]), Err(GraphError::InvalidOffset { .. })));
        assert!(matches!(make_circulant(5, &[]), Err(GraphError::EmptyCirculant)));
        assert!(matches!(make_circulant(1, &[1]), Err(GraphError::InvalidOffset { .. })));
    }

    #[test]
    fn graph_construction_validates() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(GraphError::InvalidVertex { vertex: 3, n: 3 })));
        let g = Graph::new(3, [(2, 0), (0, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2)]);
    }

    #[test]
    fn complement_examples() {
        let c5 = c(5);
        let comp = complement(&c5);
        assert!(are_isomorphic(&c5, &comp));
        // the explicit relabelling i -> 2i mod 5 maps C5 onto its complement
        assert!(c5.edges().iter().all(|&(i, j)| comp.adjacent(2 * i % 5, 2 * j % 5)));
        assert_eq!(complement(&Graph::complete(3)), Graph::empty(3));
        assert_eq!(complement(&c(7)).edge_count(), 14);
    }

    #[test]
    fn induced_subgraphs_of_the_chsh_graph() {
        let ci8 = make_circulant(8, &[1, 4]).unwrap();
        let pent = induced_subgraph(&ci8, &VertexSet::plain(0..5)).unwrap();
        assert!(are_isomorphic(&pent, &c(5)));
        let all = induced_subgraph(&ci8, &VertexSet::plain(0..8)).unwrap();
        assert_eq!(all, ci8);
        let hept = induced_subgraph(&ci8, &VertexSet::plain(0..7)).unwrap();
        assert_eq!(hept.n(), 7);
        // 6 offset-1 edges inside 0..7 plus offset-4 pairs (0,4),(1,5),(2,6)
        assert_eq!(hept.edge_count(), 9);
        assert!(matches!(
            induced_subgraph(&ci8, &VertexSet::plain([0, 9])),
            Err(GraphError::InvalidVertex { vertex: 9, .. })
        ));
    }

    #[test]
    fn induced_subgraph_preserves_given_order() {
        let p = Graph::path(3);
        let s = VertexSet::plain([2, 0, 1]);
        // sorted to [0,1,2] by construction
        assert_eq!(induced_subgraph(&p, &s).unwrap(), p);
    }

    #[test]
    fn stable_sets_examples() {
        let sets = enumerate_stable_sets(&c(5), CAP).unwrap();
        assert_eq!(sets.len(), 11);
        assert!(sets.iter().any(|s| s.members == vec![0, 2]));
        assert_eq!(sets[0].members, Vec::<usize>::new());
        assert!(sets.windows(2).all(|w| w[0].members < w[1].members));
        assert_eq!(enumerate_stable_sets(&Graph::empty(3), CAP).unwrap().len(), 8);
        assert_eq!(enumerate_stable_sets(&Graph::complete(3), CAP).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_respects_cap() {
        let g = Graph::empty(30);
        assert_eq!(
            enumerate_stable_sets(&g, CAP),
            Err(GraphError::SizeLimit { n: 30, cap: 24 })
        );
        assert!(enumerate_maximal_cliques(&g, CAP).is_err());
        assert!(find_odd_holes_and_antiholes(&g, 5, CAP).is_err());
    }

    #[test]
    fn maximal_clique_examples() {
        let cl = enumerate_maximal_cliques(&c(5), CAP).unwrap();
        let members: Vec<Vec<usize>> = cl.iter().map(|s| s.members.clone()).collect();
        assert_eq!(members, vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
        let ci8 = make_circulant(8, &[1, 4]).unwrap();
        assert_eq!(enumerate_maximal_cliques(&ci8, CAP).unwrap().len(), 12);
        let k3 = enumerate_maximal_cliques(&Graph::complete(3), CAP).unwrap();
        assert_eq!(k3.len(), 1);
        assert_eq!(k3[0].members, vec![0, 1, 2]);
        let isolated = enumerate_maximal_cliques(&Graph::empty(2), CAP).unwrap();
        assert_eq!(isolated.len(), 2);
    }

    #[test]
    fn independence_numbers() {
        for n in (5..=13).step_by(2) {
            assert_eq!(independence_number(&c(n), CAP).unwrap(), (n - 1) / 2);
            assert_eq!(independence_number(&complement(&c(n)), CAP).unwrap(), 2);
        }
        assert_eq!(independence_number(&Graph::empty(6), CAP).unwrap(), 6);
    }

    #[test]
    fn holes_of_the_chsh_graph() {
        let ci8 = make_circulant(8, &[1, 4]).unwrap();
        let found = find_odd_holes_and_antiholes(&ci8, 5, CAP).unwrap();
        assert_eq!(found.len(), 8);
        for w in &found {
            assert_eq!(w.vertices.len(), 5);
            assert_eq!(w.kinds, vec![HoleKind::Hole, HoleKind::Antihole]);
        }
        // the eight pentagons are the cyclic windows {k, ..., k+4}
        for k in 0..8 {
            let window = VertexSet::plain((k..k + 5).map(|i| i % 8));
            assert!(found.iter().any(|w| w.vertices == window));
        }
    }

    #[test]
    fn holes_and_perfect_graphs() {
        let c7 = find_odd_holes_and_antiholes(&c(7), 5, CAP).unwrap();
        assert_eq!(c7.len(), 1);
        assert_eq!(c7[0].vertices.members, (0..7).collect::<Vec<_>>());
        assert_eq!(c7[0].kinds, vec![HoleKind::Hole]);
        let anti7 = find_odd_holes_and_antiholes(&complement(&c(7)), 5, CAP).unwrap();
        assert_eq!(anti7.len(), 1);
        assert_eq!(anti7[0].kinds, vec![HoleKind::Antihole]);

        let perfect = [
            c(6),
            Graph::path(4),
            Graph::path(7),
            Graph::complete(5),
            Graph::complete_bipartite(3, 4),
        ];
        for g in &perfect {
            assert!(find_odd_holes_and_antiholes(g, 5, CAP).unwrap().is_empty(), "{g:?}");
        }
        for g in [c(5), c(7), c(9), complement(&c(5)), complement(&c(7)), complement(&c(9))] {
            assert!(!find_odd_holes_and_antiholes(&g, 5, CAP).unwrap().is_empty());
        }
    }

    #[test]
    fn suspension_examples() {
        assert_eq!(suspension(&c(5)).edge_count(), 10);
        assert_eq!(suspension(&Graph::empty(1)), Graph::complete(2));
        assert_eq!(suspension(&Graph::complete(3)), Graph::complete(4));
    }

    #[test]
    fn json_shape() {
        let g = c(5);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
