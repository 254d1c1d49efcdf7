//! Exact convex polytopes over rationals: half-space (H) and vertex (V)
//! descriptions, conversions between them, membership, equality and
//! antiblockers.
//!
//! The H→V conversion is a double-description run on the homogenised cone
//! `{(t, x) : t >= 0, b t - A x >= 0}`; a bounded polytope has no extreme
//! ray with `t = 0`. V→H goes through the polar of the vertex set
//! translated to its centroid. [`brute_force_vertices`] enumerates bases
//! directly and serves as an independent oracle for the main path.

mod dd;
pub mod linalg;
pub mod lp;
pub mod sample;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, dot, primitive_integer_vector, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is not full-dimensional (affine dimension {affine_dim:?} in R^{dim})")]
    Degenerate { affine_dim: Option<usize>, dim: usize },
    #[error("{what} is {value}, cap is {cap}")]
    SizeLimit { what: &'static str, value: u64, cap: u64 },
    #[error("inequality has all-zero coefficients")]
    ZeroInequality,
    #[error("antiblocker needs a nonnegative polytope; vertex {vertex} has a negative coordinate")]
    NegativeCoordinate { vertex: usize },
    #[error("malformed polytope file: {0}")]
    Malformed(String),
}

/// `coeffs · x <= bound`, normalized to coprime integers without changing
/// the direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
    #[serde(with = "rational::serde_rational")]
    bound: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, bound: Rational) -> Result<Self, PolytopeError> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(PolytopeError::ZeroInequality);
        }
        let mut all = coeffs;
        all.push(bound);
        let ints = primitive_integer_vector(&all);
        let mut values: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        let bound = values.pop().expect("bound present");
        Ok(Inequality { coeffs: values, bound })
    }

    pub fn from_ints(coeffs: &[i64], bound: i64) -> Result<Self, PolytopeError> {
        Inequality::new(rational::vector(coeffs), rational::int(bound))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }

    /// `bound - coeffs · x`; nonnegative exactly when `x` satisfies the row.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.bound - self.lhs(x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.slack(x).is_zero()
    }

    /// Integer form `(a, b)` of the normalized row, used by the cone code.
    fn integer_row(&self) -> (Vec<BigInt>, BigInt) {
        (
            self.coeffs.iter().map(|c| c.to_integer()).collect(),
            self.bound.to_integer(),
        )
    }
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = if c.is_one() {
                format!("x{i}")
            } else if *c == -Rational::one() {
                format!("-x{i}")
            } else {
                format!("{c}*x{i}")
            };
            terms.push(term);
        }
        write!(f, "{} <= {}", terms.join(" + ").replace("+ -", "- "), self.bound)
    }
}

/// Polytope given by inequalities, sorted canonically and free of
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Inequality>,
}

impl HPolytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self, PolytopeError> {
        if let Some(bad) = inequalities.iter().find(|i| i.dim() != dim) {
            return Err(PolytopeError::Shape {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut inequalities = inequalities;
        inequalities.sort();
        inequalities.dedup();
        Ok(HPolytope { dim, inequalities })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|i| i.is_satisfied(x))
    }
}

/// Polytope given by its extreme points, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    /// Builds the convex hull of `points`, discarding duplicates and any
    /// point that is a convex combination of the others.
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self, PolytopeError> {
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(PolytopeError::Shape {
                expected: dim,
                found: bad.len(),
            });
        }
        let unique: Vec<Vec<Rational>> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let binary = unique
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one());
        if binary {
            // distinct 0/1 points are always vertices of their hull
            return Ok(VPolytope { dim, vertices: unique });
        }
        let extreme: Vec<Vec<Rational>> = (0..unique.len())
            .filter(|&i| {
                let others: Vec<&[Rational]> = unique
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.as_slice())
                    .collect();
                !lp::in_convex_hull(&others, &unique[i])
            })
            .map(|i| unique[i].clone())
            .collect();
        Ok(VPolytope { dim, vertices: extreme })
    }

    /// For point sets already known to be in convex position.
    pub(crate) fn from_extreme_points(dim: usize, points: Vec<Vec<Rational>>) -> Self {
        let vertices: Vec<Vec<Rational>> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        debug_assert!(vertices.iter().all(|v| v.len() == dim));
        VPolytope { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn affine_dimension(&self) -> Option<usize> {
        let refs: Vec<&[Rational]> = self.vertices.iter().map(Vec::as_slice).collect();
        linalg::affine_dimension(&refs)
    }
}

/// Either description; the operations below accept both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Polytope {
    H(HPolytope),
    V(VPolytope),
}

#[derive(Debug, Clone, Copy)]
pub enum PolytopeRef<'a> {
    H(&'a HPolytope),
    V(&'a VPolytope),
}

impl<'a> From<&'a HPolytope> for PolytopeRef<'a> {
    fn from(h: &'a HPolytope) -> Self {
        PolytopeRef::H(h)
    }
}

impl<'a> From<&'a VPolytope> for PolytopeRef<'a> {
    fn from(v: &'a VPolytope) -> Self {
        PolytopeRef::V(v)
    }
}

impl<'a> From<&'a Polytope> for PolytopeRef<'a> {
    fn from(p: &'a Polytope) -> Self {
        match p {
            Polytope::H(h) => PolytopeRef::H(h),
            Polytope::V(v) => PolytopeRef::V(v),
        }
    }
}

impl PolytopeRef<'_> {
    pub fn dim(&self) -> usize {
        match self {
            PolytopeRef::H(h) => h.dim,
            PolytopeRef::V(v) => v.dim,
        }
    }
}

impl From<HPolytope> for Polytope {
    fn from(h: HPolytope) -> Self {
        Polytope::H(h)
    }
}

impl From<VPolytope> for Polytope {
    fn from(v: VPolytope) -> Self {
        Polytope::V(v)
    }
}

/// Size limits for the conversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
    pub max_oracle_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        let caps = crate::Caps::default();
        Limits {
            max_dim: caps.max_dim,
            max_oracle_subsets: caps.max_oracle_subsets,
        }
    }
}

impl From<&crate::Caps> for Limits {
    fn from(c: &crate::Caps) -> Self {
        Limits {
            max_dim: c.max_dim,
            max_oracle_subsets: c.max_oracle_subsets,
        }
    }
}

fn check_dim(dim: usize, limits: &Limits) -> Result<(), PolytopeError> {
    if dim > limits.max_dim {
        return Err(PolytopeError::SizeLimit {
            what: "dimension",
            value: dim as u64,
            cap: limits.max_dim as u64,
        });
    }
    Ok(())
}

/// Treats every row as an equality and returns the unique solution, if the
/// system is consistent and has rank equal to the dimension.
pub fn solve_affine(tight: &[Inequality]) -> Result<Option<Vec<Rational>>, PolytopeError> {
    let Some(first) = tight.first() else {
        return Ok(None);
    };
    let d = first.dim();
    if let Some(bad) = tight.iter().find(|i| i.dim() != d) {
        return Err(PolytopeError::Shape {
            expected: d,
            found: bad.dim(),
        });
    }
    let a: Vec<Vec<Rational>> = tight.iter().map(|i| i.coeffs.clone()).collect();
    let b: Vec<Rational> = tight.iter().map(|i| i.bound.clone()).collect();
    Ok(linalg::solve_unique(&a, &b, d))
}

/// Extreme points of a bounded H-polytope.
pub fn vertices_from_halfspaces(h: &HPolytope, limits: &Limits) -> Result<VPolytope, PolytopeError> {
    check_dim(h.dim, limits)?;
    let d = h.dim;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(h.len() + 1);
    let mut t_row = vec![BigInt::zero(); d + 1];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for ineq in &h.inequalities {
        let (a, b) = ineq.integer_row();
        let mut row = Vec::with_capacity(d + 1);
        row.push(b);
        row.extend(a.into_iter().map(|x| -x));
        rows.push(row);
    }
    let rays = dd::extreme_rays(&rows, d + 1).map_err(|_| PolytopeError::Unbounded)?;
    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        if ray[0].is_zero() {
            return Err(PolytopeError::Unbounded);
        }
        let t = Rational::from_integer(ray[0].clone());
        vertices.push(
            ray[1..]
                .iter()
                .map(|x| Rational::from_integer(x.clone()) / &t)
                .collect(),
        );
    }
    Ok(VPolytope::from_extreme_points(d, vertices))
}

/// Irredundant facet description of a full-dimensional V-polytope.
pub fn facets_from_vertices(v: &VPolytope, limits: &Limits) -> Result<HPolytope, PolytopeError> {
    check_dim(v.dim, limits)?;
    let affine_dim = v.affine_dimension();
    if v.dim == 0 || affine_dim != Some(v.dim) {
        return Err(PolytopeError::Degenerate {
            affine_dim,
            dim: v.dim,
        });
    }
    let d = v.dim;
    let count = Rational::from_integer(BigInt::from(v.len()));
    let centroid: Vec<Rational> = (0..d)
        .map(|i| v.vertices.iter().fold(Rational::zero(), |acc, p| acc + &p[i]) / &count)
        .collect();

    // polar of (P - c): {y : (v - c) · y <= 1}
    let polar_rows = v
        .vertices
        .iter()
        .map(|p| {
            let shifted: Vec<Rational> = p.iter().zip(&centroid).map(|(a, c)| a - c).collect();
            Inequality::new(shifted, Rational::one())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let polar = HPolytope::new(d, polar_rows)?;
    let polar_vertices = vertices_from_halfspaces(&polar, limits)?;

    let facets = polar_vertices
        .vertices
        .iter()
        .map(|y| Inequality::new(y.clone(), Rational::one() + dot(y, &centroid)))
        .collect::<Result<Vec<_>, _>>()?;
    HPolytope::new(d, facets)
}

/// Minimal subfamily of the rows of `h` describing the same polytope.
pub fn remove_redundant(h: &HPolytope, limits: &Limits) -> Result<HPolytope, PolytopeError> {
    let v = vertices_from_halfspaces(h, limits)?;
    let affine_dim = v.affine_dimension();
    if affine_dim != Some(h.dim) {
        return Err(PolytopeError::Degenerate {
            affine_dim,
            dim: h.dim,
        });
    }
    let kept = h
        .inequalities
        .iter()
        .filter(|ineq| is_facet_of(ineq, &v))
        .cloned()
        .collect();
    HPolytope::new(h.dim, kept)
}

/// Vertices of `v` saturating `ineq`.
pub fn saturating_vertices<'a>(ineq: &Inequality, v: &'a VPolytope) -> Vec<&'a [Rational]> {
    v.vertices
        .iter()
        .filter(|p| ineq.is_tight(p))
        .map(Vec::as_slice)
        .collect()
}

/// Valid on `v` and saturated by `dim` affinely independent vertices.
pub fn is_facet_of(ineq: &Inequality, v: &VPolytope) -> bool {
    if !v.vertices.iter().all(|p| ineq.is_satisfied(p)) {
        return false;
    }
    let tight = saturating_vertices(ineq, v);
    v.dim > 0 && linalg::affine_dimension(&tight) == Some(v.dim - 1)
}

pub fn contains<'a>(p: impl Into<PolytopeRef<'a>>, point: &[Rational]) -> Result<bool, PolytopeError> {
    let p = p.into();
    if point.len() != p.dim() {
        return Err(PolytopeError::Shape {
            expected: p.dim(),
            found: point.len(),
        });
    }
    Ok(match p {
        PolytopeRef::H(h) => h.contains_point(point),
        PolytopeRef::V(v) => {
            let refs: Vec<&[Rational]> = v.vertices.iter().map(Vec::as_slice).collect();
            lp::in_convex_hull(&refs, point)
        }
    })
}

fn to_vertices(p: PolytopeRef<'_>, limits: &Limits) -> Result<VPolytope, PolytopeError> {
    match p {
        PolytopeRef::H(h) => vertices_from_halfspaces(h, limits),
        PolytopeRef::V(v) => Ok(v.clone()),
    }
}

/// `abl P = {y >= 0 : x · y <= 1 for all x in P}`, written with one row per
/// nonzero vertex of `P` plus the nonnegativity rows.
pub fn antiblocker<'a>(p: impl Into<PolytopeRef<'a>>, limits: &Limits) -> Result<HPolytope, PolytopeError> {
    let v = to_vertices(p.into(), limits)?;
    if let Some(bad) = v
        .vertices
        .iter()
        .position(|x| x.iter().any(Signed::is_negative))
    {
        return Err(PolytopeError::NegativeCoordinate { vertex: bad });
    }
    let d = v.dim;
    let mut rows = nonnegativity_rows(d);
    for x in &v.vertices {
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        rows.push(Inequality::new(x.clone(), Rational::one())?);
    }
    HPolytope::new(d, rows)
}

/// `-x_i <= 0` for every coordinate.
pub fn nonnegativity_rows(d: usize) -> Vec<Inequality> {
    (0..d)
        .map(|i| {
            let mut c = vec![Rational::zero(); d];
            c[i] = -Rational::one();
            Inequality::new(c, Rational::zero()).expect("unit row is nonzero")
        })
        .collect()
}

/// Same point set, decided by comparing canonical vertex lists.
pub fn equal_polytopes<'a, 'b>(
    a: impl Into<PolytopeRef<'a>>,
    b: impl Into<PolytopeRef<'b>>,
    limits: &Limits,
) -> Result<bool, PolytopeError> {
    let (a, b) = (a.into(), b.into());
    if a.dim() != b.dim() {
        return Err(PolytopeError::Shape {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(to_vertices(a, limits)?.vertices == to_vertices(b, limits)?.vertices)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Combinatorial vertex oracle: every `dim`-subset of rows, solved as
/// equalities, kept when feasible.
pub fn brute_force_vertices(h: &HPolytope, limits: &Limits) -> Result<VPolytope, PolytopeError> {
    let (m, d) = (h.len() as u64, h.dim as u64);
    let subsets = binomial(m, d);
    if subsets > limits.max_oracle_subsets {
        return Err(PolytopeError::SizeLimit {
            what: "oracle subset count",
            value: subsets,
            cap: limits.max_oracle_subsets,
        });
    }
    let mut found = BTreeSet::new();
    for subset in h.inequalities.iter().cloned().combinations(h.dim) {
        if let Some(x) = solve_affine(&subset)? {
            if h.contains_point(&x) {
                found.insert(x);
            }
        }
    }
    Ok(VPolytope::from_extreme_points(h.dim, found.into_iter().collect()))
}

/// On-disk polytope: `{"dim", "kind": "H"|"V", "rows", "bounds"}` with
/// rationals as strings. V files carry an empty `bounds` list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub kind: Kind,
    #[serde(with = "rational::serde_rational_matrix")]
    pub rows: Vec<Vec<Rational>>,
    #[serde(with = "rational::serde_rational_vec")]
    pub bounds: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    H,
    V,
}

impl From<&HPolytope> for PolytopeFile {
    fn from(h: &HPolytope) -> Self {
        PolytopeFile {
            dim: h.dim,
            kind: Kind::H,
            rows: h.inequalities.iter().map(|i| i.coeffs.clone()).collect(),
            bounds: h.inequalities.iter().map(|i| i.bound.clone()).collect(),
        }
    }
}

impl From<&VPolytope> for PolytopeFile {
    fn from(v: &VPolytope) -> Self {
        PolytopeFile {
            dim: v.dim,
            kind: Kind::V,
            rows: v.vertices.clone(),
            bounds: Vec::new(),
        }
    }
}

impl From<&Polytope> for PolytopeFile {
    fn from(p: &Polytope) -> Self {
        match p {
            Polytope::H(h) => h.into(),
            Polytope::V(v) => v.into(),
        }
    }
}

impl TryFrom<PolytopeFile> for Polytope {
    type Error = PolytopeError;

    fn try_from(f: PolytopeFile) -> Result<Self, Self::Error> {
        match f.kind {
            Kind::H => {
                if f.rows.len() != f.bounds.len() {
                    return Err(PolytopeError::Malformed(format!(
                        "{} rows but {} bounds",
                        f.rows.len(),
                        f.bounds.len()
                    )));
                }
                let rows = f
                    .rows
                    .into_iter()
                    .zip(f.bounds)
                    .map(|(c, b)| {
                        if c.len() != f.dim {
                            return Err(PolytopeError::Shape {
                                expected: f.dim,
                                found: c.len(),
                            });
                        }
                        Inequality::new(c, b)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Polytope::H(HPolytope::new(f.dim, rows)?))
            }
            Kind::V => {
                if !f.bounds.is_empty() {
                    return Err(PolytopeError::Malformed("V polytope with bounds".into()));
                }
                Ok(Polytope::V(VPolytope::new(f.dim, f.rows)?))
            }
        }
    }
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = PolytopeFile::deserialize(d)?;
        Polytope::try_from(file).map_err(serde::de::Error::custom)
    }
}
