//! Exact-arithmetic toolkit for exclusivity-graph contextuality polytopes.
//!
//! * [`graphs`]: cycles, circulants, complements, stable sets, cliques, odd
//!   holes and antiholes.
//! * [`polytope`]: rational H/V polytopes, double-description conversions,
//!   membership, equality and antiblockers.
//! * [`contextuality`]: STAB/QSTAB builders, the cyclic and anti-cyclic
//!   uniqueness verifiers and the CHSH-graph facet classifier.
//! * [`compatibility`]: compatibility scenarios and behaviours, correlation
//!   and cut polytopes, and the KCBS bridge between the two formalisms.

pub mod caps;
pub mod compatibility;
pub mod contextuality;
pub mod graphs;
pub mod polytope;
pub mod rational;

pub use caps::Caps;
pub use graphs::{Graph, VertexSet};
pub use polytope::{HPolytope, Inequality, Polytope, VPolytope};
pub use rational::Rational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
