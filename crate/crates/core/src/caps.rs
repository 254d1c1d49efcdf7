use serde::{Deserialize, Serialize};

/// Resource limits shared by every enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest graph on which subset enumeration (stable sets, cliques,
    /// holes) is attempted.
    pub max_graph_vertices: usize,
    /// Largest ambient dimension handed to vertex or facet enumeration.
    pub max_dim: usize,
    /// Upper bound on `C(m, d)` for the combinatorial vertex oracle.
    pub max_oracle_subsets: u64,
    /// Largest odd cycle for the cyclic uniqueness verifier.
    pub max_cycle_n: usize,
    /// Largest odd anti-cycle for the anti-cyclic uniqueness verifier.
    pub max_anticycle_n: usize,
    /// Largest number of dichotomic measurements in a compatibility scenario.
    pub max_measurements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_graph_vertices: 24,
            max_dim: 32,
            max_oracle_subsets: 2_000_000,
            max_cycle_n: 13,
            max_anticycle_n: 9,
            max_measurements: 12,
        }
    }
}
