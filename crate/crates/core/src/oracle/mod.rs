//! Ground truth for small instances: a primal simplex, and a vertex
//! enumerator that checks the simplex.

mod simplex;
mod vertices;

pub use simplex::{simplex_solve, simplex_solve_with, SimplexOptions, SimplexProgress};
pub use vertices::{
    enumerate_vertices_optimum, enumerate_vertices_optimum_with_budget, vertex_candidate_count,
    DEFAULT_VERTEX_BUDGET,
};

use std::fmt;

use crate::densela::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl OracleStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleStatus::Optimal => "optimal",
            OracleStatus::Infeasible => "infeasible",
            OracleStatus::Unbounded => "unbounded",
        }
    }
}

impl fmt::Display for OracleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult<T> {
    pub status: OracleStatus,
    /// Present exactly when `status` is optimal.
    pub x_opt: Option<Vector<T>>,
    pub objective: Option<T>,
    pub pivot_count: usize,
}
