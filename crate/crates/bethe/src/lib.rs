//! Bethe ansatz equations for the K-theoretic XXZ chain.
//!
//! The equations come in three equivalent conventions (see [`conventions`]).
//! The solver continues every classical solution to the requested deformation
//! and returns the full set of `C(n, k)` admissible solutions, which can be
//! stored in and reloaded from a JSON-lines cache.

pub mod cache;
pub mod conventions;
pub mod solver;
pub mod system;

pub use cache::{read_set, write_set, CacheRecord, SolutionCache};
pub use conventions::{convention_map, Convention, ConventionMap, CONVENTION_TABLE};
pub use kxxz_core::{symmetric_eval, SymmetricFunctionSpec};
pub use solver::{
    canonical_sort, classical_set, continue_from_roots, continue_solution, origin_roots, same_multiset, solve_all,
    BetheSolution, OriginKind, SolutionSet, StepControl,
};
pub use system::{classical_solutions, BetheSystem, GeometricForm};

use kxxz_core::CoreError;
use thiserror::Error;

/// Errors from building, solving or caching Bethe systems.
#[derive(Debug, Error)]
pub enum BetheError {
    #[error("invalid Bethe system: {0}")]
    InvalidSystem(String),
    #[error("root {index} sits on a pole of the equations")]
    PoleHit { index: usize },
    #[error("two roots collided along the path at t = {t}")]
    PathCollision { t: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("endpoint polish stalled at residual {residual:e}")]
    NotConverged { residual: f64 },
    #[error("found {found} of {expected} solutions")]
    IncompleteSet {
        found: usize,
        expected: usize,
        partial: Box<SolutionSet>,
    },
    #[error("cache: {0}")]
    Cache(String),
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}
