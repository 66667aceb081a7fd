//! Shared foundations for the kxxz workspace.
//!
//! The state space of the XXZ chain on `n` sites is identified with the
//! equivariant K-theory of all Grassmannians `Gr(k, n)` at once, in the basis
//! of torus fixed points. This crate holds the pieces every other crate needs:
//! scalar types and branch choices, validated model parameters, the fixed-point
//! basis, sector-graded operators, truncated power series of numbers and of
//! operators, q-Pochhammer expansions, spectral projectors, symmetric
//! functions, and the report and wire formats.

pub mod error;
pub mod fixed_point;
pub mod graded;
pub mod linalg;
pub mod params;
pub mod pochhammer;
pub mod report;
pub mod scalar;
pub mod series;
pub mod symmetric;
pub mod wire;

pub use error::CoreError;
pub use fixed_point::{binomial, enumerate_fixed_points, FixedPoint, SectorTable};
pub use graded::GradedOperator;
pub use params::{make_params, make_params_with_tol, GenericityFlag, GenericityReport, ModelParams};
pub use report::{BoundKind, CheckEntry, CheckStatus, RunMetadata, VerificationReport};
pub use scalar::{c64, Branches, ExactComplex, Field, C64};
pub use series::{OperatorSeries, PowerSeries, SeriesVar};
pub use symmetric::{symmetric_eval, SymmetricFunctionSpec};
