//! Exact minimization of rank-based regression criteria
//! `F(β) = Σ_k α_k r_(k)(β)` over the hyperplane arrangement of pairwise
//! residual ties.

pub mod arrangement;
pub mod ccc_solver;
pub mod ellipsoid_oracle;
pub mod error;
pub mod exact_numeric;
pub mod gen_solver;
mod float;
pub mod lp_exact;
pub mod model;
pub mod reference;

pub use error::{CoreError, Result};
pub use exact_numeric::{BoundSet, Rational};
pub use model::{CoefficientOracle, Dataset, ScoreKind, ScoreVector};
