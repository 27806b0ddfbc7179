//! Exact symbolic computation for map Virasoro algebras `Vir ⊗ A`.
//!
//! Scalars are exact rationals throughout. The modules build on each other
//! in the order listed: coefficient algebras, the Lie algebra, PBW
//! straightening in `U(V_-)`, Verma modules, evaluation-type modules, and
//! classification drivers.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod evalmod;
pub mod expr;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod pbw;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod selftest;
pub mod verma;

pub use error::{Error, Result};
pub use scalar::Scalar;
