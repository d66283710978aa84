//! Exact Leonard systems over the rationals and prime fields, and the
//! duality operator that intertwines a self-dual system with its dual.

pub mod cli;
pub mod duality;
pub mod error;
pub mod field;
pub mod leonard;
pub mod linalg;
pub mod report;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{FieldScalar, FieldSpec};
pub use leonard::{D4Word, LeonardSystem, ParameterArray};
