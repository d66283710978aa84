//! Leonard systems built from parameter arrays, their relatives under the
//! dihedral group, and the scalar and projector identities they satisfy.

pub mod d4;
pub mod params;
pub mod scalars;
pub mod suite;
pub mod system;

pub use d4::{reduced_words, D4Element, D4Gen, D4Word};
pub use params::{d4_apply, ParameterArray, SplitPoly};
pub use scalars::{
    nu_from_traces, nu_scalars, split_projectors, trace_closed_forms, trace_products, NuScalars,
};
pub use suite::{verify_leonard_suite, verify_system};
pub use system::{certify, complete_parameter_array, solve_gram, BilinearForm, LeonardSystem};
