//! The self-duality operator `T` and the flags, decompositions and bases
//! it acts on.

pub mod bases;
pub mod geometry;
pub mod operator;

pub use bases::{
    build_24_bases, matrix_of_t, verify_anchor_suite, verify_scale_robustness, verify_t_bases_suite,
    AnchorVectors, BasisFamily, BasisId,
};
pub use geometry::{
    build_decomposition, build_flag, check_mutually_opposite, t_action_on_structures, verify_geometry,
    Decomposition, Flag, Omega,
};
pub use operator::{build_t, build_t_self_dual, is_self_dual, verify_duality_suite, DualityBundle};
