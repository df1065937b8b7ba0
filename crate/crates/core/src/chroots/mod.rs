//! Delay-system model, characteristic matrix and determinant, root counting
//! and finding by the argument principle, the imaginary-axis characteristic
//! set, and matrix Riesz projections.

mod contour;
mod riesz;
mod roots;
mod system;

pub use contour::{
    boundary_det_scale, count_roots, Region, BASE_NODES_PER_EDGE, INTEGRALITY_TOL,
    MAX_NODES_PER_EDGE,
};
pub use riesz::{enclosed_count, riesz_projection, IDEMPOTENCE_TOL};
pub use roots::{
    find_roots, sigma_i, Root, RootSet, SigmaIWindow, JITTER_ATTEMPTS, JITTER_REL, RESIDUAL_REL,
};
pub use system::{DelaySystem, DelayTerm, SINGULAR_CONDITION};
