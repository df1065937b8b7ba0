//! Exact calculus of trigonometric polynomials: evaluation, algebra, Bohr
//! coefficients and spectrum, frequency modules, quasi-periodicity order,
//! periodicity tests, and the sampled-signal spectrum estimators.

mod basis;
mod carleman;
mod circle;
mod lattice;
mod sampled;
mod trigpoly;

pub use basis::{
    parse_rational, period_base_two_pi_multiple, rational_string, BasisRef, Frequency, Generator,
    GeneratorBasis,
};
pub use carleman::carleman_transform;
pub use circle::{chordal_distance, circle_split, CircleArc, ENDPOINT_TOL};
pub use lattice::{integer_basis, integer_basis_over, is_periodic, qp_order, FrequencyModule};
pub use sampled::{beurling_estimate, bohr_coefficient_numeric, BeurlingReport, SampledSignal};
pub use trigpoly::{TrigPolynomial, PRUNE_REL};
