//! Almost periodic solutions of linear functional differential equations
//!
//!   ẋ(t) = A x(t) + Σ_k B_k x(t + η_k) + f(t)
//!
//! in finite dimension, with forcing given as a trigonometric polynomial.
//! The crate provides an exact calculus of trigonometric polynomials
//! ([`apfun`]), characteristic-root machinery for the delay system
//! ([`chroots`]), solvability checks and harmonic-balance construction
//! ([`massera`]), an independent time-domain integrator ([`simulate`]),
//! and the file schemas shared with the `apdelay` CLI ([`schema`]).
//!
//! Numeric kernels are generic over the scalar type through the [`Real`]
//! trait; concrete `f64` aliases live at the crate root.

pub mod apfun;
pub mod chroots;
pub mod error;
pub mod massera;
pub mod num;
pub mod schema;
pub mod simulate;

pub use error::Error;
pub use num::Real;

/// Default scalar used by the CLI and the concrete aliases below.
pub type Scalar = f64;
pub type C64 = num_complex::Complex<f64>;
pub type CVec64 = nalgebra::DVector<C64>;
pub type CMat64 = nalgebra::DMatrix<C64>;

pub type TrigPoly = apfun::TrigPolynomial<f64>;
pub type Signal = apfun::SampledSignal<f64>;
pub type System = chroots::DelaySystem<f64>;
pub type Problem = massera::ForcedProblem<f64>;

