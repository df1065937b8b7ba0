//! Carleman-Laplace transform of a trigonometric polynomial.
//!
//! On a single harmonic c e^{iωt} the half-plane integrals both collapse to
//! c/(λ − iω), so the transform has the same closed form off the imaginary
//! axis and exhibits poles exactly at the points iσ_b(f).

use nalgebra::DVector;
use num_complex::Complex;

use crate::apfun::trigpoly::TrigPolynomial;
use crate::error::{Error, Result};
use crate::num::{real, to_f64, CVec, Real};

pub fn carleman_transform<T: Real>(
    f: &TrigPolynomial<T>,
    lambda: Complex<T>,
) -> Result<CVec<T>> {
    if lambda.re == T::zero() {
        return Err(Error::OnAxis);
    }
    let mut out: CVec<T> = DVector::from_element(f.dim(), Complex::new(T::zero(), T::zero()));
    for (freq, coeff) in f.terms() {
        let pole = Complex::new(T::zero(), real::<T>(freq.value()));
        let denom = lambda - pole;
        if to_f64(denom.norm()) < 1e-12 {
            return Err(Error::AtPole { lambda: freq.value() });
        }
        out += coeff * denom.inv();
    }
    Ok(out)
}
