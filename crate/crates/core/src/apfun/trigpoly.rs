//! Trigonometric polynomials Σ_j c_j e^{iλ_j t} with exact frequencies and
//! complex vector coefficients.

use nalgebra::DVector;
use num_complex::Complex;

use crate::apfun::basis::{BasisRef, Frequency};
use crate::error::{Error, Result};
use crate::num::{cplx, real, vec_norm, CVec, Real};

/// Relative norm threshold below which a coefficient is dropped during
/// canonicalization. Keeps the Bohr spectrum stable under round-trip algebra.
pub const PRUNE_REL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial<T: Real> {
    basis: BasisRef,
    dim: usize,
    terms: Vec<(Frequency, CVec<T>)>,
}

impl<T: Real> TrigPolynomial<T> {
    pub fn new(basis: &BasisRef, dim: usize, terms: Vec<(Frequency, CVec<T>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        for (freq, coeff) in &terms {
            if !(std::sync::Arc::ptr_eq(freq.basis(), basis) || **freq.basis() == **basis) {
                return Err(Error::BasisMismatch);
            }
            if coeff.len() != dim {
                return Err(Error::DimMismatch { expected: dim, got: coeff.len() });
            }
        }
        let mut p = TrigPolynomial { basis: basis.clone(), dim, terms };
        p.canonicalize();
        Ok(p)
    }

    pub fn zero(basis: &BasisRef, dim: usize) -> Self {
        TrigPolynomial { basis: basis.clone(), dim, terms: Vec::new() }
    }

    /// Scalar (dim 1) polynomial from (frequency, coefficient) pairs.
    pub fn scalar(basis: &BasisRef, terms: Vec<(Frequency, Complex<T>)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(f, c)| (f, DVector::from_element(1, c)))
            .collect();
        TrigPolynomial::new(basis, 1, terms)
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        let mut merged: Vec<(Frequency, CVec<T>)> = Vec::with_capacity(self.terms.len());
        for (freq, coeff) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((last, acc)) if last.cmp_coords(&freq).is_eq() => *acc += coeff,
                _ => merged.push((freq, coeff)),
            }
        }
        let max_norm = merged
            .iter()
            .map(|(_, c)| vec_norm(c))
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        let scale = if max_norm > T::zero() { max_norm } else { T::one() };
        let cutoff = real::<T>(PRUNE_REL) * scale;
        merged.retain(|(_, c)| vec_norm(c) > cutoff);
        self.terms = merged;
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Frequency, CVec<T>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient norm (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> T {
        self.terms
            .iter()
            .map(|(_, c)| vec_norm(c))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Σ_j c_j e^{iλ_j t}.
    pub fn eval(&self, t: T) -> CVec<T> {
        let mut out: CVec<T> = DVector::from_element(self.dim, Complex::new(T::zero(), T::zero()));
        for (freq, coeff) in &self.terms {
            let lam: T = real(freq.value());
            let phase = Complex::new(T::zero(), lam * t).exp();
            out += coeff * phase;
        }
        out
    }

    /// αf + βg over the same basis and dimension.
    pub fn combine(
        f: &TrigPolynomial<T>,
        g: &TrigPolynomial<T>,
        alpha: Complex<T>,
        beta: Complex<T>,
    ) -> Result<TrigPolynomial<T>> {
        if **f.basis() != **g.basis() {
            return Err(Error::BasisMismatch);
        }
        if f.dim != g.dim {
            return Err(Error::DimMismatch { expected: f.dim, got: g.dim });
        }
        let mut terms: Vec<(Frequency, CVec<T>)> = Vec::with_capacity(f.terms.len() + g.terms.len());
        for (freq, coeff) in &f.terms {
            terms.push((freq.clone(), coeff * alpha));
        }
        for (freq, coeff) in &g.terms {
            terms.push((freq.clone(), coeff * beta));
        }
        TrigPolynomial::new(&f.basis, f.dim, terms)
    }

    pub fn scaled(&self, alpha: Complex<T>) -> TrigPolynomial<T> {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| (f.clone(), c * alpha))
            .collect();
        TrigPolynomial::new(&self.basis, self.dim, terms).expect("same basis")
    }

    /// Term (λ, c) ↦ (λ, iλ c); the zero frequency drops out.
    pub fn derivative(&self) -> TrigPolynomial<T> {
        let terms = self
            .terms
            .iter()
            .filter(|(f, _)| !f.is_zero())
            .map(|(f, c)| {
                let ilam = cplx::<T>(0.0, f.value());
                (f.clone(), c * ilam)
            })
            .collect();
        TrigPolynomial::new(&self.basis, self.dim, terms).expect("same basis")
    }

    /// Translate f(·) to f(· + h): coefficient c_j picks up e^{iλ_j h}.
    pub fn translate(&self, h: T) -> TrigPolynomial<T> {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| {
                let phase = Complex::new(T::zero(), real::<T>(f.value()) * h).exp();
                (f.clone(), c * phase)
            })
            .collect();
        TrigPolynomial::new(&self.basis, self.dim, terms).expect("same basis")
    }

    /// Mean coefficient a(λ, f): the coefficient of λ if present, else zero.
    /// Exact by orthogonality of distinct exponentials under the mean.
    pub fn bohr_coefficient(&self, lambda: &Frequency) -> Result<CVec<T>> {
        if !(std::sync::Arc::ptr_eq(lambda.basis(), &self.basis) || **lambda.basis() == *self.basis)
        {
            return Err(Error::BasisMismatch);
        }
        for (freq, coeff) in &self.terms {
            if freq.cmp_coords(lambda).is_eq() {
                return Ok(coeff.clone());
            }
        }
        Ok(DVector::from_element(self.dim, Complex::new(T::zero(), T::zero())))
    }

    /// Frequencies with nonzero (post-pruning) coefficient, in canonical order.
    pub fn bohr_spectrum(&self) -> Vec<Frequency> {
        self.terms.iter().map(|(f, _)| f.clone()).collect()
    }

    /// ∫_0^t f(s) ds, evaluated directly: (e^{iλt} − 1)/(iλ) per harmonic,
    /// and c·t for the zero frequency.
    pub fn integral_from_zero(&self, t: T) -> CVec<T> {
        let mut out: CVec<T> = DVector::from_element(self.dim, Complex::new(T::zero(), T::zero()));
        for (freq, coeff) in &self.terms {
            if freq.is_zero() {
                out += coeff * Complex::new(t, T::zero());
            } else {
                let ilam = cplx::<T>(0.0, freq.value());
                let w = (Complex::new(T::zero(), real::<T>(freq.value()) * t).exp()
                    - Complex::new(T::one(), T::zero()))
                    / ilam;
                out += coeff * w;
            }
        }
        out
    }

    /// Sup-norm proxy: Σ_j ‖c_j‖ bounds ‖f‖_∞.
    pub fn coeff_norm_sum(&self) -> T {
        self.terms
            .iter()
            .map(|(_, c)| vec_norm(c))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Cast the coefficient data into another scalar type.
    pub fn cast<U: Real>(&self) -> TrigPolynomial<U> {
        let terms = self
            .terms
            .iter()
            .map(|(f, c)| {
                let coeff: CVec<U> = DVector::from_iterator(
                    c.len(),
                    c.iter().map(|z| {
                        Complex::new(
                            real::<U>(crate::num::to_f64(z.re)),
                            real::<U>(crate::num::to_f64(z.im)),
                        )
                    }),
                );
                (f.clone(), coeff)
            })
            .collect();
        TrigPolynomial::new(&self.basis, self.dim, terms).expect("same basis")
    }
}
