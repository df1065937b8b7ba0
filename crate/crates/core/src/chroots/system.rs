//! The delay system ẋ(t) = A x(t) + Σ_k B_k x(t + η_k) + f(t) and its
//! characteristic matrix.
//!
//! Sign convention: substituting u(t) = e^{iλt} c into the delay operator
//! yields the multiplier Σ_k B_k e^{iλη_k}, so the characteristic matrix is
//!
//!   Δ(z) = zI − A − Σ_k B_k e^{z η_k},
//!
//! which reproduces the classical retarded equation z + (π/2)e^{−z} for the
//! term (η = −1, B = −π/2) and makes Δ(iλ) a(λ,u) = a(λ,f) hold exactly.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{frob_norm, real, spectral_norm, to_f64, CMat, Real};

/// Condition-number threshold above which Δ(z) is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct DelayTerm<T: Real> {
    pub eta: f64,
    pub matrix: CMat<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DelaySystem<T: Real> {
    dim: usize,
    a: CMat<T>,
    terms: Vec<DelayTerm<T>>,
    delta: f64,
}

impl<T: Real> DelaySystem<T> {
    pub fn new(a: CMat<T>, terms: Vec<DelayTerm<T>>, delta: f64) -> Result<Self> {
        let dim = a.nrows();
        if dim == 0 || a.ncols() != dim {
            return Err(Error::Invalid("A must be square and nonempty".into()));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Invalid("delta must be positive and finite".into()));
        }
        for term in &terms {
            if term.matrix.nrows() != dim || term.matrix.ncols() != dim {
                return Err(Error::DimMismatch { expected: dim, got: term.matrix.nrows() });
            }
            if !term.eta.is_finite() {
                return Err(Error::Invalid("eta must be finite".into()));
            }
            if term.matrix.iter().all(|z| z.norm_sqr() == T::zero()) {
                return Err(Error::Invalid(format!("zero B matrix at eta = {}", term.eta)));
            }
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                if terms[i].eta == terms[j].eta {
                    return Err(Error::Invalid(format!("duplicate eta {}", terms[i].eta)));
                }
            }
        }
        Ok(DelaySystem { dim, a, terms, delta })
    }

    /// Scalar system ẋ = a x + Σ b_k x(t + η_k).
    pub fn scalar(a: Complex<T>, terms: Vec<(f64, Complex<T>)>, delta: f64) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(eta, b)| DelayTerm { eta, matrix: DMatrix::from_element(1, 1, b) })
            .collect();
        DelaySystem::new(DMatrix::from_element(1, 1, a), terms, delta)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &CMat<T> {
        &self.a
    }

    pub fn terms(&self) -> &[DelayTerm<T>] {
        &self.terms
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// All η_k ≤ 0 (retarded system).
    pub fn is_pure_delay(&self) -> bool {
        self.terms.iter().all(|t| t.eta <= 0.0)
    }

    /// max |η_k| over delay terms, 0 without terms.
    pub fn max_delay(&self) -> f64 {
        self.terms.iter().map(|t| t.eta.abs()).fold(0.0, f64::max)
    }

    /// Smallest |η_k| over nonzero lags, if any.
    pub fn min_lag(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|t| t.eta.abs())
            .filter(|e| *e > 0.0)
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.min(e))))
    }

    /// Δ(z) = zI − A − Σ_k B_k e^{z η_k}.
    pub fn char_matrix(&self, z: Complex<T>) -> CMat<T> {
        let mut m = CMat::<T>::identity(self.dim, self.dim) * z;
        m -= &self.a;
        for term in &self.terms {
            let w = (z * real::<T>(term.eta)).exp();
            m -= &term.matrix * w;
        }
        m
    }

    /// Δ′(z) = I − Σ_k η_k B_k e^{z η_k}.
    pub fn char_matrix_deriv(&self, z: Complex<T>) -> CMat<T> {
        let mut m = CMat::<T>::identity(self.dim, self.dim);
        for term in &self.terms {
            let w = (z * real::<T>(term.eta)).exp() * real::<T>(term.eta);
            m -= &term.matrix * w;
        }
        m
    }

    /// det Δ(z).
    pub fn char_det(&self, z: Complex<T>) -> Complex<T> {
        self.char_matrix(z).determinant()
    }

    /// (det Δ(z), d/dz log det Δ(z)); the log-derivative is
    /// tr(Δ(z)⁻¹ Δ′(z)) by Jacobi's formula.
    pub fn char_det_logderiv(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let m = self.char_matrix(z);
        let det = m.determinant();
        let singular = Error::SingularAtPoint { re: to_f64(z.re), im: to_f64(z.im) };
        let inv = m.try_inverse().ok_or(singular.clone())?;
        // relative to the natural size of the terms that form Δ(z), so a
        // near-zero 1x1 matrix reads as singular even though its classical
        // condition number is 1
        if to_f64(frob_norm(&inv)) * self.char_scale(z) > SINGULAR_CONDITION {
            return Err(singular);
        }
        let logderiv = (inv * self.char_matrix_deriv(z)).trace();
        Ok((det, logderiv))
    }

    /// Scale-relative condition measure of Δ(z): ‖Δ(z)⁻¹‖_F times the size
    /// of the terms forming Δ(z), infinite when the inverse does not exist.
    /// Values above [`SINGULAR_CONDITION`] flag z as effectively a
    /// characteristic root.
    pub fn char_condition(&self, z: Complex<T>) -> f64 {
        match self.char_matrix(z).try_inverse() {
            Some(inv) => to_f64(frob_norm(&inv)) * self.char_scale(z),
            None => f64::INFINITY,
        }
    }

    /// Size scale of the terms zI, A, B_k e^{z η_k} entering Δ(z).
    fn char_scale(&self, z: Complex<T>) -> f64 {
        let z_abs = to_f64(z.norm());
        let re = to_f64(z.re);
        let mut s = z_abs.max(to_f64(frob_norm(&self.a))).max(1.0);
        for term in &self.terms {
            s = s.max(to_f64(frob_norm(&term.matrix)) * (re * term.eta).exp());
        }
        s
    }

    /// Growth functional Σ_k ‖B_k‖₂ e^{δ|η_k|} (Eq. with the spectral norm).
    pub fn growth_norm(&self, delta: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| to_f64(spectral_norm(&t.matrix)) * (delta * t.eta.abs()).exp())
            .sum()
    }
}
