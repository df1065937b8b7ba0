//! Scalar abstraction and small numeric kernels shared across modules.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the numeric kernels are generic over: f32 or f64.
pub trait Real: RealField + Float + FloatConst + FromPrimitive + Copy {}
impl Real for f32 {}
impl Real for f64 {}

/// Lift an f64 constant into the working scalar.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    <T as num_traits::ToPrimitive>::to_f64(&x).expect("scalar fits in f64")
}

pub type CVec<T> = DVector<Complex<T>>;
pub type CMat<T> = DMatrix<Complex<T>>;

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &CVec<T>) -> T {
    let mut s = T::zero();
    for z in v.iter() {
        s = s + z.norm_sqr();
    }
    <T as Float>::sqrt(s)
}

/// Frobenius norm of a complex matrix.
pub fn frob_norm<T: Real>(m: &CMat<T>) -> T {
    let mut s = T::zero();
    for z in m.iter() {
        s = s + z.norm_sqr();
    }
    <T as Float>::sqrt(s)
}

/// Spectral (operator 2-) norm via power iteration on M^H M.
///
/// Matrices here are tiny (n <= a few), so a fixed-iteration power method
/// with a deterministic start is plenty.
pub fn spectral_norm<T: Real>(m: &CMat<T>) -> T {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return T::zero();
    }
    let gram = m.adjoint() * m;
    // deterministic start with all components present
    let mut v: CVec<T> = DVector::from_fn(n, |i, _| {
        Complex::new(T::one() + real::<T>(i as f64 + 1.0) * real::<T>(1e-3), T::zero())
    });
    let mut norm = vec_norm(&v);
    v /= Complex::new(norm, T::zero());
    let mut lam = T::zero();
    for _ in 0..200 {
        let w = &gram * &v;
        norm = vec_norm(&w);
        if norm == T::zero() {
            return T::zero();
        }
        let next = norm;
        v = w / Complex::new(norm, T::zero());
        if <T as Float>::abs(next - lam) <= real::<T>(1e-14) * next {
            lam = next;
            break;
        }
        lam = next;
    }
    <T as Float>::sqrt(lam)
}

/// Frobenius-norm condition estimate: ||M|| * ||M^{-1}||, infinite when singular.
pub fn condition_estimate<T: Real>(m: &CMat<T>) -> T {
    match m.clone().try_inverse() {
        Some(inv) => frob_norm(m) * frob_norm(&inv),
        None => <T as Float>::infinity(),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; nodes accurate to machine
/// precision for the orders used here (<= 512).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [2usize, 5, 32] {
            let (x, w) = gauss_legendre(n);
            // integrate x^2 over [-1,1] = 2/3
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum();
            assert!((s - 2.0 / 3.0).abs() < 1e-13, "n={n}: {s}");
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn spectral_norm_matches_known_values() {
        let m: CMat<f64> = dmatrix![
            Complex::new(3.0, 0.0), Complex::new(0.0, 0.0);
            Complex::new(0.0, 0.0), Complex::new(-4.0, 0.0)
        ];
        assert!((spectral_norm(&m) - 4.0).abs() < 1e-10);
        // rank-1: norm = sqrt(sum |entries|^2)
        let r: CMat<f64> = dmatrix![
            Complex::new(1.0, 0.0), Complex::new(2.0, 0.0);
            Complex::new(2.0, 0.0), Complex::new(4.0, 0.0)
        ];
        assert!((spectral_norm(&r) - 5.0).abs() < 1e-10);
    }

    #[test]
    fn condition_estimate_flags_singular() {
        let s: CMat<f64> = dmatrix![
            Complex::new(1.0, 0.0), Complex::new(1.0, 0.0);
            Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)
        ];
        assert!(condition_estimate(&s).is_infinite());
    }
}
