//! Sampled signals on a uniform grid: numeric mean values and the
//! band-pass spectrum estimator.

use nalgebra::DVector;
use num_complex::Complex;

use crate::apfun::trigpoly::TrigPolynomial;
use crate::error::{Error, Result};
use crate::num::{real, to_f64, vec_norm, CVec, Real};

/// A complex vector signal sampled on the uniform grid t0 + j*dt.
#[derive(Clone, Debug)]
pub struct SampledSignal<T: Real> {
    t0: f64,
    dt: f64,
    dim: usize,
    values: Vec<CVec<T>>,
}

impl<T: Real> SampledSignal<T> {
    pub fn new(t0: f64, dt: f64, values: Vec<CVec<T>>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::Invalid("need finite t0 and dt > 0".into()));
        }
        if values.is_empty() {
            return Err(Error::Invalid("signal needs at least one sample".into()));
        }
        let dim = values[0].len();
        if dim == 0 || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Invalid("inconsistent sample dimensions".into()));
        }
        Ok(SampledSignal { t0, dt, dim, values })
    }

    /// Sample a trigonometric polynomial on [a, b] with step dt.
    pub fn sample(f: &TrigPolynomial<T>, a: f64, b: f64, dt: f64) -> Result<Self> {
        if !(b > a) || !(dt > 0.0) {
            return Err(Error::Invalid("need b > a and dt > 0".into()));
        }
        let n = ((b - a) / dt).round() as usize + 1;
        let values = (0..n)
            .map(|j| f.eval(real(a + j as f64 * dt)))
            .collect();
        SampledSignal::new(a, dt, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.values.len() - 1) as f64 * self.dt
    }

    pub fn span(&self) -> f64 {
        self.t_end() - self.t0
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn values(&self) -> &[CVec<T>] {
        &self.values
    }

    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .map(vec_norm)
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

/// Trapezoid estimate of the Bohr mean a(λ, g) over the widest sampled
/// sub-window of [-T, T].
///
/// For a trigonometric input the off-frequency leakage obeys
/// |est − a(λ, f)| ≤ (1/T) Σ_{μ≠λ} 2‖c_μ‖ / |μ − λ| + O(dt²).
pub fn bohr_coefficient_numeric<T: Real>(
    g: &SampledSignal<T>,
    lambda: f64,
    t_half: f64,
) -> Result<CVec<T>> {
    if !(t_half > 0.0) {
        return Err(Error::Invalid("T must be positive".into()));
    }
    let tol = 0.5 * g.dt;
    if g.t0 > -t_half + tol || g.t_end() < t_half - tol {
        return Err(Error::InsufficientCoverage { t_half });
    }
    let i0 = ((-t_half - g.t0) / g.dt - 1e-9).ceil().max(0.0) as usize;
    let i1 = (((t_half - g.t0) / g.dt) + 1e-9).floor() as usize;
    let i1 = i1.min(g.values.len() - 1);
    if i1 <= i0 {
        return Err(Error::InsufficientCoverage { t_half });
    }
    let mut acc: CVec<T> = DVector::from_element(g.dim, Complex::new(T::zero(), T::zero()));
    for j in i0..=i1 {
        let t = g.time(j);
        let w = if j == i0 || j == i1 { 0.5 } else { 1.0 };
        let phase = Complex::new(T::zero(), real::<T>(-lambda * t)).exp();
        acc += &g.values[j] * (phase * real::<T>(w * g.dt));
    }
    let window = g.time(i1) - g.time(i0);
    Ok(acc / Complex::new(real::<T>(window), T::zero()))
}

/// Output of the band-pass spectrum estimator.
#[derive(Clone, Debug)]
pub struct BeurlingReport {
    /// Peak location of each above-threshold cluster of grid points.
    pub detections: Vec<f64>,
    /// Max filtered amplitude at each grid frequency, relative to nothing.
    pub responses: Vec<f64>,
    /// Sup norm of the input signal.
    pub sup_norm: f64,
    /// Bound on the error from truncating the convolution to the sampled span.
    pub truncation_tail_bound: f64,
}

/// Detect spectrum points by convolving with a modulated Fejér kernel whose
/// frequency transform is the triangular bump on (ξ − eps, ξ + eps).
///
/// A grid frequency responds iff some Bohr frequency of the signal lies
/// within eps of it, so each tone produces one cluster of responding grid
/// points; the cluster peaks are reported.
pub fn beurling_estimate<T: Real>(
    g: &SampledSignal<T>,
    grid: &[f64],
    eps: f64,
    threshold: f64,
) -> Result<BeurlingReport> {
    if !(eps > 0.0) {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let required = 10.0 / eps;
    if g.span() < required {
        return Err(Error::SpanTooShort { span: g.span(), required });
    }
    let n = g.values.len();
    let center = n / 2;
    // a few output times near the span center keep the truncation window wide
    let offsets: [i64; 5] = [0, 1, -1, 2, -2];
    let sup = to_f64(g.sup_norm());
    let dt = g.dt;

    // fejer kernel with triangular transform on (-eps, eps)
    let phi0 = |s: f64| -> f64 {
        let x = eps * s / 2.0;
        let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
        eps / (2.0 * std::f64::consts::PI) * sinc * sinc
    };

    let mut responses = Vec::with_capacity(grid.len());
    for &xi in grid {
        let mut best = 0.0f64;
        for &off in &offsets {
            let c = center as i64 + off;
            if c < 0 || c as usize >= n {
                continue;
            }
            let c = c as usize;
            // (phi * g)(t_c) = sum_j phi(t_c - t_j) g(t_j) dt
            let mut acc: CVec<T> =
                DVector::from_element(g.dim, Complex::new(T::zero(), T::zero()));
            for j in 0..n {
                let s = (c as f64 - j as f64) * dt;
                let w = phi0(s);
                let phase = Complex::new(T::zero(), real::<T>(xi * s)).exp();
                acc += &g.values[j] * (phase * real::<T>(w * dt));
            }
            let amp = to_f64(vec_norm(&acc));
            if amp > best {
                best = amp;
            }
        }
        responses.push(best);
    }

    // truncation: |phi0(s)| <= 2/(pi*eps*s^2) for large s, so the discarded
    // mass beyond +/- s_min is at most 4/(pi*eps*s_min)
    let s_min = (g.span() / 2.0 - offsets.len() as f64 * dt).max(dt);
    let tail = sup * 4.0 / (std::f64::consts::PI * eps * s_min);

    let cut = threshold * sup;
    let mut detections = Vec::new();
    let mut i = 0usize;
    while i < grid.len() {
        if responses[i] > cut {
            let mut peak = i;
            let mut j = i;
            while j < grid.len() && responses[j] > cut {
                if responses[j] > responses[peak] {
                    peak = j;
                }
                j += 1;
            }
            detections.push(grid[peak]);
            i = j;
        } else {
            i += 1;
        }
    }

    Ok(BeurlingReport {
        detections,
        responses,
        sup_norm: sup,
        truncation_tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfun::basis::{Frequency, GeneratorBasis};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn mean_of_zero_signal_is_zero() {
        let vals = vec![DVector::from_element(1, c(0.0, 0.0)); 401];
        let g = SampledSignal::new(-2.0, 0.01, vals).unwrap();
        let a = bohr_coefficient_numeric(&g, 0.7, 2.0).unwrap();
        assert_eq!(a[0], c(0.0, 0.0));
    }

    #[test]
    fn mean_recovers_matching_tone() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(one, c(1.0, 0.0))]).unwrap();
        let g = SampledSignal::sample(&f, -100.0, 100.0, 0.01).unwrap();
        let a = bohr_coefficient_numeric(&g, 1.0, 100.0).unwrap();
        assert!((a[0] - c(1.0, 0.0)).norm() < 1e-3, "{}", a[0]);
    }

    #[test]
    fn mean_leakage_within_stated_bound() {
        let basis = GeneratorBasis::new(vec![("one", 1.0), ("sqrt2", 2f64.sqrt())]).unwrap();
        let one = Frequency::from_integers(&basis, &[1, 0]).unwrap();
        let root2 = Frequency::from_integers(&basis, &[0, 1]).unwrap();
        let f = TrigPolynomial::scalar(
            &basis,
            vec![(one, c(1.0, 0.0)), (root2, c(0.5, 0.0))],
        )
        .unwrap();
        let g = SampledSignal::sample(&f, -200.0, 200.0, 0.01).unwrap();
        let a = bohr_coefficient_numeric(&g, 2f64.sqrt(), 200.0).unwrap();
        // bound: (1/T) * 2*1/|1-sqrt2| ~ 0.024
        assert!((a[0] - c(0.5, 0.0)).norm() < 0.02, "{}", a[0]);
    }

    #[test]
    fn mean_requires_coverage() {
        let vals = vec![DVector::from_element(1, c(1.0, 0.0)); 11];
        let g = SampledSignal::new(0.0, 0.1, vals).unwrap();
        assert!(matches!(
            bohr_coefficient_numeric(&g, 0.0, 5.0),
            Err(Error::InsufficientCoverage { .. })
        ));
    }

    #[test]
    fn leakage_bound_halves_with_doubled_window() {
        let basis = GeneratorBasis::new(vec![("one", 1.0), ("sqrt2", 2f64.sqrt())]).unwrap();
        let one = Frequency::from_integers(&basis, &[1, 0]).unwrap();
        let root2 = Frequency::from_integers(&basis, &[0, 1]).unwrap();
        for (c1, c2) in [(1.0, 0.5), (0.3, 0.9), (2.0, 0.1)] {
            let f = TrigPolynomial::scalar(
                &basis,
                vec![
                    (one.clone(), c(c1, 0.0)),
                    (root2.clone(), c(c2, 0.0)),
                ],
            )
            .unwrap();
            let g = SampledSignal::sample(&f, -400.0, 400.0, 0.02).unwrap();
            let lam = 2f64.sqrt();
            let bound = |t: f64| (1.0 / t) * 2.0 * c1 / (1.0 - lam).abs();
            for t in [100.0, 200.0, 400.0] {
                let a = bohr_coefficient_numeric(&g, lam, t).unwrap();
                let err = (a[0] - c(c2, 0.0)).norm();
                assert!(err <= bound(t) + 1e-4, "T={t}: err {err} vs bound {}", bound(t));
            }
        }
    }

    #[test]
    fn beurling_zero_signal_detects_nothing() {
        let vals = vec![DVector::from_element(1, c(0.0, 0.0)); 2001];
        let g = SampledSignal::new(-100.0, 0.1, vals).unwrap();
        let grid: Vec<f64> = (0..60).map(|k| k as f64 * 0.05).collect();
        let rep = beurling_estimate(&g, &grid, 0.1, 1e-3).unwrap();
        assert!(rep.detections.is_empty());
    }

    #[test]
    fn beurling_span_too_short() {
        let vals = vec![DVector::from_element(1, c(1.0, 0.0)); 11];
        let g = SampledSignal::new(0.0, 0.1, vals).unwrap();
        assert!(matches!(
            beurling_estimate(&g, &[1.0], 0.1, 1e-3),
            Err(Error::SpanTooShort { .. })
        ));
    }

    #[test]
    fn beurling_finds_single_tone() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(one, c(1.0, 0.0))]).unwrap();
        let g = SampledSignal::sample(&f, -250.0, 250.0, 0.05).unwrap();
        let grid: Vec<f64> = (0..=60).map(|k| k as f64 * 0.05).collect();
        let rep = beurling_estimate(&g, &grid, 0.1, 1e-3).unwrap();
        assert_eq!(rep.detections.len(), 1, "detections: {:?}", rep.detections);
        assert!((rep.detections[0] - 1.0).abs() <= 0.05 + 1e-12);
    }
}
