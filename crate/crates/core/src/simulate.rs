//! Independent verification by time integration: a method-of-steps RK4
//! integrator for retarded (pure-delay) systems with cubic Hermite
//! interpolation for delayed lookups, plus trajectory comparison.
//!
//! Mixed-type systems (any η_k > 0) are refused: their initial value
//! problems are not well-posed, and verification falls back to residual
//! checks.

use num_complex::Complex;

use crate::apfun::TrigPolynomial;
use crate::chroots::DelaySystem;
use crate::error::{Error, Result};
use crate::num::{real, to_f64, vec_norm, CVec, Real};

/// Initial data on [−r, 0], r the largest delay: a trigonometric
/// polynomial evaluated wherever the integrator needs the past.
#[derive(Clone, Debug)]
pub struct History<T: Real> {
    source: TrigPolynomial<T>,
}

impl<T: Real> History<T> {
    pub fn new(source: TrigPolynomial<T>) -> Self {
        History { source }
    }

    pub fn source(&self) -> &TrigPolynomial<T> {
        &self.source
    }

    pub fn eval(&self, t: T) -> CVec<T> {
        self.source.eval(t)
    }
}

/// Solution values on the uniform grid t0 + i·dt.
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<CVec<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }
}

/// Stored state plus derivative samples; enough for cubic Hermite lookups
/// that keep the delayed values at RK4 accuracy between grid points.
struct Dense<T: Real> {
    dt: f64,
    values: Vec<CVec<T>>,
    derivs: Vec<CVec<T>>,
}

impl<T: Real> Dense<T> {
    fn lookup(&self, s: f64, history: &History<T>) -> CVec<T> {
        if s <= 0.0 {
            return history.eval(real::<T>(s));
        }
        let pos = s / self.dt;
        let j = (pos.floor() as usize).min(self.values.len().saturating_sub(2));
        let theta = pos - j as f64;
        if theta == 0.0 {
            return self.values[j].clone();
        }
        let th = real::<T>(theta);
        let one = T::one();
        let h00 = (real::<T>(2.0) * th - real::<T>(3.0)) * th * th + one;
        let h10 = ((th - real::<T>(2.0)) * th + one) * th;
        let h01 = (real::<T>(3.0) - real::<T>(2.0) * th) * th * th;
        let h11 = (th - one) * th * th;
        let dt = real::<T>(self.dt);
        let scale = |x: T| Complex::new(x, T::zero());
        &self.values[j] * scale(h00)
            + &self.derivs[j] * scale(h10 * dt)
            + &self.values[j + 1] * scale(h01)
            + &self.derivs[j + 1] * scale(h11 * dt)
    }
}

/// Classical RK4 method of steps on [0, T].
///
/// Delayed arguments land at least four steps in the past (enforced by the
/// dt ≤ min|η_k|/4 precondition), so every lookup falls in a completed
/// Hermite segment. Derivative discontinuities at multiples of the delays
/// are not specially meshed; local order reduction there is accepted.
pub fn integrate<T: Real>(
    sys: &DelaySystem<T>,
    f: &TrigPolynomial<T>,
    h: &History<T>,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory<T>> {
    if let Some(term) = sys.terms().iter().find(|t| t.eta > 0.0) {
        return Err(Error::AdvanceTermPresent { eta: term.eta });
    }
    if f.dim() != sys.dim() {
        return Err(Error::DimMismatch { expected: sys.dim(), got: f.dim() });
    }
    if h.source.dim() != sys.dim() {
        return Err(Error::DimMismatch { expected: sys.dim(), got: h.source.dim() });
    }
    if !(t_end > 0.0 && t_end.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Invalid("need T > 0 and dt > 0".into()));
    }
    if let Some(lag) = sys.min_lag() {
        let max_dt = lag / 4.0;
        if dt > max_dt {
            return Err(Error::StepTooLarge { dt, max_dt });
        }
    }
    let steps = (t_end / dt).round().max(1.0) as usize;
    let mut dense = Dense::<T> {
        dt,
        values: Vec::with_capacity(steps + 1),
        derivs: Vec::with_capacity(steps + 1),
    };

    // g(t, y) with the delayed terms read from history/dense output; an
    // eta = 0 term acts on the stage value directly
    let rhs = |t: f64, y: &CVec<T>, dense: &Dense<T>| -> CVec<T> {
        let mut out: CVec<T> = sys.a() * y;
        for term in sys.terms() {
            if term.eta == 0.0 {
                out += &term.matrix * y;
            } else {
                out += &term.matrix * dense.lookup(t + term.eta, h);
            }
        }
        out += f.eval(real::<T>(t));
        out
    };

    let x0 = h.eval(T::zero());
    let d0 = rhs(0.0, &x0, &dense);
    dense.values.push(x0);
    dense.derivs.push(d0);

    let half = Complex::new(real::<T>(dt / 2.0), T::zero());
    let full = Complex::new(real::<T>(dt), T::zero());
    let sixth = Complex::new(real::<T>(dt / 6.0), T::zero());
    let two = Complex::new(real::<T>(2.0), T::zero());
    for i in 0..steps {
        let t = i as f64 * dt;
        let x = dense.values[i].clone();
        let k1 = dense.derivs[i].clone();
        let k2 = rhs(t + dt / 2.0, &(&x + &k1 * half), &dense);
        let k3 = rhs(t + dt / 2.0, &(&x + &k2 * half), &dense);
        let k4 = rhs(t + dt, &(&x + &k3 * full), &dense);
        let next = &x + (&k1 + &k2 * two + &k3 * two + &k4) * sixth;
        let dn = rhs(t + dt, &next, &dense);
        dense.values.push(next);
        dense.derivs.push(dn);
    }
    Ok(Trajectory { t0: 0.0, dt, values: dense.values })
}

/// max over the trajectory grid of ‖traj(t) − u(t)‖.
pub fn compare<T: Real>(traj: &Trajectory<T>, u: &TrigPolynomial<T>) -> Result<f64> {
    if traj.dim() != u.dim() {
        return Err(Error::DimMismatch { expected: u.dim(), got: traj.dim() });
    }
    let mut dev = 0.0f64;
    for (i, v) in traj.values.iter().enumerate() {
        let diff: CVec<T> = v - u.eval(real::<T>(traj.time(i)));
        dev = dev.max(to_f64(vec_norm(&diff)));
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfun::{Frequency, GeneratorBasis};
    use crate::massera::{harmonic_solve, ForcedProblem};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn constant_for_zero_system() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let sys = DelaySystem::scalar(c(0.0, 0.0), vec![], 1.0).unwrap();
        let f = TrigPolynomial::<f64>::zero(&basis, 1);
        let h = History::new(
            TrigPolynomial::scalar(&basis, vec![(Frequency::zero(&basis), c(2.0, -1.0))])
                .unwrap(),
        );
        let traj = integrate(&sys, &f, &h, 5.0, 0.1).unwrap();
        for v in &traj.values {
            assert!((v[0] - c(2.0, -1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn reproduces_cosine_solution_of_delay_equation() {
        // x(t) = cos(pi t / 2) solves x'(t) = -(pi/2) x(t-1)
        let basis = GeneratorBasis::new(vec![("pi", PI)]).unwrap();
        let sys = DelaySystem::scalar(c(0.0, 0.0), vec![(-1.0, c(-FRAC_PI_2, 0.0))], 2.0).unwrap();
        let half = Frequency::new(&basis, vec![q(1, 2)]).unwrap();
        let cosine = TrigPolynomial::scalar(
            &basis,
            vec![(half.clone(), c(0.5, 0.0)), (half.negate(), c(0.5, 0.0))],
        )
        .unwrap();
        let f = TrigPolynomial::<f64>::zero(&basis, 1);
        let traj = integrate(&sys, &f, &History::new(cosine.clone()), 10.0, 1e-3).unwrap();
        let dev = compare(&traj, &cosine).unwrap();
        assert!(dev < 1e-6, "{dev}");
    }

    #[test]
    fn refuses_advance_terms_and_large_steps() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let f = TrigPolynomial::<f64>::zero(&basis, 1);
        let h = History::new(TrigPolynomial::zero(&basis, 1));

        let mixed = DelaySystem::scalar(c(0.0, 0.0), vec![(1.0, c(1.0, 0.0))], 1.0).unwrap();
        assert!(matches!(
            integrate(&mixed, &f, &h, 1.0, 0.01),
            Err(Error::AdvanceTermPresent { eta }) if eta == 1.0
        ));

        let delayed = DelaySystem::scalar(c(0.0, 0.0), vec![(-1.0, c(1.0, 0.0))], 1.0).unwrap();
        assert!(matches!(
            integrate(&delayed, &f, &h, 1.0, 0.3),
            Err(Error::StepTooLarge { max_dt, .. }) if (max_dt - 0.25).abs() < 1e-15
        ));
    }

    #[test]
    fn compare_measures_exact_match_and_offset() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let u = TrigPolynomial::scalar(&basis, vec![(one, c(1.0, 0.5))]).unwrap();
        let dt = 0.05;
        let values: Vec<CVec<f64>> = (0..100)
            .map(|i| u.eval(i as f64 * dt))
            .collect();
        let traj = Trajectory { t0: 0.0, dt, values };
        assert!(compare(&traj, &u).unwrap() < 1e-14);

        let offset = c(0.3, -0.4);
        let shifted: Vec<CVec<f64>> = traj
            .values
            .iter()
            .map(|v| v.map(|z| z + offset))
            .collect();
        let shifted = Trajectory { t0: 0.0, dt, values: shifted };
        let dev = compare(&shifted, &u).unwrap();
        assert!((dev - offset.norm()).abs() < 1e-13);

        let wrong_dim = TrigPolynomial::<f64>::zero(&basis, 2);
        assert!(matches!(
            compare(&traj, &wrong_dim),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn cross_checks_harmonic_solution() {
        // x'(t) = -0.5 x(t-1) + e^{it}
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let sys = DelaySystem::scalar(c(0.0, 0.0), vec![(-1.0, c(-0.5, 0.0))], 1.0).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(one, c(1.0, 0.0))]).unwrap();
        let p = ForcedProblem::new(sys.clone(), f.clone()).unwrap();
        let u = harmonic_solve(&p).unwrap().u;
        let traj = integrate(&sys, &f, &History::new(u.clone()), 20.0, 1e-3).unwrap();
        let dev = compare(&traj, &u).unwrap();
        assert!(dev < 1e-4, "{dev}");
    }

    #[test]
    fn integration_is_linear_in_the_data() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let sys = DelaySystem::scalar(c(-0.2, 0.0), vec![(-1.0, c(-0.3, 0.0))], 1.0).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(one.clone(), c(1.0, 0.0))]).unwrap();
        let h = TrigPolynomial::scalar(&basis, vec![(one, c(0.4, 0.2))]).unwrap();
        let alpha = c(1.5, -0.5);
        let t1 = integrate(&sys, &f, &History::new(h.clone()), 5.0, 0.01).unwrap();
        let t2 = integrate(
            &sys,
            &f.scaled(alpha),
            &History::new(h.scaled(alpha)),
            5.0,
            0.01,
        )
        .unwrap();
        for (a, b) in t1.values.iter().zip(&t2.values) {
            assert!((b[0] - a[0] * alpha).norm() < 1e-10);
        }
    }
}
