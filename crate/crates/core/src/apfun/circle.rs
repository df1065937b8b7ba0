//! Splitting a trigonometric polynomial by where its frequencies land on
//! the unit circle under ξ ↦ e^{iξ}.

use crate::apfun::trigpoly::TrigPolynomial;
use crate::error::{Error, Result};
use crate::num::Real;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Tolerance (chordal) for calling a lifted frequency "on" an arc endpoint.
pub const ENDPOINT_TOL: f64 = 1e-9;

/// Closed arc on the unit circle, counterclockwise from `start` to `end`
/// (angles in radians; `Arc::full()` is the whole circle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleArc {
    start: f64,
    end: f64,
    full: bool,
}

fn wrap(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    t
}

/// |e^{iθ1} − e^{iθ2}|.
pub fn chordal_distance(theta1: f64, theta2: f64) -> f64 {
    2.0 * ((theta1 - theta2) / 2.0).sin().abs()
}

impl CircleArc {
    pub fn new(start: f64, end: f64) -> Self {
        CircleArc { start: wrap(start), end: wrap(end), full: false }
    }

    pub fn full() -> Self {
        CircleArc { start: 0.0, end: 0.0, full: true }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Arc length in radians.
    pub fn length(&self) -> f64 {
        if self.full {
            TAU
        } else if self.end >= self.start {
            self.end - self.start
        } else {
            TAU - (self.start - self.end)
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.full {
            return true;
        }
        let t = wrap(theta);
        if self.end >= self.start {
            t >= self.start && t <= self.end
        } else {
            t >= self.start || t <= self.end
        }
    }

    fn near_endpoint(&self, theta: f64) -> bool {
        if self.full {
            return false;
        }
        chordal_distance(theta, self.start) < ENDPOINT_TOL
            || chordal_distance(theta, self.end) < ENDPOINT_TOL
    }
}

/// Split f into (u1, u2): u1 holds the terms whose circle lift e^{iλ}
/// falls in one of the arcs, u2 the rest.
pub fn circle_split<T: Real>(
    f: &TrigPolynomial<T>,
    arcs: &[CircleArc],
) -> Result<(TrigPolynomial<T>, TrigPolynomial<T>)> {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (freq, coeff) in f.terms() {
        let theta = freq.value();
        if arcs.iter().any(|a| a.near_endpoint(theta)) {
            return Err(Error::AmbiguousBoundary { lambda: freq.value() });
        }
        if arcs.iter().any(|a| a.contains(theta)) {
            inside.push((freq.clone(), coeff.clone()));
        } else {
            outside.push((freq.clone(), coeff.clone()));
        }
    }
    Ok((
        TrigPolynomial::new(f.basis(), f.dim(), inside)?,
        TrigPolynomial::new(f.basis(), f.dim(), outside)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfun::basis::{Frequency, GeneratorBasis};
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn aliased_frequencies_lift_to_one_point() {
        // e^{it} and e^{i(1+2pi)t} land on the same circle point e^{i}
        let basis =
            GeneratorBasis::new(vec![("one", 1.0), ("pi", std::f64::consts::PI)]).unwrap();
        let one = Frequency::from_integers(&basis, &[1, 0]).unwrap();
        let shifted = Frequency::from_integers(&basis, &[1, 2]).unwrap();
        let f = TrigPolynomial::scalar(
            &basis,
            vec![(one, c(1.0, 0.0)), (shifted, c(2.0, 0.0))],
        )
        .unwrap();
        let arc = CircleArc::new(0.8, 1.2);
        let (u1, u2) = circle_split(&f, &[arc]).unwrap();
        assert_eq!(u1.terms().len(), 2);
        assert!(u2.is_zero());
    }

    #[test]
    fn empty_arcs_and_full_circle() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let one = Frequency::from_integers(&basis, &[1]).unwrap();
        let three = Frequency::from_integers(&basis, &[3]).unwrap();
        let f = TrigPolynomial::scalar(
            &basis,
            vec![(one, c(1.0, 0.0)), (three, c(1.0, 0.0))],
        )
        .unwrap();
        let (u1, u2) = circle_split(&f, &[]).unwrap();
        assert!(u1.is_zero());
        assert_eq!(u2, f);
        let (u1, u2) = circle_split(&f, &[CircleArc::full()]).unwrap();
        assert_eq!(u1, f);
        assert!(u2.is_zero());
    }

    #[test]
    fn wraparound_arc_and_ambiguous_endpoint() {
        let basis = GeneratorBasis::new(vec![("one", 1.0)]).unwrap();
        let six = Frequency::from_integers(&basis, &[6]).unwrap(); // 6 rad, near 2pi
        let f = TrigPolynomial::scalar(&basis, vec![(six, c(1.0, 0.0))]).unwrap();
        let wrapping = CircleArc::new(5.5, 0.5);
        let (u1, _) = circle_split(&f, &[wrapping]).unwrap();
        assert_eq!(u1.terms().len(), 1);

        let touching = CircleArc::new(6.0, 6.5);
        assert!(matches!(
            circle_split(&f, &[touching]),
            Err(Error::AmbiguousBoundary { .. })
        ));
    }
}
