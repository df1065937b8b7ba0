//! Generator bases and exact rational frequency coordinates.
//!
//! Rational independence of the generator values is undecidable from
//! floats, so it is carried as a user assertion; everything downstream
//! that depends on it is conditional on that assertion.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub value: f64,
}

/// Ordered list of real generators ω_1, …, ω_k that frequencies are
/// rational combinations of.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    generators: Vec<Generator>,
    independence_asserted: bool,
}

pub type BasisRef = Arc<GeneratorBasis>;

impl PartialEq for GeneratorBasis {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl GeneratorBasis {
    pub fn new(generators: Vec<(impl Into<String>, f64)>) -> Result<BasisRef> {
        let generators: Vec<Generator> = generators
            .into_iter()
            .map(|(name, value)| Generator { name: name.into(), value })
            .collect();
        for g in &generators {
            if !g.value.is_finite() || g.value == 0.0 {
                return Err(Error::Invalid(format!(
                    "generator {} must be finite and nonzero",
                    g.name
                )));
            }
        }
        for i in 0..generators.len() {
            for j in (i + 1)..generators.len() {
                if generators[i].name == generators[j].name {
                    return Err(Error::Invalid(format!(
                        "duplicate generator name {}",
                        generators[i].name
                    )));
                }
                if generators[i].value == generators[j].value {
                    return Err(Error::Invalid(format!(
                        "generators {} and {} share the value {}",
                        generators[i].name, generators[j].name, generators[i].value
                    )));
                }
            }
        }
        Ok(Arc::new(GeneratorBasis { generators, independence_asserted: true }))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Whether the user asserts the generator values rationally independent.
    pub fn independence_asserted(&self) -> bool {
        self.independence_asserted
    }

    /// Index of a generator whose value is exactly 1, if declared.
    pub fn unit_generator(&self) -> Option<usize> {
        self.generators.iter().position(|g| g.value == 1.0)
    }
}

/// An exact frequency: a rational coordinate vector over a basis, with the
/// numeric value cached for evaluation.
#[derive(Clone, Debug)]
pub struct Frequency {
    basis: BasisRef,
    coords: Vec<BigRational>,
    value: f64,
}

impl Frequency {
    pub fn new(basis: &BasisRef, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != basis.len() {
            return Err(Error::BasisMismatch);
        }
        let value = coords
            .iter()
            .zip(basis.generators())
            .map(|(q, g)| q.to_f64().unwrap_or(f64::NAN) * g.value)
            .sum();
        Ok(Frequency { basis: basis.clone(), coords, value })
    }

    pub fn zero(basis: &BasisRef) -> Self {
        let coords = vec![BigRational::zero(); basis.len()];
        Frequency { basis: basis.clone(), coords, value: 0.0 }
    }

    /// Frequency q * ω_j on a single generator.
    pub fn on_generator(basis: &BasisRef, index: usize, q: BigRational) -> Result<Self> {
        if index >= basis.len() {
            return Err(Error::Invalid(format!("generator index {index} out of range")));
        }
        let mut coords = vec![BigRational::zero(); basis.len()];
        coords[index] = q;
        Frequency::new(basis, coords)
    }

    pub fn from_integers(basis: &BasisRef, coords: &[i64]) -> Result<Self> {
        let coords = coords
            .iter()
            .map(|&n| BigRational::from_integer(BigInt::from(n)))
            .collect();
        Frequency::new(basis, coords)
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Numeric value Σ q_i ω_i.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|q| q.is_zero())
    }

    pub fn same_basis(&self, other: &Frequency) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis
    }

    pub fn negate(&self) -> Frequency {
        let coords = self.coords.iter().map(|q| -q).collect();
        Frequency::new(&self.basis, coords).expect("same basis")
    }

    pub fn add(&self, other: &Frequency) -> Result<Frequency> {
        if !self.same_basis(other) {
            return Err(Error::BasisMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Frequency::new(&self.basis, coords)
    }

    pub fn scale_int(&self, n: &BigInt) -> Frequency {
        let coords = self.coords.iter().map(|q| q * BigRational::from_integer(n.clone())).collect();
        Frequency::new(&self.basis, coords).expect("same basis")
    }

    /// If `self = n * base` for an integer n, return n.
    pub fn integer_multiple_of(&self, base: &Frequency) -> Option<BigInt> {
        if !self.same_basis(base) {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for (a, b) in self.coords.iter().zip(&base.coords) {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
            } else {
                let r = a / b;
                match &ratio {
                    Some(prev) if *prev != r => return None,
                    _ => ratio = Some(r),
                }
            }
        }
        let r = ratio.unwrap_or_else(BigRational::zero);
        if r.is_integer() {
            Some(r.to_integer())
        } else {
            None
        }
    }

    pub(crate) fn cmp_coords(&self, other: &Frequency) -> Ordering {
        self.coords.cmp(&other.coords)
    }

    /// Canonical order: ascending numeric value, exact coords as tiebreak.
    pub(crate) fn cmp_canonical(&self, other: &Frequency) -> Ordering {
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        self.same_basis(other) && self.coords == other.coords
    }
}
impl Eq for Frequency {}

impl std::hash::Hash for Frequency {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl std::fmt::Display for Frequency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(self.basis.generators())
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, g)| format!("{}*{}", q, g.name))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Parse a rational string "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Invalid(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Render a rational as the "p/q" form used by the file schemas.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Base frequency 2π/τ for a period τ = r·2π, r rational.
///
/// Needs a generator whose value is exactly 1; otherwise 2π/τ = 1/r is
/// not expressible over the basis.
pub fn period_base_two_pi_multiple(basis: &BasisRef, r: &BigRational) -> Result<Frequency> {
    if r.is_zero() || r.is_negative() {
        return Err(Error::Invalid("period must be positive".into()));
    }
    let unit = basis.unit_generator().ok_or(Error::IncommensurableTau)?;
    Frequency::on_generator(basis, unit, r.recip())
}
