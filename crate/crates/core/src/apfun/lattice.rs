//! Integer bases of frequency modules.
//!
//! Denominators are cleared per generator coordinate, then the resulting
//! integer matrix is reduced to a lattice basis in Hermite normal form over
//! arbitrary-precision integers, so the module arithmetic stays exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::apfun::basis::{BasisRef, Frequency};
use crate::apfun::trigpoly::TrigPolynomial;
use crate::error::{Error, Result};
use crate::num::Real;

/// The module 𝔐 generated by a frequency set, presented by an integer basis.
#[derive(Clone, Debug)]
pub struct FrequencyModule {
    basis: BasisRef,
    integer_basis: Vec<Frequency>,
    /// HNF rows over the cleared-denominator lattice, kept for exact
    /// membership tests.
    hnf_rows: Vec<Vec<BigInt>>,
    /// Per-coordinate denominator scale used to clear denominators.
    scales: Vec<BigInt>,
    rank: usize,
}

impl FrequencyModule {
    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn integer_basis(&self) -> &[Frequency] {
        &self.integer_basis
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exact integer coordinates of `freq` in the integer basis, when the
    /// frequency belongs to the module.
    pub fn integer_coordinates(&self, freq: &Frequency) -> Option<Vec<BigInt>> {
        if freq.coords().len() != self.scales.len() {
            return None;
        }
        // clear denominators with the stored scales; membership requires
        // the scaled coordinates to be integers
        let mut target: Vec<BigInt> = Vec::with_capacity(self.scales.len());
        for (q, s) in freq.coords().iter().zip(&self.scales) {
            let scaled = q * BigRational::from_integer(s.clone());
            if !scaled.is_integer() {
                return None;
            }
            target.push(scaled.to_integer());
        }
        // forward substitution on the echelon rows
        let mut coeffs = vec![BigInt::zero(); self.hnf_rows.len()];
        for (i, row) in self.hnf_rows.iter().enumerate() {
            let pivot_col = row.iter().position(|x| !x.is_zero())?;
            let (q, r) = num_integer::Integer::div_rem(&target[pivot_col], &row[pivot_col]);
            if !r.is_zero() {
                return None;
            }
            for (t, v) in target.iter_mut().zip(row) {
                *t -= &q * v;
            }
            coeffs[i] = q;
        }
        if target.iter().all(|x| x.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, freq: &Frequency) -> bool {
        self.integer_coordinates(freq).is_some()
    }
}

/// Row-style Hermite normal form of an integer matrix; returns the nonzero
/// rows, which form a lattice basis of the row span.
fn hnf(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut r = 0usize;
    for c in 0..ncols {
        // Euclid on column c among rows r.. until a single nonzero remains
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero()
                    && best.map_or(true, |b| rows[i][c].abs() < rows[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut any_left = false;
            for i in (r + 1)..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = num_integer::Integer::div_floor(&rows[i][c], &rows[r][c]);
                    for j in 0..ncols {
                        let sub = &q * &rows[r][j];
                        rows[i][j] -= sub;
                    }
                    if !rows[i][c].is_zero() {
                        any_left = true;
                    }
                }
            }
            if !any_left {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            // reduce entries above the pivot
            for i in 0..r {
                let q = num_integer::Integer::div_floor(&rows[i][c], &rows[r][c]);
                if !q.is_zero() {
                    for j in 0..ncols {
                        let sub = &q * &rows[r][j];
                        rows[i][j] -= sub;
                    }
                }
            }
            r += 1;
            if r == rows.len() {
                break;
            }
        }
    }
    rows.truncate(r);
    rows
}

/// Integer basis of the module generated by `freqs`.
pub fn integer_basis(freqs: &[Frequency]) -> Result<FrequencyModule> {
    if freqs.is_empty() {
        return Err(Error::Invalid(
            "integer_basis of an empty set needs an explicit basis; use integer_basis_over".into(),
        ));
    }
    integer_basis_over(freqs[0].basis(), freqs)
}

/// Same, with the generator basis given explicitly so the empty set works.
pub fn integer_basis_over(basis: &BasisRef, freqs: &[Frequency]) -> Result<FrequencyModule> {
    let k = basis.len();
    for f in freqs {
        if !(std::sync::Arc::ptr_eq(f.basis(), basis) || **f.basis() == **basis) {
            return Err(Error::BasisMismatch);
        }
    }
    // per-coordinate LCM of denominators
    let mut scales = vec![BigInt::from(1); k];
    for f in freqs {
        for (s, q) in scales.iter_mut().zip(f.coords()) {
            *s = num_integer::Integer::lcm(s, q.denom());
        }
    }
    let rows: Vec<Vec<BigInt>> = freqs
        .iter()
        .map(|f| {
            f.coords()
                .iter()
                .zip(&scales)
                .map(|(q, s)| (q * BigRational::from_integer(s.clone())).to_integer())
                .collect()
        })
        .collect();
    let hnf_rows = hnf(rows);
    let integer_basis = hnf_rows
        .iter()
        .map(|row| {
            let coords = row
                .iter()
                .zip(&scales)
                .map(|(n, s)| BigRational::new(n.clone(), s.clone()))
                .collect();
            Frequency::new(basis, coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = integer_basis.len();
    Ok(FrequencyModule { basis: basis.clone(), integer_basis, hnf_rows, scales, rank })
}

/// Quasi-periodicity order: rank of the module generated by σ_b(f).
pub fn qp_order<T: Real>(f: &TrigPolynomial<T>) -> usize {
    integer_basis_over(f.basis(), &f.bohr_spectrum())
        .expect("spectrum frequencies share the polynomial's basis")
        .rank()
}

/// Whether f has period τ = 2π / base: true iff every Bohr frequency is an
/// integer multiple of `base`, decided exactly on rational coordinates.
pub fn is_periodic<T: Real>(f: &TrigPolynomial<T>, base: &Frequency) -> Result<bool> {
    if !(std::sync::Arc::ptr_eq(base.basis(), f.basis()) || **base.basis() == **f.basis()) {
        return Err(Error::BasisMismatch);
    }
    if base.is_zero() {
        return Err(Error::Invalid("period base frequency must be nonzero".into()));
    }
    Ok(f
        .bohr_spectrum()
        .iter()
        .all(|lam| lam.integer_multiple_of(base).is_some()))
}
