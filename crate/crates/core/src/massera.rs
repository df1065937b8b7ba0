//! Solvability checks and constructions for the forced equation
//! ẋ(t) = A x(t) + Σ_k B_k x(t + η_k) + f(t) with trigonometric-polynomial
//! forcing: harmonic-balance solving, hypothesis reports for the
//! almost-periodic existence theorems, spectral decomposition and inclusion
//! checks, non-existence certificates, and solution residuals.

use num_complex::Complex;

use crate::apfun::{
    chordal_distance, integer_basis_over, is_periodic, Frequency, TrigPolynomial,
};
use crate::chroots::{sigma_i, DelaySystem, SINGULAR_CONDITION};
use crate::error::{Error, Result};
use crate::num::{cplx, real, to_f64, vec_norm, CVec, Real};

/// Tolerance for matching a forcing frequency against an axis root; the
/// default axis tolerance of the condition report.
pub const MATCH_TOL: f64 = 1e-6;
/// Chordal distance on the unit circle below which two lifted spectra are
/// reported as not separated.
pub const SEPARATION_TOL: f64 = 1e-9;
/// Near-miss factor: a forcing frequency within MATCH_TOL * NEAR_MISS_FACTOR
/// of an axis root (but not resonant) produces a conditioning warning.
pub const NEAR_MISS_FACTOR: f64 = 10.0;

/// The triple (A, ℬ, f): a delay system with trigonometric-polynomial
/// forcing of matching dimension.
#[derive(Clone, Debug)]
pub struct ForcedProblem<T: Real> {
    sys: DelaySystem<T>,
    f: TrigPolynomial<T>,
}

impl<T: Real> ForcedProblem<T> {
    pub fn new(sys: DelaySystem<T>, f: TrigPolynomial<T>) -> Result<Self> {
        if f.dim() != sys.dim() {
            return Err(Error::DimMismatch { expected: sys.dim(), got: f.dim() });
        }
        Ok(ForcedProblem { sys, f })
    }

    pub fn sys(&self) -> &DelaySystem<T> {
        &self.sys
    }

    pub fn forcing(&self) -> &TrigPolynomial<T> {
        &self.f
    }
}

/// Hypotheses of the compactness-based existence theorem: Σ_i \ σ_b(f)
/// finite in the window, σ_b(f) countable, and no c₀ subspace obstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct ThmCompactness {
    pub sigma_i_minus_spf_finite_in_window: bool,
    pub spf_countable: bool,
    pub c0_free: bool,
    pub verdict: bool,
}

/// Circle-separation hypothesis: minimum chordal distance between the
/// lifted sets e^{i(Σ_i \ σ_b(f))} and e^{iσ_b(f)}.
#[derive(Clone, Debug, PartialEq)]
pub struct ThmSeparation {
    pub circle_distance: f64,
    pub separated: bool,
}

/// Circle variant with the countability hypothesis.
#[derive(Clone, Debug, PartialEq)]
pub struct ThmCircleCountable {
    pub circle_spf_countable: bool,
    pub verdict: bool,
}

/// Windowed report on the existence-theorem hypotheses and on direct
/// solvability of the harmonic-balance system.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub xi_max: f64,
    pub axis_tol: f64,
    /// Σ_i ∩ [−xi_max, xi_max], sorted.
    pub sigma_i_window: Vec<f64>,
    /// Forcing frequencies within `axis_tol` of an axis root.
    pub resonances: Vec<Frequency>,
    pub thm12: ThmCompactness,
    pub thm20: ThmSeparation,
    pub thm21: ThmCircleCountable,
    /// Δ(iλ_j) invertible and well conditioned for every forcing frequency.
    pub solvable_directly: bool,
    pub notes: Vec<String>,
}

/// A constructed almost periodic solution with its verification data.
#[derive(Clone, Debug)]
pub struct SolutionBundle<T: Real> {
    pub u: TrigPolynomial<T>,
    /// max over the default grid of ‖u̇ − Au − ℬu − f‖.
    pub classical_residual: f64,
    /// max over the default grid of the integrated-equation defect.
    pub mild_residual: f64,
    /// σ_b(u) = σ_b(f) exactly.
    pub spectral_check: bool,
    /// Condition measure of Δ(iλ_j) per forcing frequency, canonical order.
    pub per_frequency_conditioning: Vec<(Frequency, f64)>,
}

/// Outcome of a non-existence query.
#[derive(Clone, Debug, PartialEq)]
pub enum CertificateOutcome {
    Certified(Certificate),
    Refused { reason: String },
}

/// Evidence that no k-quasi-periodic (or τ-periodic) strong mild solution
/// exists: the forcing module already has higher rank (or leaves the
/// period lattice).
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub qp_order: usize,
    pub k: usize,
    pub integer_basis: Vec<Frequency>,
    pub statement: String,
}

/// Solve (iλ_j − 𝒜 − ℬ) a(λ_j, u) = a(λ_j, f) per forcing frequency:
/// u = Σ_j Δ(iλ_j)⁻¹ c_j e^{iλ_j t}.
pub fn harmonic_solve<T: Real>(p: &ForcedProblem<T>) -> Result<SolutionBundle<T>> {
    let mut terms: Vec<(Frequency, CVec<T>)> = Vec::with_capacity(p.f.terms().len());
    let mut conditioning = Vec::with_capacity(p.f.terms().len());
    for (freq, coeff) in p.f.terms() {
        let lambda = freq.value();
        let z = cplx::<T>(0.0, lambda);
        let cond = p.sys.char_condition(z);
        if !cond.is_finite() || cond > SINGULAR_CONDITION {
            return Err(Error::Resonance { lambda });
        }
        let inv = p
            .sys
            .char_matrix(z)
            .try_inverse()
            .ok_or(Error::Resonance { lambda })?;
        terms.push((freq.clone(), &inv * coeff));
        conditioning.push((freq.clone(), cond));
    }
    let u = TrigPolynomial::new(p.f.basis(), p.sys.dim(), terms)?;
    let grid = default_grid(&p.f);
    let (classical, mild) = residuals(&u, p, &grid)?;
    let spectral_check = u.bohr_spectrum() == p.f.bohr_spectrum();
    Ok(SolutionBundle {
        u,
        classical_residual: classical,
        mild_residual: mild,
        spectral_check,
        per_frequency_conditioning: conditioning,
    })
}

/// Default residual grid: 201 equispaced points on [0, 4π/λ_min] where
/// λ_min is the smallest nonzero |frequency|, or [0, 10] without one.
pub fn default_grid<T: Real>(f: &TrigPolynomial<T>) -> Vec<f64> {
    let lambda_min = f
        .terms()
        .iter()
        .map(|(freq, _)| freq.value().abs())
        .filter(|v| *v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let span = if lambda_min.is_finite() {
        4.0 * std::f64::consts::PI / lambda_min
    } else {
        10.0
    };
    (0..201).map(|i| span * i as f64 / 200.0).collect()
}

/// ℬu + f as a trigonometric polynomial: Σ_k B_k u(· + η_k) + f.
fn delayed_part_plus_forcing<T: Real>(
    u: &TrigPolynomial<T>,
    p: &ForcedProblem<T>,
) -> Result<TrigPolynomial<T>> {
    let one = Complex::new(T::one(), T::zero());
    let mut acc = p.f.clone();
    for term in p.sys.terms() {
        let shifted = u.translate(real::<T>(term.eta));
        let mapped: Vec<(Frequency, CVec<T>)> = shifted
            .terms()
            .iter()
            .map(|(freq, c)| (freq.clone(), &term.matrix * c))
            .collect();
        let mapped = TrigPolynomial::new(u.basis(), u.dim(), mapped)?;
        acc = TrigPolynomial::combine(&acc, &mapped, one, one)?;
    }
    Ok(acc)
}

/// (classical, mild) residual maxima of a candidate solution over the grid.
///
/// Classical: ‖u̇(t) − A u(t) − Σ_k B_k u(t+η_k) − f(t)‖ with the exact
/// derivative. Mild: ‖u(t) − u(0) − A ∫₀ᵗ u − ∫₀ᵗ (ℬu + f)‖ with exact
/// antiderivatives of the trigonometric terms.
pub fn residuals<T: Real>(
    u: &TrigPolynomial<T>,
    p: &ForcedProblem<T>,
    grid: &[f64],
) -> Result<(f64, f64)> {
    if u.dim() != p.sys.dim() {
        return Err(Error::DimMismatch { expected: p.sys.dim(), got: u.dim() });
    }
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Invalid("residual grid must be non-empty and finite".into()));
    }
    let du = u.derivative();
    let rhs = delayed_part_plus_forcing(u, p)?;
    let u0 = u.eval(T::zero());
    let mut classical = 0.0f64;
    let mut mild = 0.0f64;
    for &t in grid {
        let t = real::<T>(t);
        let mut r: CVec<T> = du.eval(t);
        r -= p.sys.a() * u.eval(t);
        for term in p.sys.terms() {
            r -= &term.matrix * u.eval(t + real::<T>(term.eta));
        }
        r -= p.f.eval(t);
        classical = classical.max(to_f64(vec_norm(&r)));

        let mut m: CVec<T> = u.eval(t) - &u0;
        m -= p.sys.a() * u.integral_from_zero(t);
        m -= rhs.integral_from_zero(t);
        mild = mild.max(to_f64(vec_norm(&m)));
    }
    Ok((classical, mild))
}

/// Hypothesis report within the window [−xi_max, xi_max] using the default
/// frequency-matching tolerance.
pub fn check_conditions<T: Real>(p: &ForcedProblem<T>, xi_max: f64) -> Result<ConditionReport> {
    check_conditions_with(p, xi_max, MATCH_TOL)
}

/// Hypothesis report with an explicit axis/matching tolerance.
pub fn check_conditions_with<T: Real>(
    p: &ForcedProblem<T>,
    xi_max: f64,
    axis_tol: f64,
) -> Result<ConditionReport> {
    if !(xi_max > 0.0) {
        return Err(Error::Invalid("xi_max must be positive".into()));
    }
    let window = sigma_i(&p.sys, xi_max, axis_tol)?;
    let mut notes = Vec::new();
    notes.push(
        "countability of the forcing spectrum is automatic: a trigonometric polynomial has \
         finitely many frequencies"
            .to_string(),
    );
    notes.push(
        "the c0-subspace obstruction is vacuous in finite dimension".to_string(),
    );
    notes.push(format!(
        "compactness of the axis set minus the forcing spectrum is decided within the window \
         [-{xi_max}, {xi_max}] only"
    ));
    if !window.near_axis.is_empty() {
        notes.push(format!(
            "{} root(s) in the ambiguous band axis_tol/2 < |Re z| <= axis_tol were not \
             counted as axis points",
            window.near_axis.len()
        ));
    }

    let spf: Vec<f64> = p.f.terms().iter().map(|(freq, _)| freq.value()).collect();
    if let Some(out) = spf.iter().find(|v| v.abs() > xi_max) {
        notes.push(format!(
            "forcing frequency {out} lies outside the window; its resonance status is \
             not covered by this report"
        ));
    }

    let mut resonances = Vec::new();
    for (freq, _) in p.f.terms() {
        let v = freq.value();
        let nearest = window
            .points
            .iter()
            .map(|xi| (xi - v).abs())
            .fold(f64::INFINITY, f64::min);
        if nearest <= axis_tol {
            resonances.push(freq.clone());
        } else if nearest <= axis_tol * NEAR_MISS_FACTOR {
            notes.push(format!(
                "forcing frequency {v} is within {NEAR_MISS_FACTOR}x the matching tolerance \
                 of an axis root; the harmonic solve will be ill conditioned"
            ));
        }
    }

    // the axis points not explained by the forcing spectrum
    let sigma_minus_spf: Vec<f64> = window
        .points
        .iter()
        .copied()
        .filter(|xi| spf.iter().all(|v| (xi - v).abs() > axis_tol))
        .collect();

    let thm12 = ThmCompactness {
        sigma_i_minus_spf_finite_in_window: true,
        spf_countable: true,
        c0_free: true,
        verdict: true,
    };

    let circle_distance = if sigma_minus_spf.is_empty() || spf.is_empty() {
        // one of the lifted sets is empty, so they are trivially disjoint;
        // report the circle diameter
        2.0
    } else {
        let mut d = f64::INFINITY;
        for xi in &sigma_minus_spf {
            for v in &spf {
                d = d.min(chordal_distance(*xi, *v));
            }
        }
        d
    };
    let separated = circle_distance > SEPARATION_TOL;
    let thm20 = ThmSeparation { circle_distance, separated };
    let thm21 = ThmCircleCountable { circle_spf_countable: true, verdict: separated };

    let solvable_directly = p.f.terms().iter().all(|(freq, _)| {
        let cond = p.sys.char_condition(cplx::<T>(0.0, freq.value()));
        cond.is_finite() && cond <= SINGULAR_CONDITION
    }) && resonances.is_empty();

    Ok(ConditionReport {
        xi_max,
        axis_tol,
        sigma_i_window: window.points,
        resonances,
        thm12,
        thm20,
        thm21,
        solvable_directly,
        notes,
    })
}

/// Split u into the terms with frequency in `lambda1` and the rest;
/// u1 + u2 = u exactly.
pub fn decompose_solution<T: Real>(
    u: &TrigPolynomial<T>,
    lambda1: &[Frequency],
) -> Result<(TrigPolynomial<T>, TrigPolynomial<T>)> {
    for l in lambda1 {
        if !(std::sync::Arc::ptr_eq(l.basis(), u.basis()) || **l.basis() == **u.basis()) {
            return Err(Error::BasisMismatch);
        }
    }
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (freq, coeff) in u.terms() {
        if lambda1.iter().any(|l| l == freq) {
            inside.push((freq.clone(), coeff.clone()));
        } else {
            outside.push((freq.clone(), coeff.clone()));
        }
    }
    Ok((
        TrigPolynomial::new(u.basis(), u.dim(), inside)?,
        TrigPolynomial::new(u.basis(), u.dim(), outside)?,
    ))
}

/// Result of the two-sided spectral inclusion test
/// σ_b(f) ⊂ σ_b(u) ⊂ Σ_i(window) ∪ σ_b(f).
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionReport {
    pub pass: bool,
    /// A frequency violating one of the inclusions, if any.
    pub witness: Option<Frequency>,
}

/// Verify both spectral inclusions against the axis set computed in the
/// window, matching axis points with tolerance [`MATCH_TOL`].
pub fn verify_spectral_inclusion<T: Real>(
    u: &TrigPolynomial<T>,
    p: &ForcedProblem<T>,
    xi_max: f64,
) -> Result<InclusionReport> {
    if **u.basis() != **p.f.basis() {
        return Err(Error::BasisMismatch);
    }
    for (freq, _) in u.terms() {
        if freq.value().abs() > xi_max {
            return Err(Error::WindowTooSmall { lambda: freq.value(), xi_max });
        }
    }
    let window = sigma_i(&p.sys, xi_max, MATCH_TOL)?;
    let u_spec = u.bohr_spectrum();
    // lower inclusion: every forcing frequency appears in the solution
    for freq in p.f.bohr_spectrum() {
        if !u_spec.iter().any(|g| *g == freq) {
            return Ok(InclusionReport { pass: false, witness: Some(freq) });
        }
    }
    // upper inclusion: every solution frequency is a forcing frequency or
    // an axis point
    for freq in u_spec {
        let in_forcing = p.f.bohr_spectrum().iter().any(|g| *g == freq);
        let on_axis = window
            .points
            .iter()
            .any(|xi| (xi - freq.value()).abs() <= MATCH_TOL);
        if !in_forcing && !on_axis {
            return Ok(InclusionReport { pass: false, witness: Some(freq) });
        }
    }
    Ok(InclusionReport { pass: true, witness: None })
}

/// Certify that no k-quasi-periodic strong mild solution exists, when the
/// forcing module rank already exceeds k; otherwise refuse.
pub fn nonexistence_certificate<T: Real>(
    p: &ForcedProblem<T>,
    k: usize,
) -> Result<CertificateOutcome> {
    let module = integer_basis_over(p.f.basis(), &p.f.bohr_spectrum())?;
    let l = module.rank();
    if k < l {
        let statement = format!(
            "the forcing spectrum generates a frequency module of rank {l}; the spectrum of \
             any strong mild solution contains the forcing spectrum, so its module rank is at \
             least {l} > {k}, and no {k}-quasi-periodic strong mild solution exists"
        );
        Ok(CertificateOutcome::Certified(Certificate {
            qp_order: l,
            k,
            integer_basis: module.integer_basis().to_vec(),
            statement,
        }))
    } else {
        Ok(CertificateOutcome::Refused {
            reason: format!(
                "the forcing module has rank {l} <= k = {k}; no obstruction at the level of \
                 frequency modules"
            ),
        })
    }
}

/// Certify that no solution with base frequency `base` (period 2π/|base|)
/// exists, when some forcing frequency is not an integer multiple of it.
pub fn periodic_nonexistence_certificate<T: Real>(
    p: &ForcedProblem<T>,
    base: &Frequency,
) -> Result<CertificateOutcome> {
    if is_periodic(&p.f, base)? {
        return Ok(CertificateOutcome::Refused {
            reason: "every forcing frequency is an integer multiple of the base frequency; \
                     no periodicity obstruction"
                .to_string(),
        });
    }
    let module = integer_basis_over(p.f.basis(), &p.f.bohr_spectrum())?;
    Ok(CertificateOutcome::Certified(Certificate {
        qp_order: module.rank(),
        k: 1,
        integer_basis: module.integer_basis().to_vec(),
        statement: format!(
            "some forcing frequency is not an integer multiple of the base frequency {base}; \
             the spectrum of any strong mild solution contains the forcing spectrum, so no \
             solution with that period exists"
        ),
    }))
}

#[cfg(test)]
fn cvec1<T: Real>(re: f64, im: f64) -> CVec<T> {
    nalgebra::DVector::from_element(1, cplx::<T>(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfun::{parse_rational, GeneratorBasis};
    use crate::chroots::DelaySystem;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn unit_basis() -> crate::apfun::BasisRef {
        GeneratorBasis::new(vec![("one", 1.0)]).unwrap()
    }

    /// ẋ = −x + e^{it}
    fn stable_problem() -> ForcedProblem<f64> {
        let basis = unit_basis();
        let sys = DelaySystem::scalar(c(-1.0, 0.0), vec![], 1.0).unwrap();
        let freq = Frequency::from_integers(&basis, &[1]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(freq, c(1.0, 0.0))]).unwrap();
        ForcedProblem::new(sys, f).unwrap()
    }

    /// ẋ(t) = −(π/2) x(t−1) + forcing over the basis (pi).
    fn pi_half_problem(coord: BigRational) -> ForcedProblem<f64> {
        let basis = GeneratorBasis::new(vec![("pi", PI)]).unwrap();
        let sys = DelaySystem::scalar(c(0.0, 0.0), vec![(-1.0, c(-FRAC_PI_2, 0.0))], 2.0).unwrap();
        let freq = Frequency::new(&basis, vec![coord]).unwrap();
        let f = TrigPolynomial::scalar(&basis, vec![(freq, c(1.0, 0.0))]).unwrap();
        ForcedProblem::new(sys, f).unwrap()
    }

    #[test]
    fn solves_stable_scalar_exactly() {
        let p = stable_problem();
        let bundle = harmonic_solve(&p).unwrap();
        // Delta(i) = i + 1, coefficient 1/(1+i) = (1-i)/2
        let coeff = bundle.u.terms()[0].1[0];
        assert!((coeff - c(0.5, -0.5)).norm() < 1e-12, "{coeff}");
        assert!(bundle.classical_residual < 1e-12);
        assert!(bundle.mild_residual < 1e-12);
        assert!(bundle.spectral_check);
        assert_eq!(bundle.per_frequency_conditioning.len(), 1);
        assert!(bundle.per_frequency_conditioning[0].1 < 10.0);
    }

    #[test]
    fn zero_forcing_gives_zero_solution() {
        let basis = unit_basis();
        let sys = DelaySystem::scalar(c(-1.0, 0.0), vec![], 1.0).unwrap();
        let f = TrigPolynomial::zero(&basis, 1);
        let p = ForcedProblem::new(sys, f).unwrap();
        let bundle = harmonic_solve(&p).unwrap();
        assert!(bundle.u.is_zero());
        assert_eq!(bundle.classical_residual, 0.0);
        assert_eq!(bundle.mild_residual, 0.0);
    }

    #[test]
    fn resonant_forcing_rejected() {
        // f = e^{i(pi/2)t} hits the axis root of z + (pi/2)e^{-z}
        let p = pi_half_problem(q(1, 2));
        match harmonic_solve(&p) {
            Err(Error::Resonance { lambda }) => assert!((lambda - FRAC_PI_2).abs() < 1e-12),
            other => panic!("expected resonance, got {other:?}"),
        }
    }

    #[test]
    fn solution_map_is_linear() {
        let p = stable_problem();
        let alpha = c(2.0, -3.0);
        let scaled =
            ForcedProblem::new(p.sys.clone(), p.f.scaled(alpha)).unwrap();
        let u1 = harmonic_solve(&p).unwrap().u;
        let u2 = harmonic_solve(&scaled).unwrap().u;
        let diff = u2.terms()[0].1[0] - u1.terms()[0].1[0] * alpha;
        assert!(diff.norm() < 1e-12 * u2.max_coeff_norm());
    }

    #[test]
    fn translation_covariance_of_coefficients() {
        let p = stable_problem();
        let h = 0.7;
        let shifted = ForcedProblem::new(p.sys.clone(), p.f.translate(h)).unwrap();
        let u = harmonic_solve(&p).unwrap().u;
        let uh = harmonic_solve(&shifted).unwrap().u;
        for ((freq, a), (_, b)) in u.terms().iter().zip(uh.terms()) {
            let phase = c(0.0, freq.value() * h).exp();
            assert!((b[0] - a[0] * phase).norm() < 1e-13);
        }
    }

    #[test]
    fn residual_detects_wrong_coefficient() {
        let p = stable_problem();
        let freq = Frequency::from_integers(p.f.basis(), &[1]).unwrap();
        let wrong = TrigPolynomial::new(
            p.f.basis(),
            1,
            vec![(freq, cvec1::<f64>(1.0, 0.0))],
        )
        .unwrap();
        let grid = default_grid(&p.f);
        let (classical, mild) = residuals(&wrong, &p, &grid).unwrap();
        // du - Au - f = i e^{it} + e^{it} - e^{it}, norm 1 everywhere
        assert!((classical - 1.0).abs() < 1e-12, "{classical}");
        assert!(mild > 0.1);
    }

    #[test]
    fn residuals_validate_inputs() {
        let p = stable_problem();
        let two_dim = TrigPolynomial::zero(p.f.basis(), 2);
        assert!(matches!(
            residuals(&two_dim, &p, &[0.0]),
            Err(Error::DimMismatch { .. })
        ));
        let u = harmonic_solve(&p).unwrap().u;
        assert!(residuals(&u, &p, &[]).is_err());
    }

    #[test]
    fn conditions_on_stable_system() {
        let p = stable_problem();
        let report = check_conditions(&p, 10.0).unwrap();
        assert!(report.sigma_i_window.is_empty());
        assert!(report.resonances.is_empty());
        assert!(report.thm12.verdict);
        assert!(report.thm20.separated);
        assert!(report.thm21.verdict);
        assert!(report.solvable_directly);
    }

    #[test]
    fn conditions_separated_case() {
        // axis roots +-pi/2, forcing at pi (coord 1): e^{i pi} far from +-i
        let p = pi_half_problem(q(1, 1));
        let report = check_conditions(&p, 5.0).unwrap();
        assert_eq!(report.sigma_i_window.len(), 2);
        assert!(report.thm20.separated);
        assert!(report.solvable_directly);
    }

    #[test]
    fn conditions_circle_closure_subtlety() {
        // forcing at pi/2 + 2pi lifts to the same circle point as the axis
        // root pi/2, yet Delta(i(pi/2 + 2pi)) = 2*pi*i is regular
        let p = pi_half_problem(q(5, 2));
        let report = check_conditions(&p, 5.0).unwrap();
        assert!(!report.thm20.separated, "{}", report.thm20.circle_distance);
        assert!(report.thm20.circle_distance < 1e-9);
        assert!(report.solvable_directly);
        assert!(report.resonances.is_empty());
        let bundle = harmonic_solve(&p).unwrap();
        // coefficient 1/(2*pi*i)
        let coeff = bundle.u.terms()[0].1[0];
        assert!((coeff - c(0.0, -1.0 / (2.0 * PI))).norm() < 1e-10);
    }

    #[test]
    fn conditions_monotone_in_window() {
        let p = pi_half_problem(q(1, 1));
        let small = check_conditions(&p, 2.0).unwrap();
        let large = check_conditions(&p, 8.0).unwrap();
        for xi in &small.sigma_i_window {
            assert!(large
                .sigma_i_window
                .iter()
                .any(|eta| (eta - xi).abs() < 1e-7));
        }
    }

    #[test]
    fn decompose_partitions_exactly() {
        let basis = unit_basis();
        let f1 = Frequency::from_integers(&basis, &[1]).unwrap();
        let f3 = Frequency::from_integers(&basis, &[3]).unwrap();
        let u = TrigPolynomial::scalar(
            &basis,
            vec![(f1.clone(), c(1.0, 0.0)), (f3.clone(), c(1.0, 0.0))],
        )
        .unwrap();
        let (u1, u2) = decompose_solution(&u, &[f3.clone()]).unwrap();
        assert_eq!(u1.bohr_spectrum(), vec![f3.clone()]);
        assert_eq!(u2.bohr_spectrum(), vec![f1]);
        let sum = TrigPolynomial::combine(&u1, &u2, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(sum, u);

        let (e1, e2) = decompose_solution(&u, &[]).unwrap();
        assert!(e1.is_zero());
        assert_eq!(e2, u);
        let (a1, a2) = decompose_solution(&u, &u.bohr_spectrum()).unwrap();
        assert_eq!(a1, u);
        assert!(a2.is_zero());
        // idempotence: splitting the remainder again changes nothing
        let (r1, r2) = decompose_solution(&u2, &[f3]).unwrap();
        assert!(r1.is_zero());
        assert_eq!(r2, u2);
    }

    #[test]
    fn decompose_rejects_foreign_basis() {
        let basis = unit_basis();
        let other = GeneratorBasis::new(vec![("pi", PI)]).unwrap();
        let u = TrigPolynomial::<f64>::zero(&basis, 1);
        let foreign = Frequency::from_integers(&other, &[1]).unwrap();
        assert_eq!(
            decompose_solution(&u, &[foreign]).unwrap_err(),
            Error::BasisMismatch
        );
    }

    #[test]
    fn spectral_inclusion_passes_and_fails() {
        let p = stable_problem();
        let u = harmonic_solve(&p).unwrap().u;
        let ok = verify_spectral_inclusion(&u, &p, 10.0).unwrap();
        assert!(ok.pass);
        assert!(ok.witness.is_none());

        // extra term at frequency 7, not an axis point, not in the forcing
        let f7 = Frequency::from_integers(p.f.basis(), &[7]).unwrap();
        let extra = TrigPolynomial::scalar(p.f.basis(), vec![(f7.clone(), c(1.0, 0.0))]).unwrap();
        let bad = TrigPolynomial::combine(&u, &extra, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let fail = verify_spectral_inclusion(&bad, &p, 10.0).unwrap();
        assert!(!fail.pass);
        assert_eq!(fail.witness, Some(f7));

        assert!(matches!(
            verify_spectral_inclusion(&bad, &p, 5.0),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn spectral_inclusion_allows_axis_terms() {
        // solution with an extra axis-frequency term still satisfies the
        // upper inclusion
        let p = pi_half_problem(q(1, 1));
        let u = harmonic_solve(&p).unwrap().u;
        let axis = Frequency::new(p.f.basis(), vec![q(1, 2)]).unwrap();
        let extra = TrigPolynomial::scalar(p.f.basis(), vec![(axis, c(0.3, 0.0))]).unwrap();
        let augmented = TrigPolynomial::combine(&u, &extra, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let report = verify_spectral_inclusion(&augmented, &p, 5.0).unwrap();
        assert!(report.pass, "{:?}", report.witness);
    }

    #[test]
    fn certificate_for_quasi_periodic_order() {
        let basis = GeneratorBasis::new(vec![("one", 1.0), ("sqrt2", 2f64.sqrt())]).unwrap();
        let f1 = Frequency::from_integers(&basis, &[1, 0]).unwrap();
        let f2 = Frequency::from_integers(&basis, &[0, 1]).unwrap();
        let f = TrigPolynomial::scalar(
            &basis,
            vec![(f1, c(1.0, 0.0)), (f2, c(1.0, 0.0))],
        )
        .unwrap();
        let sys = DelaySystem::scalar(c(-1.0, 0.0), vec![], 1.0).unwrap();
        let p = ForcedProblem::new(sys, f).unwrap();

        match nonexistence_certificate(&p, 1).unwrap() {
            CertificateOutcome::Certified(cert) => {
                assert_eq!(cert.qp_order, 2);
                assert_eq!(cert.integer_basis.len(), 2);
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        assert!(matches!(
            nonexistence_certificate(&p, 2).unwrap(),
            CertificateOutcome::Refused { .. }
        ));
    }

    #[test]
    fn periodic_certificate_decided_exactly() {
        let p = stable_problem();
        let base = Frequency::from_integers(p.f.basis(), &[1]).unwrap();
        // f = e^{it} is 2*pi periodic: refusal
        assert!(matches!(
            periodic_nonexistence_certificate(&p, &base).unwrap(),
            CertificateOutcome::Refused { .. }
        ));
        // forcing at frequency 1/2 is not an integer multiple of 1
        let half = Frequency::new(p.f.basis(), vec![parse_rational("1/2").unwrap()]).unwrap();
        let f = TrigPolynomial::scalar(p.f.basis(), vec![(half, c(1.0, 0.0))]).unwrap();
        let p2 = ForcedProblem::new(p.sys.clone(), f).unwrap();
        assert!(matches!(
            periodic_nonexistence_certificate(&p2, &base).unwrap(),
            CertificateOutcome::Certified(_)
        ));
    }
}
