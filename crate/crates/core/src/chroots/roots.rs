//! Root localization by recursive rectangle subdivision plus Newton
//! refinement on det Δ.

use num_complex::Complex;

use crate::chroots::contour::{boundary_det_scale, count_roots, Region};
use crate::chroots::system::DelaySystem;
use crate::error::{Error, Result};
use crate::num::{cplx, to_f64, Real};

/// Residual acceptance: |det Δ(z)| ≤ RESIDUAL_REL × max boundary |det|.
pub const RESIDUAL_REL: f64 = 1e-8;
/// Jitter retries when a root sits on a region boundary.
pub const JITTER_ATTEMPTS: usize = 3;
pub const JITTER_REL: f64 = 1e-4;
const NEWTON_MAX_ITER: usize = 100;
/// Rectangles smaller than this are not split further; the enclosed count
/// becomes the multiplicity of the single refined root.
const MIN_BOX_DIAMETER: f64 = 1e-6;
/// Boxes are subdivided below this diameter before Newton starts, so the
/// box center is a safe starting point.
const NEWTON_BOX_DIAMETER: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub det_residual: f64,
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub region: Region,
    pub total_count: usize,
}

fn split(region: &Region, ratio: f64) -> (Region, Region) {
    if region.width() >= region.height() {
        let mid = region.re_min + region.width() * ratio;
        (
            Region { re_max: mid, ..*region },
            Region { re_min: mid, ..*region },
        )
    } else {
        let mid = region.im_min + region.height() * ratio;
        (
            Region { im_max: mid, ..*region },
            Region { im_min: mid, ..*region },
        )
    }
}

/// Isolate roots into boxes holding exactly the returned count.
fn isolate<T: Real>(
    sys: &DelaySystem<T>,
    region: Region,
    count: usize,
    out: &mut Vec<(Region, usize)>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if (count == 1 && region.diameter() <= NEWTON_BOX_DIAMETER)
        || region.diameter() <= MIN_BOX_DIAMETER
    {
        out.push((region, count));
        return Ok(());
    }
    // interior split lines can hit roots too; vary the ratio instead of
    // jittering the whole region
    let mut last = Error::BoundaryRoot { attempts: 0 };
    for ratio in [0.5, 0.53, 0.47, 0.61, 0.39] {
        let (lo, hi) = split(&region, ratio);
        let attempt = (|| -> Result<(usize, usize)> {
            let c_lo = count_roots(sys, &lo)?;
            let c_hi = count_roots(sys, &hi)?;
            Ok((c_lo, c_hi))
        })();
        match attempt {
            Ok((c_lo, c_hi)) if c_lo + c_hi == count => {
                isolate(sys, lo, c_lo, out)?;
                isolate(sys, hi, c_hi, out)?;
                return Ok(());
            }
            Ok(_) => {
                // a root slipped between the halves; try another split line
                last = Error::BoundaryRoot { attempts: 0 };
            }
            Err(e @ Error::BoundaryRoot { .. }) | Err(e @ Error::SingularAtPoint { .. }) => {
                last = e;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Newton on det using z ← z − m / (d/dz log det Δ), exact for roots of
/// multiplicity m.
fn refine<T: Real>(
    sys: &DelaySystem<T>,
    box_region: &Region,
    multiplicity: usize,
    tol: f64,
    det_scale: f64,
) -> Result<(f64, f64, f64)> {
    let (mut zr, mut zi) = box_region.center();
    let m = multiplicity as f64;
    let threshold = RESIDUAL_REL * det_scale.max(f64::MIN_POSITIVE);
    let mut best: Option<(f64, f64, f64)> = None;
    for _ in 0..NEWTON_MAX_ITER {
        let z = cplx::<T>(zr, zi);
        match sys.char_det_logderiv(z) {
            Ok((det, ld)) => {
                let residual = to_f64(det.norm());
                if best.map_or(true, |(_, _, r)| residual < r) {
                    best = Some((zr, zi, residual));
                }
                let ld = Complex::new(to_f64(ld.re), to_f64(ld.im));
                if ld.norm() == 0.0 {
                    break;
                }
                let step = Complex::new(m, 0.0) / ld;
                // keep the iterate from escaping far beyond its box
                let cap = 2.0 * box_region.diameter().max(tol);
                let step = if step.norm() > cap { step * (cap / step.norm()) } else { step };
                zr -= step.re;
                zi -= step.im;
                // converge on step size, not the residual alone; an early
                // loose residual would otherwise stop Newton short of tol
                if step.norm() <= tol * (1.0 + zr.hypot(zi)) {
                    let residual = to_f64(sys.char_det(cplx::<T>(zr, zi)).norm());
                    if residual <= threshold {
                        return Ok((zr, zi, residual));
                    }
                }
            }
            Err(Error::SingularAtPoint { .. }) => {
                // numerically singular means we are on the root
                let residual = to_f64(sys.char_det(cplx::<T>(zr, zi)).norm());
                return Ok((zr, zi, residual));
            }
            Err(e) => return Err(e),
        }
    }
    // accept the best iterate if it met the residual test along the way
    if let Some((zr, zi, residual)) = best {
        if residual <= threshold {
            return Ok((zr, zi, residual));
        }
    }
    Err(Error::NoConvergence { iterations: NEWTON_MAX_ITER })
}

fn find_roots_once<T: Real>(
    sys: &DelaySystem<T>,
    region: &Region,
    tol: f64,
) -> Result<RootSet> {
    let total = count_roots(sys, region)?;
    let mut boxes = Vec::new();
    isolate(sys, *region, total, &mut boxes)?;
    let det_scale = boundary_det_scale(sys, region);
    let mut roots: Vec<Root> = Vec::new();
    for (box_region, mult) in boxes {
        let (re, im, residual) = refine(sys, &box_region, mult, tol, det_scale)?;
        // merge refinements that landed on an already-found root
        if let Some(existing) = roots
            .iter_mut()
            .find(|r| (r.re - re).hypot(r.im - im) <= 10.0 * tol)
        {
            existing.multiplicity += mult;
        } else {
            roots.push(Root { re, im, multiplicity: mult, det_residual: residual });
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(RootSet { roots, region: *region, total_count: total })
}

/// All characteristic roots in the region, with multiplicities and
/// det-residuals. Jitters the region when a root sits on the boundary.
pub fn find_roots<T: Real>(
    sys: &DelaySystem<T>,
    region: &Region,
    tol: f64,
) -> Result<RootSet> {
    if !(tol > 0.0) {
        return Err(Error::Invalid("tol must be positive".into()));
    }
    let mut current = *region;
    for attempt in 0..=JITTER_ATTEMPTS {
        match find_roots_once(sys, &current, tol) {
            Ok(set) => return Ok(set),
            Err(Error::BoundaryRoot { .. }) | Err(Error::SingularAtPoint { .. })
                if attempt < JITTER_ATTEMPTS =>
            {
                // escalate the jitter; the contour quadrature cannot resolve
                // a pole only 1e-4 of an edge length away from the boundary
                current = region.jittered(JITTER_REL * 100f64.powi(attempt as i32), attempt);
            }
            Err(Error::BoundaryRoot { .. }) => {
                return Err(Error::BoundaryRoot { attempts: JITTER_ATTEMPTS })
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::BoundaryRoot { attempts: JITTER_ATTEMPTS })
}

/// Imaginary-axis trace of the characteristic set within a window.
#[derive(Clone, Debug)]
pub struct SigmaIWindow {
    /// Imaginary parts ξ of axis roots (|Re z| ≤ axis_tol/2), sorted.
    pub points: Vec<f64>,
    /// Imaginary parts of roots in the ambiguous band axis_tol/2 < |Re z| ≤ axis_tol.
    pub near_axis: Vec<f64>,
    pub xi_max: f64,
    pub axis_tol: f64,
    /// Half-width of the strip actually searched.
    pub strip_half_width: f64,
}

/// Σ_i ∩ [−xi_max, xi_max]: imaginary parts of characteristic roots on the
/// axis, classified with tolerance `axis_tol`.
///
/// The search strip is wider than the classification tolerance (a contour
/// cannot resolve a pole a hair inside it); roots found off-axis in the
/// strip are simply not reported as Σ_i points. The result is window
/// limited by construction.
pub fn sigma_i<T: Real>(
    sys: &DelaySystem<T>,
    xi_max: f64,
    axis_tol: f64,
) -> Result<SigmaIWindow> {
    if !(xi_max > 0.0) {
        return Err(Error::Invalid("xi_max must be positive".into()));
    }
    if !(axis_tol > 0.0 && axis_tol < sys.delta()) {
        return Err(Error::Invalid(
            "need 0 < axis_tol < delta for an axis search".into(),
        ));
    }
    let half_width = (0.4 * sys.delta())
        .min(0.5)
        .max(axis_tol * 4.0)
        .min(0.9 * sys.delta());
    let region = Region::new(-half_width, half_width, -xi_max, xi_max)?;
    let set = find_roots(sys, &region, (axis_tol * 1e-3).min(1e-9))?;
    let mut points = Vec::new();
    let mut near_axis = Vec::new();
    for root in &set.roots {
        let abs_re = root.re.abs();
        if abs_re <= axis_tol / 2.0 {
            points.push(root.im);
        } else if abs_re <= axis_tol {
            near_axis.push(root.im);
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() <= axis_tol);
    near_axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SigmaIWindow { points, near_axis, xi_max, axis_tol, strip_half_width: half_width })
}
