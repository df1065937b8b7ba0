//! Argument-principle counting on rectangles.
//!
//! Gauss-Legendre quadrature per edge, node count doubled until the winding
//! integral is within 0.1 of an integer; the integrality defect doubles as
//! the error estimator.

use num_complex::Complex;

use crate::chroots::system::DelaySystem;
use crate::error::{Error, Result};
use crate::num::{cplx, gauss_legendre, to_f64, Real};

/// Rectangle [re_min, re_max] × [im_min, im_max] in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max)
            || ![re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite())
        {
            return Err(Error::Invalid(format!(
                "degenerate region [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Region { re_min, re_max, im_min, im_max })
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        re >= self.re_min && re <= self.re_max && im >= self.im_min && im <= self.im_max
    }

    /// Corners counterclockwise starting at (re_min, im_min).
    fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.re_min, self.im_min),
            (self.re_max, self.im_min),
            (self.re_max, self.im_max),
            (self.re_min, self.im_max),
        ]
    }

    pub fn jittered(&self, rel: f64, attempt: usize) -> Region {
        // grow asymmetrically so no former boundary line survives
        let w = self.width();
        let h = self.height();
        let k = (attempt + 1) as f64;
        Region {
            re_min: self.re_min - rel * w * k,
            re_max: self.re_max + rel * w * k * 1.37,
            im_min: self.im_min - rel * h * k * 1.11,
            im_max: self.im_max + rel * h * k * 0.83,
        }
    }
}

pub const BASE_NODES_PER_EDGE: usize = 32;
pub const MAX_NODES_PER_EDGE: usize = 512;
/// Acceptance threshold for the integrality test of the winding integral.
pub const INTEGRALITY_TOL: f64 = 0.1;

/// (1/2πi) ∮ d/dz log det Δ(z) dz over the rectangle boundary, at a fixed
/// node count. Errors if the log-derivative blows up on the contour.
fn winding_integral<T: Real>(
    sys: &DelaySystem<T>,
    region: &Region,
    nodes_per_edge: usize,
) -> Result<f64> {
    let (xs, ws) = gauss_legendre(nodes_per_edge);
    let corners = region.corners();
    let mut acc = Complex::new(0.0f64, 0.0f64);
    for e in 0..4 {
        let (ar, ai) = corners[e];
        let (br, bi) = corners[(e + 1) % 4];
        let dz = Complex::new((br - ar) / 2.0, (bi - ai) / 2.0);
        for (x, w) in xs.iter().zip(&ws) {
            let s = (x + 1.0) / 2.0; // map [-1,1] -> [0,1]
            let zr = ar + (br - ar) * s;
            let zi = ai + (bi - ai) * s;
            let (_, ld) = sys.char_det_logderiv(cplx::<T>(zr, zi))?;
            let ld = Complex::new(to_f64(ld.re), to_f64(ld.im));
            acc += ld * dz * *w;
        }
    }
    // divide by 2πi
    let count = acc / Complex::new(0.0, 2.0 * std::f64::consts::PI);
    Ok(count.re)
}

/// Number of characteristic roots (with multiplicity) inside the region.
///
/// Fails with `BoundaryRoot` when the integral refuses to settle on an
/// integer after node doubling, which indicates a root on or next to the
/// boundary; callers jitter the region and retry.
pub fn count_roots<T: Real>(sys: &DelaySystem<T>, region: &Region) -> Result<usize> {
    let mut nodes = BASE_NODES_PER_EDGE;
    let mut last_err = Error::BoundaryRoot { attempts: 0 };
    while nodes <= MAX_NODES_PER_EDGE {
        match winding_integral(sys, region, nodes) {
            Ok(value) => {
                let rounded = value.round();
                if (value - rounded).abs() < INTEGRALITY_TOL && rounded >= -0.5 {
                    // confirm stability under one doubling unless at cap
                    if nodes >= MAX_NODES_PER_EDGE {
                        return Ok(rounded.max(0.0) as usize);
                    }
                    match winding_integral(sys, region, nodes * 2) {
                        Ok(check) if (check - rounded).abs() < INTEGRALITY_TOL => {
                            return Ok(rounded.max(0.0) as usize);
                        }
                        Ok(_) => {}
                        Err(e @ Error::SingularAtPoint { .. }) => last_err = e,
                        Err(e) => return Err(e),
                    }
                }
            }
            Err(e @ Error::SingularAtPoint { .. }) => {
                last_err = e;
            }
            Err(e) => return Err(e),
        }
        nodes *= 2;
    }
    match last_err {
        Error::SingularAtPoint { .. } => Err(Error::BoundaryRoot { attempts: 0 }),
        _ => Err(Error::BoundaryRoot { attempts: 0 }),
    }
}

/// Max |det Δ| over the region boundary; the residual scale for root
/// acceptance.
pub fn boundary_det_scale<T: Real>(sys: &DelaySystem<T>, region: &Region) -> f64 {
    let (xs, _) = gauss_legendre(64);
    let corners = region.corners();
    let mut scale = 0.0f64;
    for e in 0..4 {
        let (ar, ai) = corners[e];
        let (br, bi) = corners[(e + 1) % 4];
        for x in &xs {
            let s = (x + 1.0) / 2.0;
            let zr = ar + (br - ar) * s;
            let zi = ai + (bi - ai) * s;
            let det = sys.char_det(cplx::<T>(zr, zi));
            scale = scale.max(to_f64(det.norm()));
        }
    }
    scale
}
