//! Planar natural extensions: the Lebesgue-preserving skew form, the dual
//! product form, and the complex Hurwitz extension.
//!
//! The skew form acts by `(x, y) -> (T x, det·((cx+d)^2 y - c(cx+d)))` and has
//! Jacobian one. The dual form uses `v = y / (1 - xy)`, which intertwines the
//! two actions and carries Lebesgue measure to `dx dv / (1 + xv)^2`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::{Label, MobiusBranch, PiecewiseSystem, DOMAIN_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub x: f64,
    pub v: f64,
}

impl SkewPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl DualPoint {
    pub const fn new(x: f64, v: f64) -> Self {
        Self { x, v }
    }
}

fn branch_for(system: &PiecewiseSystem, x: f64) -> Result<MobiusBranch> {
    let interval = system.interval();
    if !interval.contains_approx(x, DOMAIN_TOL) {
        return Err(Error::OutOfDomain {
            x,
            domain: interval,
        });
    }
    system.branch_at(interval.clamp(x))
}

/// Applies a given branch to a skew point.
#[inline]
pub fn skew_step_with(branch: &MobiusBranch, p: SkewPoint) -> SkewPoint {
    SkewPoint::new(branch.eval(p.x), branch.fiber_map(p.x, p.y))
}

/// One step of the skew extension, returning the branch label used.
pub fn skew_step(system: &PiecewiseSystem, p: SkewPoint) -> Result<(SkewPoint, Label)> {
    let branch = branch_for(system, p.x)?;
    let x = system.interval().clamp(p.x);
    let next = skew_step_with(&branch, SkewPoint::new(x, p.y));
    Ok((next, branch.label().clone()))
}

/// Applies a given branch to a dual point.
pub fn dual_step_with(branch: &MobiusBranch, p: DualPoint) -> Result<DualPoint> {
    let [a, b, c, d] = branch.matrix();
    let den = a - b * p.v;
    if den == 0.0 {
        return Err(Error::PoleInDual(p.v));
    }
    Ok(DualPoint::new(branch.eval(p.x), (d * p.v - c) / den))
}

/// One step of the dual extension `v -> (dv - c)/(a - bv)`.
pub fn dual_step(system: &PiecewiseSystem, p: DualPoint) -> Result<(DualPoint, Label)> {
    let branch = branch_for(system, p.x)?;
    let x = system.interval().clamp(p.x);
    let next = dual_step_with(&branch, DualPoint::new(x, p.v))?;
    Ok((next, branch.label().clone()))
}

pub fn to_dual(p: SkewPoint) -> Result<DualPoint> {
    let den = 1.0 - p.x * p.y;
    if den == 0.0 {
        return Err(Error::Singular(p.x, p.y));
    }
    Ok(DualPoint::new(p.x, p.y / den))
}

pub fn from_dual(p: DualPoint) -> Result<SkewPoint> {
    let den = 1.0 + p.x * p.v;
    if den == 0.0 {
        return Err(Error::Singular(p.x, p.v));
    }
    Ok(SkewPoint::new(p.x, p.v / den))
}

/// Invariant density of the dual extension.
pub fn dual_density(x: f64, v: f64) -> Result<f64> {
    let den = 1.0 + x * v;
    if den == 0.0 {
        return Err(Error::Singular(x, v));
    }
    Ok(1.0 / (den * den))
}

/// Central-difference Jacobian determinant of the skew step at `p`.
pub fn jacobian_determinant(system: &PiecewiseSystem, p: SkewPoint, h: f64) -> Result<f64> {
    let branch = branch_for(system, p.x)?;
    let domain = branch.domain();
    if !(domain.contains(p.x - h) && domain.contains(p.x + h)) {
        return Err(Error::StraddlesBranchBoundary { x: p.x, h });
    }
    Ok(branch_jacobian(&branch, p, h, h))
}

/// Central-difference Jacobian determinant of one branch of the skew map,
/// extended past its domain by the same formula, with steps `hx` and `hy`.
pub fn branch_jacobian(branch: &MobiusBranch, p: SkewPoint, hx: f64, hy: f64) -> f64 {
    let f = |x: f64, y: f64| skew_step_with(branch, SkewPoint::new(x, y));
    // divide by the representable spacing of the stencil, not by 2h
    let (x_hi, x_lo) = (p.x + hx, p.x - hx);
    let (y_hi, y_lo) = (p.y + hy, p.y - hy);
    let (dx, dy) = (x_hi - x_lo, y_hi - y_lo);
    let (xp, xm) = (f(x_hi, p.y), f(x_lo, p.y));
    let (yp, ym) = (f(p.x, y_hi), f(p.x, y_lo));
    let dxdx = (xp.x - xm.x) / dx;
    let dydx = (xp.y - xm.y) / dx;
    let dxdy = (yp.x - ym.x) / dy;
    let dydy = (yp.y - ym.y) / dy;
    dxdx * dydy - dxdy * dydx
}

/// Gaussian integer partial quotient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPair {
    pub z: Complex64,
    pub w: Complex64,
    pub prev_digit: GaussianInt,
}

impl ComplexPair {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self {
            z,
            w,
            prev_digit: GaussianInt::default(),
        }
    }
}

/// Nearest integer with halves rounded toward zero.
fn round_half_toward_zero(t: f64) -> i64 {
    let r = t.round();
    if (t - t.trunc()).abs() == 0.5 {
        t.trunc() as i64
    } else {
        r as i64
    }
}

/// Nearest Gaussian integer; ties go to the smaller `|Re|`, then smaller `|Im|`.
pub fn nearest_gaussian(z: Complex64) -> GaussianInt {
    GaussianInt {
        re: round_half_toward_zero(z.re),
        im: round_half_toward_zero(z.im),
    }
}

/// `(z, w) -> (1/z - q, 1/(w + q))` with `q` the nearest Gaussian integer to `1/z`.
pub fn hurwitz_step(p: ComplexPair) -> Result<ComplexPair> {
    if p.z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroInput);
    }
    let inv = p.z.inv();
    let q = nearest_gaussian(inv);
    let qc = q.to_complex();
    Ok(ComplexPair {
        z: inv - qc,
        w: (p.w + qc).inv(),
        prev_digit: q,
    })
}
