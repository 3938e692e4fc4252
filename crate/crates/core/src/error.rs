use thiserror::Error;

use crate::interval::Interval;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has zero determinant")]
    ZeroDeterminant,
    #[error("pole of the homography at x = {pole} lies inside the domain {domain}")]
    PoleInDomain { pole: f64, domain: Interval },
    #[error("x = {x} is outside the domain {domain}")]
    OutOfDomain { x: f64, domain: Interval },
    #[error("x' = {x} is outside the branch image {image}")]
    OutOfRange { x: f64, image: Interval },
    #[error("no branch covers x = {0}")]
    NoBranch(f64),
    #[error("branch {label} has (cx+d)^2 = {value} > 1 on its domain")]
    NotExpanding { label: String, value: f64 },
    #[error("shift bound sup |c(cx+d)| is not finite")]
    UnboundedShift,
    #[error("dual step has a pole (a - b v = 0) at v = {0}")]
    PoleInDual(f64),
    #[error("coordinate change is singular at ({0}, {1})")]
    Singular(f64, f64),
    #[error("finite-difference stencil at x = {x} (h = {h}) leaves the branch domain")]
    StraddlesBranchBoundary { x: f64, h: f64 },
    #[error("Hurwitz step is undefined at z = 0")]
    ZeroInput,
    #[error("Hausdorff distance requires nonempty sets")]
    EmptySet,
    #[error("attractor grids differ ({0})")]
    GridMismatch(String),
    #[error("system has a countable branch family without a tail bound")]
    NoTailBound,
    #[error("cell {cell} (x = {x}) receives no branch image")]
    EmptyFiber { cell: usize, x: f64 },
    #[error("no convergence after {iterations} iterations (last distance {distance:e})")]
    NoConvergence { iterations: usize, distance: f64 },
    #[error("{0}")]
    Refused(String),
    #[error("attractor has zero Lebesgue measure")]
    ZeroMass,
    #[error("orbit left the domain at step {step} (x = {x})")]
    OrbitEscapes { step: usize, x: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("bad CSV: {0}")]
    BadCsv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
