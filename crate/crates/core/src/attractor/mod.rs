//! Compact attractors of the skew extension as grids of fiber sets.
//!
//! A grid stores one [`FiberSet`] per cell of the base interval, evaluated at
//! the cell midpoint. [`theta_step`] applies the set map
//! `K -> closure of the union of branch images`, and [`fixed_point`] iterates
//! it from the seed `{0}` until a contraction certificate holds.

mod fiber;

pub use fiber::{hausdorff_distance, one_sided_gap, FiberSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mobius::{MobiusBranch, PiecewiseSystem, DOMAIN_TOL};

/// Smallest accepted `tol / h`.
pub const GRID_FLOOR: f64 = 0.25;
/// Number of trailing distances inspected by the geometric-decay certificate.
pub const DECAY_WINDOW: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct AttractorGrid {
    interval: Interval,
    fibers: Vec<FiberSet>,
}

impl AttractorGrid {
    pub fn new(interval: Interval, fibers: Vec<FiberSet>) -> Result<Self> {
        if fibers.is_empty() {
            return Err(Error::BadParameter("grid needs at least one cell".into()));
        }
        if !(interval.length() > 0.0) {
            return Err(Error::BadParameter(format!(
                "degenerate interval {interval}"
            )));
        }
        Ok(Self { interval, fibers })
    }

    /// Every cell holds a copy of `fiber`.
    pub fn constant(interval: Interval, n_cells: usize, fiber: FiberSet) -> Result<Self> {
        Self::new(interval, vec![fiber; n_cells])
    }

    /// Cell `j` holds `f(x_j)` at its midpoint.
    pub fn from_fn(
        interval: Interval,
        n_cells: usize,
        f: impl Fn(f64) -> FiberSet,
    ) -> Result<Self> {
        let h = interval.length() / n_cells as f64;
        let fibers = (0..n_cells)
            .map(|j| f(interval.lo + (j as f64 + 0.5) * h))
            .collect();
        Self::new(interval, fibers)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n_cells(&self) -> usize {
        self.fibers.len()
    }

    pub fn cell_width(&self) -> f64 {
        self.interval.length() / self.fibers.len() as f64
    }

    /// Merging threshold `h / 10`.
    pub fn merge_eps(&self) -> f64 {
        self.cell_width() / 10.0
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        self.interval.lo + (j as f64 + 0.5) * self.cell_width()
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells()).map(|j| self.midpoint(j))
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: f64) -> usize {
        let t = ((x - self.interval.lo) / self.cell_width()).floor();
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.n_cells() - 1)
        }
    }

    pub fn fibers(&self) -> &[FiberSet] {
        &self.fibers
    }

    pub fn fiber(&self, j: usize) -> &FiberSet {
        &self.fibers[j]
    }

    pub fn fiber_at(&self, x: f64) -> &FiberSet {
        &self.fibers[self.cell_of(x)]
    }

    /// Riemann-sum area `sum_j |K(x_j)|·h`.
    pub fn mass(&self) -> f64 {
        self.fibers.iter().map(FiberSet::total_length).sum::<f64>() * self.cell_width()
    }

    /// Smallest interval containing every fiber.
    pub fn hull(&self) -> Option<Interval> {
        let hulls: Vec<Interval> = self.fibers.iter().filter_map(FiberSet::hull).collect();
        let lo = hulls.iter().map(|i| i.lo).reduce(f64::min)?;
        let hi = hulls.iter().map(|i| i.hi).reduce(f64::max)?;
        Some(Interval::new(lo, hi))
    }

    fn check_same_grid(&self, other: &AttractorGrid) -> Result<()> {
        if self.interval != other.interval || self.n_cells() != other.n_cells() {
            return Err(Error::GridMismatch(format!(
                "{} x {} vs {} x {}",
                self.interval,
                self.n_cells(),
                other.interval,
                other.n_cells()
            )));
        }
        Ok(())
    }
}

/// `max_j d_H(K(x_j), K'(x_j))`.
pub fn sup_distance(k1: &AttractorGrid, k2: &AttractorGrid) -> Result<f64> {
    k1.check_same_grid(k2)?;
    k1.fibers
        .par_iter()
        .zip(k2.fibers.par_iter())
        .map(|(a, b)| hausdorff_distance(a, b))
        .try_reduce(|| 0.0, |p, q| Ok(p.max(q)))
}

/// Least level `N` whose tail bound is at most `eps`; the branch count for
/// finite systems.
pub fn truncation_level(system: &PiecewiseSystem, eps: f64) -> Result<usize> {
    if !system.is_countable() {
        return Ok(system.finite_branches().len());
    }
    if !(eps > 0.0) {
        return Err(Error::BadParameter(format!(
            "truncation tolerance must be positive, got {eps}"
        )));
    }
    let mut hi = 1usize;
    while system.tail_bound(hi)? > eps {
        if hi >= 1 << 40 {
            return Err(Error::NoTailBound);
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if system.tail_bound(mid)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Half-width `B/(1-k)` of a box around zero containing the attractor, for
/// strictly expanding systems.
pub fn bounding_half_width(system: &PiecewiseSystem) -> Result<Option<f64>> {
    let e = system.expansion_bound()?;
    let b = system.shift_bound()?;
    Ok((!e.weakly_expanding).then(|| b / (1.0 - e.k)))
}

/// Image of `fiber` under the fiber map of `branch` over the point `x`.
fn map_fiber(branch: &MobiusBranch, x: f64, fiber: &FiberSet) -> FiberSet {
    let s = branch.denominator(x);
    let det = branch.det();
    let [_, _, c, _] = branch.matrix();
    fiber.map_affine(det * s * s, -det * c * s)
}

/// Branch images over `x_target`, each merged at the grid's `eps`, as one
/// list of pieces. Pieces from the same branch are disjoint.
fn image_pieces(branches: &[MobiusBranch], grid: &AttractorGrid, x_target: f64) -> Vec<Interval> {
    let eps = grid.merge_eps();
    let mut pieces = Vec::new();
    for b in branches {
        if b.image().contains_approx(x_target, DOMAIN_TOL) {
            let x = b.invert(x_target);
            push_image(b, x, grid.fiber_at(x), eps, &mut pieces);
        }
    }
    pieces
}

/// Pushes the image of `fiber` over `x` onto `out`, joining consecutive
/// pieces closer than `eps`. The result merges to the same set as pushing the
/// raw pieces.
fn push_image(branch: &MobiusBranch, x: f64, fiber: &FiberSet, eps: f64, out: &mut Vec<Interval>) {
    let s = branch.denominator(x);
    let det = branch.det();
    let [_, _, c, _] = branch.matrix();
    let (scale, offset) = (det * s * s, -det * c * s);
    let map = |i: &Interval| Interval::spanning(scale * i.lo + offset, scale * i.hi + offset);
    let pieces = fiber.intervals();
    let (Some(first), Some(last)) = (pieces.first(), pieces.last()) else {
        return;
    };
    let hull = map(&Interval::new(first.lo, last.hi));
    if hull.length() <= eps || pieces.len() == 1 {
        out.push(hull);
        return;
    }
    let mut current: Option<Interval> = None;
    let mut push = |i: Interval| match current.as_mut() {
        Some(cur) if i.lo - cur.hi <= eps => cur.hi = cur.hi.max(i.hi),
        _ => {
            if let Some(done) = current.replace(i) {
                out.push(done);
            }
        }
    };
    if scale >= 0.0 {
        pieces.iter().map(map).for_each(&mut push);
    } else {
        pieces.iter().rev().map(map).for_each(&mut push);
    }
    if let Some(done) = current {
        out.push(done);
    }
}

fn theta_cell(branches: &[MobiusBranch], grid: &AttractorGrid, j: usize) -> Result<FiberSet> {
    let x_target = grid.midpoint(j);
    let pieces = image_pieces(branches, grid, x_target);
    if pieces.is_empty() {
        return Err(Error::EmptyFiber {
            cell: j,
            x: x_target,
        });
    }
    Ok(FiberSet::from_intervals(pieces, grid.merge_eps()))
}

/// One application of the set map using a precomputed branch table.
pub fn theta_with(branches: &[MobiusBranch], grid: &AttractorGrid) -> Result<AttractorGrid> {
    let fibers = (0..grid.n_cells())
        .into_par_iter()
        .map(|j| theta_cell(branches, grid, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(AttractorGrid {
        interval: grid.interval,
        fibers,
    })
}

/// One application of the set map with branches up to `level`.
pub fn theta_step(
    system: &PiecewiseSystem,
    grid: &AttractorGrid,
    level: usize,
) -> Result<AttractorGrid> {
    theta_with(&system.branches(level), grid)
}

/// `sup_distance(K, Θ(K))`.
pub fn invariance_residual(
    system: &PiecewiseSystem,
    grid: &AttractorGrid,
    level: usize,
) -> Result<f64> {
    sup_distance(grid, &theta_step(system, grid, level)?)
}

/// Invariance residual of a closed-form fiber map, evaluated exactly at the
/// preimages of each target point rather than through grid lookup.
pub fn reference_residual(
    system: &PiecewiseSystem,
    level: usize,
    points: &[f64],
    fiber: impl Fn(f64) -> FiberSet + Sync,
) -> Result<f64> {
    let branches = system.branches(level);
    points
        .par_iter()
        .map(|&xt| {
            let pieces: Vec<Interval> = branches
                .iter()
                .filter(|b| b.image().contains_approx(xt, DOMAIN_TOL))
                .flat_map(|b| {
                    let x = b.invert(xt);
                    map_fiber(b, x, &fiber(x)).intervals().to_vec()
                })
                .collect();
            let image = FiberSet::from_intervals(pieces, 0.0);
            if image.is_empty() {
                return Err(Error::NoBranch(xt));
            }
            hausdorff_distance(&fiber(xt), &image)
        })
        .try_reduce(|| 0.0, |p, q| Ok(p.max(q)))
}

/// Area covered more than once by the branch images: `sum_j ∫ (count - 1)_+ dy · h`.
pub fn image_overlap(system: &PiecewiseSystem, grid: &AttractorGrid, level: usize) -> Result<f64> {
    let branches = system.branches(level);
    let total: f64 = (0..grid.n_cells())
        .into_par_iter()
        .map(|j| excess_coverage(&image_pieces(&branches, grid, grid.midpoint(j))))
        .sum();
    Ok(total * grid.cell_width())
}

fn excess_coverage(pieces: &[Interval]) -> f64 {
    let mut events: Vec<(f64, i32)> = pieces
        .iter()
        .flat_map(|i| [(i.lo, 1), (i.hi, -1)])
        .collect();
    events.sort_by(|p, q| p.0.total_cmp(&q.0).then(q.1.cmp(&p.1)));
    let mut depth = 0;
    let mut last = f64::NEG_INFINITY;
    let mut excess = 0.0;
    for (y, delta) in events {
        if depth > 1 {
            excess += (depth - 1) as f64 * (y - last);
        }
        depth += delta;
        last = y;
    }
    excess
}

/// Area of `K` not reached by any branch image: `sum_j |K(x_j) \ ∪ images|·h`.
pub fn surjectivity_defect(
    system: &PiecewiseSystem,
    grid: &AttractorGrid,
    level: usize,
) -> Result<f64> {
    let branches = system.branches(level);
    let total: f64 = (0..grid.n_cells())
        .into_par_iter()
        .map(|j| {
            let fiber = grid.fiber(j);
            let pieces = image_pieces(&branches, grid, grid.midpoint(j));
            let union = FiberSet::from_intervals(pieces, grid.merge_eps());
            (fiber.total_length() - fiber.intersection_length(&union)).max(0.0)
        })
        .sum();
    Ok(total * grid.cell_width())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub iterations: usize,
    pub final_distance: f64,
    pub k: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

/// Iterates the set map from the seed `{0}` to its fixed point.
pub fn fixed_point(
    system: &PiecewiseSystem,
    n_cells: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(AttractorGrid, FixedPointReport)> {
    let seed = AttractorGrid::constant(system.interval(), n_cells, FiberSet::point(0.0))?;
    fixed_point_with_seed(system, seed, tol, max_iter)
}

/// Iterates the set map from `seed`.
///
/// Strictly expanding systems stop once `d(K_n, K_{n+1}) <= tol·(1-k)`.
/// Weakly expanding systems need the last [`DECAY_WINDOW`] distances to
/// decay geometrically with ratio `ρ < 1` and a tail estimate
/// `d_n·ρ/(1-ρ) <= tol`. In both cases the area of the grid must also have
/// settled to relative precision `tol`.
pub fn fixed_point_with_seed(
    system: &PiecewiseSystem,
    seed: AttractorGrid,
    tol: f64,
    max_iter: usize,
) -> Result<(AttractorGrid, FixedPointReport)> {
    let indifferent = system.indifferent_fixed_points();
    if !indifferent.is_empty() {
        return Err(Error::Refused(format!(
            "no compact invariant set (indifferent fixed point at {}); the invariant measure of {} is infinite",
            indifferent.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
            system.name()
        )));
    }
    let h = seed.cell_width();
    if !(tol >= GRID_FLOOR * h) {
        return Err(Error::BadParameter(format!(
            "tol = {tol} is below the grid floor h/4 = {}",
            GRID_FLOOR * h
        )));
    }
    let expansion = system.expansion_bound()?;
    system.shift_bound()?;
    let level = truncation_level(system, tol / 2.0)?;
    let branches = system.branches(level);

    let mut grid = seed;
    let mut history: Vec<f64> = Vec::new();
    let mut masses = vec![grid.mass()];
    for iteration in 1..=max_iter {
        let next = theta_with(&branches, &grid)?;
        let d = sup_distance(&grid, &next)?;
        grid = next;
        history.push(d);
        masses.push(grid.mass());
        let hausdorff_done = if expansion.weakly_expanding {
            decay_certified(&history, tol)
        } else {
            d <= tol * (1.0 - expansion.k)
        };
        if hausdorff_done && mass_settled(&masses, tol) {
            return Ok((
                grid,
                FixedPointReport {
                    iterations: iteration,
                    final_distance: d,
                    k: expansion.k,
                    n: level,
                },
            ));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        distance: history.last().copied().unwrap_or(f64::NAN),
    })
}

/// Relative mass change at most `tol` over the last two steps. Seeds made of
/// points converge in the Hausdorff metric before the gaps between the
/// points close, so the area is tracked separately.
fn mass_settled(masses: &[f64], tol: f64) -> bool {
    masses.len() >= 3
        && masses
            .windows(2)
            .rev()
            .take(2)
            .all(|w| (w[1] - w[0]).abs() <= tol * w[1].abs())
}

fn decay_certified(history: &[f64], tol: f64) -> bool {
    let Some(&last) = history.last() else {
        return false;
    };
    if last == 0.0 {
        return true;
    }
    if history.len() < DECAY_WINDOW {
        return false;
    }
    let window = &history[history.len() - DECAY_WINDOW..];
    let rho = window
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 {
                w[1] / w[0]
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    rho < 1.0 && last * rho / (1.0 - rho) <= tol
}
