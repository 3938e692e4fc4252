use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Finite union of closed intervals, kept sorted and pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiberSet {
    intervals: Vec<Interval>,
}

impl FiberSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(y: f64) -> Self {
        Self::interval(y, y)
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self {
            intervals: vec![Interval::spanning(lo, hi)],
        }
    }

    /// Sorts the pieces and merges any two separated by at most `eps`.
    pub fn from_intervals(mut pieces: Vec<Interval>, eps: f64) -> Self {
        pieces.sort_by(|p, q| p.lo.total_cmp(&q.lo));
        Self {
            intervals: merge_sorted(pieces, eps),
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(
            self.intervals.first()?.lo,
            self.intervals.last()?.hi,
        ))
    }

    pub fn contains(&self, y: f64) -> bool {
        self.distance_to(y) == 0.0
    }

    /// `A_eps = { y : d(y, A) <= eps }`.
    pub fn fatten(&self, eps: f64) -> Self {
        let grown = self
            .intervals
            .iter()
            .map(|i| Interval::new(i.lo - eps, i.hi + eps))
            .collect();
        Self {
            intervals: merge_sorted(grown, 0.0),
        }
    }

    pub fn union(&self, other: &FiberSet, eps: f64) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all, eps)
    }

    /// Distance from `y` to the set; infinite when the set is empty.
    pub fn distance_to(&self, y: f64) -> f64 {
        let idx = self.intervals.partition_point(|i| i.hi < y);
        let right = self
            .intervals
            .get(idx)
            .map_or(f64::INFINITY, |i| (i.lo - y).max(0.0));
        let left = idx
            .checked_sub(1)
            .map_or(f64::INFINITY, |j| y - self.intervals[j].hi);
        left.min(right)
    }

    /// Length of the intersection with another set.
    pub fn intersection_length(&self, other: &FiberSet) -> f64 {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j, mut total) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            total += a[i].overlap_length(&b[j]);
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// Image under `y -> scale·y + offset`.
    pub fn map_affine(&self, scale: f64, offset: f64) -> Self {
        let mut out: Vec<Interval> = self
            .intervals
            .iter()
            .map(|i| Interval::spanning(scale * i.lo + offset, scale * i.hi + offset))
            .collect();
        if scale < 0.0 {
            out.reverse();
        }
        Self { intervals: out }
    }
}

fn merge_sorted(pieces: Vec<Interval>, eps: f64) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if p.lo - last.hi <= eps => last.hi = last.hi.max(p.hi),
            _ => out.push(p),
        }
    }
    out
}

/// `sup_{y in A} d(y, B)`.
///
/// The distance to `B` is piecewise linear on `A`, so its maximum is attained
/// at an endpoint of `A` or at a midpoint of a gap of `B` lying inside `A`.
pub fn one_sided_gap(a: &FiberSet, b: &FiberSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let endpoints = a.intervals.iter().flat_map(|i| [i.lo, i.hi]);
    let midpoints = b
        .intervals
        .windows(2)
        .map(|w| 0.5 * (w[0].hi + w[1].lo))
        .filter(|&m| a.distance_to(m) == 0.0);
    Ok(endpoints
        .chain(midpoints)
        .map(|y| b.distance_to(y))
        .fold(0.0, f64::max))
}

pub fn hausdorff_distance(a: &FiberSet, b: &FiberSet) -> Result<f64> {
    Ok(one_sided_gap(a, b)?.max(one_sided_gap(b, a)?))
}
