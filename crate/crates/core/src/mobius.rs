//! Piecewise homographic interval maps.
//!
//! A [`PiecewiseSystem`] is a compact interval `I` covered by branch domains,
//! each carrying a Möbius matrix normalized to `|det| = 1` with `c >= 0`.
//! Countable families (the Gauss digits, Nakada and Rosen digits, ...) are
//! supplied lazily through [`BranchFamily`] and truncated at a caller-chosen
//! level.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Slack when deciding that a determinant or an expansion factor equals one.
pub const DET_TOL: f64 = 1e-12;
/// Slack for domain and image membership.
pub const DOMAIN_TOL: f64 = 1e-12;
/// Gaps or overlaps shorter than this are treated as shared endpoints.
pub const COVER_TOL: f64 = 1e-9;
/// Truncation level used when validating countable families.
pub const VALIDATION_LEVEL: usize = 64;

/// Branch identifier: a digit, a digit pair for composed branches, or a name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Digit(i64),
    Pair(i64, i64),
    Name(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Digit(n) => write!(f, "{n}"),
            Label::Pair(n, m) => write!(f, "{n}:{m}"),
            Label::Name(s) => f.write_str(s),
        }
    }
}

impl FromStr for Label {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Ok(n) = s.parse() {
            return Ok(Label::Digit(n));
        }
        if let Some((n, m)) = s.split_once(':') {
            if let (Ok(n), Ok(m)) = (n.parse(), m.parse()) {
                return Ok(Label::Pair(n, m));
            }
        }
        Ok(Label::Name(s.to_owned()))
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(s.parse().unwrap_or(Label::Name(s)))
    }
}

/// One branch `x -> (ax+b)/(cx+d)` of a piecewise homographic map.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusBranch {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    det: f64,
    domain: Interval,
    image: Interval,
    label: Label,
}

/// Canonical representative of a branch: entries scaled to `|det| = 1`, then
/// sign-flipped so that `c >= 0` (and `d > 0` when `c = 0`).
///
/// Inputs whose determinant is already within [`DET_TOL`] of `±1` are kept
/// as given, which makes normalization idempotent.
pub fn normalize_branch(matrix: [f64; 4], domain: Interval, label: Label) -> Result<MobiusBranch> {
    let [mut a, mut b, mut c, mut d] = matrix;
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadInput(format!(
            "non-finite matrix entry in {matrix:?}"
        )));
    }
    if !(domain.lo.is_finite() && domain.hi.is_finite()) || domain.is_empty() {
        return Err(Error::BadInput(format!(
            "empty or non-finite domain {domain}"
        )));
    }
    let det = a * d - b * c;
    if det.abs() <= f64::EPSILON * (a.abs() * d.abs() + b.abs() * c.abs()).max(f64::MIN_POSITIVE) {
        return Err(Error::ZeroDeterminant);
    }
    if (det.abs() - 1.0).abs() > DET_TOL {
        let s = det.abs().sqrt();
        a /= s;
        b /= s;
        c /= s;
        d /= s;
    }
    if c < 0.0 || (c == 0.0 && d < 0.0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    let lo_den = c * domain.lo + d;
    let hi_den = c * domain.hi + d;
    if lo_den == 0.0 || hi_den == 0.0 || lo_den.signum() != hi_den.signum() {
        return Err(Error::PoleInDomain {
            pole: -d / c,
            domain,
        });
    }
    let eval = |x: f64| (a * x + b) / (c * x + d);
    Ok(MobiusBranch {
        a,
        b,
        c,
        d,
        det: det.signum(),
        domain,
        image: Interval::spanning(eval(domain.lo), eval(domain.hi)),
        label,
    })
}

impl MobiusBranch {
    pub fn new(matrix: [f64; 4], domain: Interval, label: Label) -> Result<Self> {
        normalize_branch(matrix, domain, label)
    }

    pub fn matrix(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Orientation sign, `+1.0` or `-1.0`.
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn image(&self) -> Interval {
        self.image
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn is_increasing(&self) -> bool {
        self.det > 0.0
    }

    /// `cx + d`.
    #[inline]
    pub fn denominator(&self, x: f64) -> f64 {
        self.c * x + self.d
    }

    /// `(cx + d)^2`, the inverse of `|T'(x)|` and the fiber contraction factor.
    #[inline]
    pub fn scale(&self, x: f64) -> f64 {
        let s = self.denominator(x);
        s * s
    }

    /// `c (cx + d)`, the fiber offset.
    #[inline]
    pub fn shift(&self, x: f64) -> f64 {
        self.c * self.denominator(x)
    }

    /// Evaluates the homography without checking the domain.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.eval(x))
    }

    /// `T'(x) = det / (cx+d)^2`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.det / self.scale(x))
    }

    /// Unique preimage of `x_image` in the branch domain.
    pub fn inverse_apply(&self, x_image: f64) -> Result<f64> {
        if !self.image.contains_approx(x_image, DOMAIN_TOL) {
            return Err(Error::OutOfRange {
                x: x_image,
                image: self.image,
            });
        }
        Ok(self.invert(x_image))
    }

    /// Preimage without the range check, clamped into the domain.
    #[inline]
    pub fn invert(&self, x_image: f64) -> f64 {
        let x = (self.d * x_image - self.b) / (self.a - self.c * x_image);
        self.domain.clamp(x)
    }

    /// Second coordinate of the skew extension: `det·((cx+d)^2 y - c(cx+d))`.
    #[inline]
    pub fn fiber_map(&self, x: f64, y: f64) -> f64 {
        let s = self.denominator(x);
        self.det * (s * s * y - self.c * s)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.domain.contains_approx(x, DOMAIN_TOL) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                domain: self.domain,
            })
        }
    }
}

/// A countable family of branches enumerated by a closed-form generator.
pub trait BranchFamily: fmt::Debug + Send + Sync {
    /// All branches whose truncation index is at most `level`.
    fn branches(&self, level: usize) -> Vec<MobiusBranch>;

    /// A few branches, one of which contains `x` whenever the family covers it.
    fn branches_near(&self, x: f64) -> Vec<MobiusBranch>;

    /// Parts of the family's territory left uncovered at `level`.
    fn tail_domain(&self, level: usize) -> Vec<Interval>;

    /// Bound on the distance from the images of the omitted branches to the
    /// retained images, for fibers inside the family's bounding box.
    fn tail_bound(&self, level: usize) -> Option<f64>;

    /// Closed-form supremum of `(cx+d)^2` over the family, if known.
    fn expansion_sup(&self) -> Option<f64> {
        None
    }

    /// Closed-form supremum of `|c(cx+d)|` over the family, if known.
    fn shift_sup(&self) -> Option<f64> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionBound {
    pub k: f64,
    pub weakly_expanding: bool,
}

/// Interval map `T: I -> I` given by finitely many branches plus optional
/// countable families. Immutable once built.
#[derive(Clone, Debug)]
pub struct PiecewiseSystem {
    name: String,
    interval: Interval,
    branches: Vec<MobiusBranch>,
    families: Vec<Arc<dyn BranchFamily>>,
}

impl PiecewiseSystem {
    pub fn new(name: impl Into<String>, interval: Interval, branches: Vec<MobiusBranch>) -> Self {
        Self {
            name: name.into(),
            interval,
            branches,
            families: Vec::new(),
        }
    }

    pub fn with_family(mut self, family: impl BranchFamily + 'static) -> Self {
        self.families.push(Arc::new(family));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn finite_branches(&self) -> &[MobiusBranch] {
        &self.branches
    }

    pub fn is_countable(&self) -> bool {
        !self.families.is_empty()
    }

    /// Finite branches plus every family branch up to `level`, sorted by label.
    pub fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        let mut all = self.branches.clone();
        for family in &self.families {
            all.extend(family.branches(level));
        }
        all.sort_by(|p, q| p.label.cmp(&q.label));
        all
    }

    /// Branch whose domain contains `x`; the smallest label wins on shared
    /// endpoints.
    pub fn branch_at(&self, x: f64) -> Result<MobiusBranch> {
        let candidates = self
            .branches
            .iter()
            .filter(|b| b.domain.contains(x))
            .cloned()
            .chain(
                self.families
                    .iter()
                    .flat_map(|f| f.branches_near(x))
                    .filter(|b| b.domain.contains(x)),
            );
        candidates
            .min_by(|p, q| p.label.cmp(&q.label))
            .ok_or(Error::NoBranch(x))
    }

    /// `k = sup (cx+d)^2`. The quantity is convex in `x`, so domain endpoints
    /// bound every interior value.
    pub fn expansion_bound(&self) -> Result<ExpansionBound> {
        let check = |b: &MobiusBranch| -> Result<f64> {
            let v = b.scale(b.domain.lo).max(b.scale(b.domain.hi));
            if v > 1.0 + DET_TOL {
                return Err(Error::NotExpanding {
                    label: b.label.to_string(),
                    value: v,
                });
            }
            Ok(v)
        };
        let mut k: f64 = 0.0;
        for b in &self.branches {
            k = k.max(check(b)?);
        }
        for family in &self.families {
            match family.expansion_sup() {
                Some(v) if v > 1.0 + DET_TOL => {
                    return Err(Error::NotExpanding {
                        label: format!("{family:?}"),
                        value: v,
                    })
                }
                Some(v) => k = k.max(v),
                None => {
                    for b in family.branches(VALIDATION_LEVEL) {
                        k = k.max(check(&b)?);
                    }
                }
            }
        }
        let weakly_expanding = k >= 1.0 - DET_TOL;
        Ok(ExpansionBound {
            k: if weakly_expanding { 1.0 } else { k },
            weakly_expanding,
        })
    }

    /// `B = sup |c(cx+d)|`, affine in `x` so endpoints suffice.
    pub fn shift_bound(&self) -> Result<f64> {
        let endpoint_sup =
            |b: &MobiusBranch| b.shift(b.domain.lo).abs().max(b.shift(b.domain.hi).abs());
        let mut bound = self.branches.iter().map(endpoint_sup).fold(0.0, f64::max);
        for family in &self.families {
            let v = match family.shift_sup() {
                Some(v) => v,
                None => family
                    .branches(VALIDATION_LEVEL)
                    .iter()
                    .map(endpoint_sup)
                    .fold(0.0, f64::max),
            };
            bound = bound.max(v);
        }
        if bound.is_finite() {
            Ok(bound)
        } else {
            Err(Error::UnboundedShift)
        }
    }

    /// Largest tail bound of the countable families at `level` (zero when finite).
    pub fn tail_bound(&self, level: usize) -> Result<f64> {
        self.families.iter().try_fold(0.0_f64, |acc, f| {
            f.tail_bound(level)
                .map(|t| acc.max(t))
                .ok_or(Error::NoTailBound)
        })
    }

    /// Fixed endpoints of orientation-preserving branches where `|T'| = 1`.
    /// Such points force an infinite invariant measure and rule out a
    /// compact attractor.
    pub fn indifferent_fixed_points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        let mut scan = |b: &MobiusBranch| {
            if !b.is_increasing() {
                return;
            }
            for x in [b.domain.lo, b.domain.hi] {
                if (b.scale(x) - 1.0).abs() <= DET_TOL && (b.eval(x) - x).abs() <= DOMAIN_TOL {
                    points.push(x);
                }
            }
        };
        self.branches.iter().for_each(&mut scan);
        for family in &self.families {
            family.branches(VALIDATION_LEVEL).iter().for_each(&mut scan);
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        points
    }

    /// Checks the standing hypotheses and records every failure.
    pub fn validate(&self) -> Diagnostics {
        let mut failures = Vec::new();
        let branches = self.branches(VALIDATION_LEVEL);

        for b in &branches {
            if !(self.interval.contains_approx(b.domain.lo, DOMAIN_TOL)
                && self.interval.contains_approx(b.domain.hi, DOMAIN_TOL))
            {
                failures.push(Failure::DomainOutside(b.label.clone()));
            }
            if !(self.interval.contains_approx(b.image.lo, DOMAIN_TOL)
                && self.interval.contains_approx(b.image.hi, DOMAIN_TOL))
            {
                failures.push(Failure::ImageOutside(b.label.clone()));
            }
        }

        let mut domains: Vec<Interval> = branches.iter().map(|b| b.domain).collect();
        for family in &self.families {
            domains.extend(family.tail_domain(VALIDATION_LEVEL));
        }
        failures.extend(
            uncovered(self.interval, domains)
                .into_iter()
                .map(Failure::CoverGap),
        );
        failures.extend(
            uncovered(self.interval, branches.iter().map(|b| b.image).collect())
                .into_iter()
                .map(Failure::ImageGap),
        );

        let mut by_lo: Vec<&MobiusBranch> = branches.iter().collect();
        by_lo.sort_by(|p, q| p.domain.lo.total_cmp(&q.domain.lo));
        let mut reach = f64::NEG_INFINITY;
        for b in by_lo {
            let overlap = reach.min(b.domain.hi) - b.domain.lo;
            if overlap > COVER_TOL {
                failures.push(Failure::OverlapLength(overlap));
            }
            reach = reach.max(b.domain.hi);
        }

        let expansion = match self.expansion_bound() {
            Ok(e) => Some(e),
            Err(Error::NotExpanding { label, value }) => {
                failures.push(Failure::NotExpanding { label, value });
                None
            }
            Err(_) => None,
        };
        let shift = match self.shift_bound() {
            Ok(v) => Some(v),
            Err(_) => {
                failures.push(Failure::UnboundedShift);
                None
            }
        };
        if self.tail_bound(VALIDATION_LEVEL).is_err() {
            failures.push(Failure::NoTailBound);
        }

        Diagnostics {
            k: expansion.map(|e| e.k),
            weakly_expanding: expansion.is_some_and(|e| e.weakly_expanding),
            shift,
            indifferent_points: self.indifferent_fixed_points(),
            failures,
        }
    }
}

/// Parts of `interval` not covered by `pieces`, ignoring point gaps.
fn uncovered(interval: Interval, mut pieces: Vec<Interval>) -> Vec<Interval> {
    pieces.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let mut gaps = Vec::new();
    let mut cursor = interval.lo;
    for p in pieces {
        if p.lo > cursor + COVER_TOL {
            gaps.push(Interval::new(cursor, p.lo.min(interval.hi)));
        }
        cursor = cursor.max(p.hi);
        if cursor >= interval.hi {
            break;
        }
    }
    if cursor < interval.hi - COVER_TOL {
        gaps.push(Interval::new(cursor, interval.hi));
    }
    gaps
}

#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    CoverGap(Interval),
    ImageGap(Interval),
    OverlapLength(f64),
    DomainOutside(Label),
    ImageOutside(Label),
    NotExpanding { label: String, value: f64 },
    UnboundedShift,
    NoTailBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub k: Option<f64>,
    pub weakly_expanding: bool,
    pub shift: Option<f64>,
    pub indifferent_points: Vec<f64>,
    pub failures: Vec<Failure>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A preimage `x'` of a point together with its transfer weight `1/|T'(x')|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Preimage {
    pub x: f64,
    pub weight: f64,
    pub label: Label,
}

/// One-dimensional map interface shared by Möbius systems and raw adapters.
pub trait IntervalMap {
    fn domain(&self) -> Interval;

    /// One step of the map together with the branch used.
    fn step(&self, x: f64) -> Result<(f64, Label)>;

    /// Preimages of `x` among branches with truncation index at most `level`.
    fn preimages(&self, x: f64, level: usize) -> Vec<Preimage>;
}

impl IntervalMap for PiecewiseSystem {
    fn domain(&self) -> Interval {
        self.interval
    }

    fn step(&self, x: f64) -> Result<(f64, Label)> {
        let branch = self.branch_at(x)?;
        Ok((branch.eval(x), branch.label))
    }

    fn preimages(&self, x: f64, level: usize) -> Vec<Preimage> {
        preimages_among(&self.branches(level), x)
    }
}

/// Preimages of `x` in a precomputed branch table.
pub fn preimages_among(branches: &[MobiusBranch], x: f64) -> Vec<Preimage> {
    branches
        .iter()
        .filter(|b| b.image.contains_approx(x, DOMAIN_TOL))
        .map(|b| {
            let pre = b.invert(x);
            Preimage {
                x: pre,
                weight: b.scale(pre),
                label: b.label.clone(),
            }
        })
        .collect()
}

impl PartialOrd for MobiusBranch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.label.cmp(&other.label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    fn gauss1() -> MobiusBranch {
        MobiusBranch::new([-1.0, 1.0, 1.0, 0.0], iv(0.5, 1.0), Label::Digit(1)).unwrap()
    }

    fn farey_left() -> MobiusBranch {
        MobiusBranch::new([-1.0, 0.0, 1.0, -1.0], iv(0.0, 0.5), Label::Digit(0)).unwrap()
    }

    fn identity() -> MobiusBranch {
        MobiusBranch::new([1.0, 0.0, 0.0, 1.0], iv(0.0, 1.0), Label::Digit(0)).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = gauss1();
        assert_eq!(g.matrix(), [-1.0, 1.0, 1.0, 0.0]);
        assert_eq!(g.det(), -1.0);
        let id = identity();
        assert_eq!(id.matrix(), [1.0, 0.0, 0.0, 1.0]);
        assert_eq!(id.det(), 1.0);
        let m = MobiusBranch::new([-2.0, 0.0, 2.0, -2.0], iv(0.0, 0.5), Label::Digit(0)).unwrap();
        assert_eq!(m.matrix(), [-1.0, 0.0, 1.0, -1.0]);
        assert_eq!(m.det(), 1.0);
    }

    #[test]
    fn normalize_flips_sign_of_c() {
        let m = MobiusBranch::new([1.0, 0.0, -2.0, 1.0], iv(0.0, 0.25), Label::Digit(0)).unwrap();
        let [_, _, c, _] = m.matrix();
        assert!(c > 0.0);
        assert!((m.eval(0.2) - 0.2 / (1.0 - 0.4)).abs() < 1e-15);
        let m = MobiusBranch::new([-1.0, 0.5, 0.0, -1.0], iv(0.0, 1.0), Label::Digit(0)).unwrap();
        assert!(m.matrix()[3] > 0.0);
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(
            MobiusBranch::new([1.0, 2.0, 2.0, 4.0], iv(0.0, 1.0), Label::Digit(0)),
            Err(Error::ZeroDeterminant)
        ));
        assert!(matches!(
            MobiusBranch::new([0.0, 1.0, 1.0, 0.0], iv(-1.0, 1.0), Label::Digit(0)),
            Err(Error::PoleInDomain { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        assert!((gauss1().apply(0.7).unwrap() - 0.428_571_428_571_428_6).abs() < 1e-15);
        assert_eq!(identity().apply(0.3).unwrap(), 0.3);
        assert!((farey_left().apply(0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            gauss1().apply(0.2),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        assert!((gauss1().derivative(0.7).unwrap() + 1.0 / 0.49).abs() < 1e-12);
        assert!((farey_left().derivative(0.25).unwrap() - 16.0 / 9.0).abs() < 1e-12);
        assert_eq!(identity().derivative(0.9).unwrap(), 1.0);
    }

    #[test]
    fn inverse_examples() {
        assert!((gauss1().inverse_apply(0.428_571_428_6).unwrap() - 0.7).abs() < 1e-9);
        assert_eq!(identity().inverse_apply(0.5).unwrap(), 0.5);
        let g3 =
            MobiusBranch::new([-3.0, 1.0, 1.0, 0.0], iv(0.25, 1.0 / 3.0), Label::Digit(3)).unwrap();
        assert!((g3.inverse_apply(0.2).unwrap() - 0.3125).abs() < 1e-15);
        assert!(matches!(
            g3.inverse_apply(1.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn validate_reports_cover_gap_and_overlap() {
        let left = MobiusBranch::new([2.0, 0.0, 0.0, 1.0], iv(0.0, 0.4), Label::Digit(0)).unwrap();
        let right =
            MobiusBranch::new([-1.0, 1.0, 1.0, 0.0], iv(0.5, 1.0), Label::Digit(1)).unwrap();
        let gap = PiecewiseSystem::new("gap", iv(0.0, 1.0), vec![left, right]).validate();
        assert!(gap.failures.contains(&Failure::CoverGap(iv(0.4, 0.5))));

        let a = MobiusBranch::new([1.0, 0.0, 0.0, 1.0], iv(0.0, 0.6), Label::Digit(0)).unwrap();
        let b = MobiusBranch::new([1.0, 0.0, 0.0, 1.0], iv(0.4, 1.0), Label::Digit(1)).unwrap();
        let overlap = PiecewiseSystem::new("overlap", iv(0.0, 1.0), vec![a, b]).validate();
        let found = overlap.failures.iter().any(|f| match f {
            Failure::OverlapLength(len) => (len - 0.2).abs() < 1e-12,
            _ => false,
        });
        assert!(found, "{:?}", overlap.failures);
    }

    #[test]
    fn identity_system_bounds() {
        let sys = PiecewiseSystem::new("id", iv(0.0, 1.0), vec![identity()]);
        assert_eq!(sys.shift_bound().unwrap(), 0.0);
        let e = sys.expansion_bound().unwrap();
        assert!(e.weakly_expanding);
        assert!(!sys.indifferent_fixed_points().is_empty());
    }

    #[test]
    fn not_expanding_is_reported() {
        let half = MobiusBranch::new([1.0, 0.0, 0.0, 2.0], iv(0.0, 1.0), Label::Digit(0)).unwrap();
        let sys = PiecewiseSystem::new("contracting", iv(0.0, 1.0), vec![half]);
        assert!(matches!(
            sys.expansion_bound(),
            Err(Error::NotExpanding { .. })
        ));
    }

    #[test]
    fn label_round_trip() {
        for l in [
            Label::Digit(-3),
            Label::Pair(2, 5),
            Label::Name("left".into()),
        ] {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
    }
}
