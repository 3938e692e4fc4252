//! Invariant densities read off attractors, transfer-operator checks, orbit
//! statistics and the Gauss–Kuzmin experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractor::AttractorGrid;
use crate::catalog::FareyConjugated;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mobius::{IntervalMap, Label, PiecewiseSystem, DOMAIN_TOL};
use crate::skew::{
    dual_step, hurwitz_step, skew_step, ComplexPair, DualPoint, GaussianInt, SkewPoint,
};

/// Tolerance for clamping numerical drift back into the interval.
pub const DRIFT_TOL: f64 = 1e-12;

/// A density sampled at the midpoints of a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub interval: Interval,
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    /// `Σ φ(x_j)·h` of the raw values.
    pub z: f64,
    pub normalized: bool,
}

impl DensityProfile {
    pub fn cell_width(&self) -> f64 {
        self.interval.length() / self.x.len() as f64
    }

    /// Midpoint-rule integral of the stored values.
    pub fn integral(&self) -> f64 {
        self.phi.iter().sum::<f64>() * self.cell_width()
    }

    pub fn sup_error(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.x
            .iter()
            .zip(&self.phi)
            .map(|(&x, &p)| (p - f(x)).abs())
            .fold(0.0, f64::max)
    }

    pub fn l1_error(&self, f: impl Fn(f64) -> f64) -> f64 {
        let h = self.cell_width();
        self.x
            .iter()
            .zip(&self.phi)
            .map(|(&x, &p)| (p - f(x)).abs() * h)
            .sum()
    }

    fn from_values(
        interval: Interval,
        x: Vec<f64>,
        raw: Vec<f64>,
        normalize: bool,
    ) -> Result<Self> {
        let h = interval.length() / x.len() as f64;
        let z = raw.iter().sum::<f64>() * h;
        if !(z > 0.0) {
            return Err(Error::ZeroMass);
        }
        let phi = if normalize {
            raw.iter().map(|p| p / z).collect()
        } else {
            raw
        };
        Ok(Self {
            interval,
            x,
            phi,
            z,
            normalized: normalize,
        })
    }
}

/// `φ(x) = m(K(x))` for the cell containing `x`.
pub fn fiber_measure(grid: &AttractorGrid, x: f64) -> Result<f64> {
    let domain = grid.interval();
    if !domain.contains_approx(x, DOMAIN_TOL) {
        return Err(Error::OutOfDomain { x, domain });
    }
    Ok(grid.fiber_at(x).total_length())
}

pub fn density_profile(grid: &AttractorGrid, normalize: bool) -> Result<DensityProfile> {
    let x: Vec<f64> = grid.midpoints().collect();
    let raw = grid.fibers().iter().map(|f| f.total_length()).collect();
    DensityProfile::from_values(grid.interval(), x, raw, normalize)
}

/// `|φ(x) - Σ φ(x')/|T'(x')||` over the preimages of `x` among branches with
/// index at most `level`.
pub fn ruelle_residual(
    map: &(impl IntervalMap + ?Sized),
    phi: impl Fn(f64) -> f64,
    x: f64,
    level: usize,
) -> Result<f64> {
    let domain = map.domain();
    if !domain.contains_approx(x, DOMAIN_TOL) {
        return Err(Error::OutOfDomain { x, domain });
    }
    let transfer: f64 = map
        .preimages(x, level)
        .iter()
        .map(|p| p.weight * phi(p.x))
        .sum();
    Ok((phi(x) - transfer).abs())
}

/// Largest Ruelle residual over the given points, evaluated in parallel.
pub fn max_ruelle_residual(
    map: &(impl IntervalMap + Sync + ?Sized),
    phi: impl Fn(f64) -> f64 + Sync,
    xs: &[f64],
    level: usize,
) -> Result<f64> {
    let residuals = xs
        .par_iter()
        .map(|&x| ruelle_residual(map, &phi, x, level))
        .collect::<Result<Vec<_>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CloudForm {
    #[default]
    Skew,
    Dual,
    Hurwitz,
}

impl fmt::Display for CloudForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Skew => "skew",
            Self::Dual => "dual",
            Self::Hurwitz => "hurwitz",
        })
    }
}

impl FromStr for CloudForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew" => Ok(Self::Skew),
            "dual" => Ok(Self::Dual),
            "hurwitz" => Ok(Self::Hurwitz),
            _ => Err(Error::BadInput(format!(
                "unknown form {s}; expected skew, dual or hurwitz"
            ))),
        }
    }
}

/// A point of a planar cloud with the branch that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarRow {
    pub x: f64,
    pub y: f64,
    pub label: Label,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HurwitzRow {
    pub z: Complex64,
    pub w: Complex64,
    pub digit: GaussianInt,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CloudRows {
    Planar(Vec<PlanarRow>),
    Hurwitz(Vec<HurwitzRow>),
}

/// Recorded orbit of a natural extension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub form: CloudForm,
    /// Range of the first coordinate.
    pub interval: Interval,
    pub burn: usize,
    pub seed: Option<u64>,
    pub rows: CloudRows,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        match &self.rows {
            CloudRows::Planar(r) => r.len(),
            CloudRows::Hurwitz(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First coordinates (`Re z` for Hurwitz clouds).
    pub fn xs(&self) -> Vec<f64> {
        match &self.rows {
            CloudRows::Planar(r) => r.iter().map(|p| p.x).collect(),
            CloudRows::Hurwitz(r) => r.iter().map(|p| p.z.re).collect(),
        }
    }

    /// How often each branch label occurs.
    pub fn label_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        let mut add = |k: String| *counts.entry(k).or_insert(0) += 1;
        match &self.rows {
            CloudRows::Planar(r) => r.iter().for_each(|p| add(p.label.to_string())),
            CloudRows::Hurwitz(r) => r.iter().for_each(|p| add(p.digit.to_string())),
        }
        counts
    }

    /// `[x_min, x_max, y_min, y_max]`, with `Re z` and `Im z` for Hurwitz clouds.
    pub fn bounding_box(&self) -> Option<[f64; 4]> {
        let pts: Vec<(f64, f64)> = match &self.rows {
            CloudRows::Planar(r) => r.iter().map(|p| (p.x, p.y)).collect(),
            CloudRows::Hurwitz(r) => r.iter().map(|p| (p.z.re, p.z.im)).collect(),
        };
        let first = *pts.first()?;
        Some(
            pts.iter()
                .fold([first.0, first.0, first.1, first.1], |b, &(x, y)| {
                    [b[0].min(x), b[1].max(x), b[2].min(y), b[3].max(y)]
                }),
        )
    }
}

/// Checks an iterate against the interval, clamping drift up to `DRIFT_TOL`.
fn settle(interval: Interval, x: f64, step: usize) -> Result<f64> {
    if interval.contains_approx(x, DRIFT_TOL) {
        Ok(interval.clamp(x))
    } else {
        Err(Error::OrbitEscapes { step, x })
    }
}

fn escaped(step: usize, x: f64) -> impl FnOnce(Error) -> Error {
    move |_| Error::OrbitEscapes { step, x }
}

/// Runs `step` for `burn + count` iterations and keeps the last `count` states.
fn record<S: Copy, R>(
    start: S,
    burn: usize,
    count: usize,
    mut step: impl FnMut(S, usize) -> Result<(S, R)>,
) -> Result<Vec<R>> {
    let mut state = start;
    let mut rows = Vec::with_capacity(count);
    for i in 0..burn + count {
        let (next, row) = step(state, i + 1)?;
        state = next;
        if i >= burn {
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn skew_orbit(
    system: &PiecewiseSystem,
    start: SkewPoint,
    burn: usize,
    count: usize,
) -> Result<PointCloud> {
    let interval = system.interval();
    let start = SkewPoint::new(settle(interval, start.x, 0)?, start.y);
    let rows = record(start, burn, count, |p, i| {
        let (q, label) = skew_step(system, p).map_err(escaped(i, p.x))?;
        let q = SkewPoint::new(settle(interval, q.x, i)?, q.y);
        Ok((
            q,
            PlanarRow {
                x: q.x,
                y: q.y,
                label,
            },
        ))
    })?;
    Ok(planar(CloudForm::Skew, interval, burn, rows))
}

pub fn dual_orbit(
    system: &PiecewiseSystem,
    start: DualPoint,
    burn: usize,
    count: usize,
) -> Result<PointCloud> {
    let interval = system.interval();
    let start = DualPoint::new(settle(interval, start.x, 0)?, start.v);
    let rows = record(start, burn, count, |p, i| {
        let (q, label) = dual_step(system, p).map_err(escaped(i, p.x))?;
        let q = DualPoint::new(settle(interval, q.x, i)?, q.v);
        Ok((
            q,
            PlanarRow {
                x: q.x,
                y: q.v,
                label,
            },
        ))
    })?;
    Ok(planar(CloudForm::Dual, interval, burn, rows))
}

pub fn hurwitz_orbit(start: ComplexPair, burn: usize, count: usize) -> Result<PointCloud> {
    let rows = record(start, burn, count, |p, i| {
        let q = hurwitz_step(p).map_err(escaped(i, p.z.re))?;
        Ok((
            q,
            HurwitzRow {
                z: q.z,
                w: q.w,
                digit: q.prev_digit,
            },
        ))
    })?;
    Ok(PointCloud {
        form: CloudForm::Hurwitz,
        interval: Interval::new(-0.5, 0.5),
        burn,
        seed: None,
        rows: CloudRows::Hurwitz(rows),
    })
}

/// Orbit of the Lebesgue-preserving extension of a conjugated Farey map.
///
/// The unsigned map is Farey under `u = -log x`, the signed map is Farey⁺
/// under `u = log(x/(1-x))`. Second coordinates are rescaled so that the
/// invariant set becomes the strip `|w| <= 1`; the change of variables has
/// constant Jacobian.
pub fn farey_conjugated_orbit(
    map: FareyConjugated,
    start_u: f64,
    burn: usize,
    count: usize,
) -> Result<PointCloud> {
    let (system, _) = if map.signed {
        crate::catalog::farey_plus()
    } else {
        crate::catalog::farey()
    };
    if !(start_u.is_finite() && map.domain().contains(start_u) && start_u != 0.0) {
        return Err(Error::OutOfDomain {
            x: start_u,
            domain: map.domain(),
        });
    }
    let x0 = from_u(map, start_u);
    let y0 = if map.signed {
        0.5 * (1.0 / (x0 - 1.0) + 1.0 / x0)
    } else {
        0.5 / x0
    };
    let interval = system.interval();
    let rows = record(SkewPoint::new(x0, y0), burn, count, |p, i| {
        let (q, _) = skew_step(&system, p).map_err(escaped(i, to_u(map, p.x)))?;
        let q = SkewPoint::new(settle(interval, q.x, i)?, q.y);
        let u = to_u(map, q.x);
        let (_, label) = map.step(u).map_err(escaped(i, u))?;
        Ok((
            q,
            PlanarRow {
                x: u,
                y: to_w(map, q),
                label,
            },
        ))
    })?;
    Ok(planar(CloudForm::Skew, map.domain(), burn, rows))
}

fn to_u(map: FareyConjugated, x: f64) -> f64 {
    if map.signed {
        (x / (1.0 - x)).ln()
    } else {
        -x.ln()
    }
}

fn from_u(map: FareyConjugated, u: f64) -> f64 {
    if map.signed {
        1.0 / (1.0 + (-u).exp())
    } else {
        (-u).exp()
    }
}

fn to_w(map: FareyConjugated, p: SkewPoint) -> f64 {
    if map.signed {
        2.0 * (p.y - 1.0 / (p.x - 1.0)) * p.x * (1.0 - p.x) - 1.0
    } else {
        2.0 * p.x * p.y - 1.0
    }
}

fn planar(form: CloudForm, interval: Interval, burn: usize, rows: Vec<PlanarRow>) -> PointCloud {
    PointCloud {
        form,
        interval,
        burn,
        seed: None,
        rows: CloudRows::Planar(rows),
    }
}

/// Normalized histogram of the first coordinates over the cloud's interval.
pub fn marginal_histogram(cloud: &PointCloud, bins: usize) -> Result<DensityProfile> {
    if cloud.is_empty() || bins == 0 {
        return Err(Error::BadInput(
            "histogram needs points and at least one bin".into(),
        ));
    }
    let interval = cloud.interval;
    histogram(interval, &cloud.xs(), bins)
}

fn histogram(interval: Interval, xs: &[f64], bins: usize) -> Result<DensityProfile> {
    let h = interval.length() / bins as f64;
    let mut counts = vec![0.0; bins];
    for &x in xs {
        let k = ((x - interval.lo) / h)
            .floor()
            .clamp(0.0, (bins - 1) as f64) as usize;
        counts[k] += 1.0;
    }
    let x = (0..bins)
        .map(|k| interval.lo + (k as f64 + 0.5) * h)
        .collect();
    DensityProfile::from_values(interval, x, counts, true)
}

/// `(1/n) Σ_{i<n} f(T^i x0)`.
pub fn birkhoff_average(
    map: &(impl IntervalMap + ?Sized),
    observable: impl Fn(f64) -> f64,
    x0: f64,
    n: usize,
) -> Result<f64> {
    let domain = map.domain();
    let mut x = settle(domain, x0, 0)?;
    let mut total = 0.0;
    for i in 0..n {
        total += observable(x);
        if i + 1 < n {
            let (next, _) = map.step(x).map_err(escaped(i + 1, x))?;
            x = settle(domain, next, i + 1)?;
        }
    }
    Ok(total / n as f64)
}

/// Cumulative distribution sampled at the right edges of uniform bins on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCDF {
    pub edges: Vec<f64>,
    /// `cumulative[k]` is the fraction of samples `<= edges[k + 1]`.
    pub cumulative: Vec<f64>,
}

impl EmpiricalCDF {
    pub fn from_samples(samples: &[f64], bins: usize) -> Self {
        let mut counts = vec![0usize; bins];
        for &s in samples {
            let k = (s * bins as f64).ceil() as usize;
            counts[k.clamp(1, bins) - 1] += 1;
        }
        let n = samples.len().max(1) as f64;
        let mut running = 0;
        let cumulative = counts
            .iter()
            .map(|c| {
                running += c;
                running as f64 / n
            })
            .collect();
        let edges = (0..=bins).map(|k| k as f64 / bins as f64).collect();
        Self { edges, cumulative }
    }

    /// `(x, P(x))` at the right edge of each bin.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges[1..]
            .iter()
            .copied()
            .zip(self.cumulative.iter().copied())
    }

    pub fn sup_deviation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points()
            .map(|(x, p)| (p - f(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// `x -> {1/x}` with `0 -> 0`.
pub fn gauss_map(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (1.0 / x).fract()
    }
}

/// `log(1 + x) / log 2`.
pub fn gauss_kuzmin_limit(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Draws uniform samples, applies the Gauss map `depth` times and compares the
/// empirical distribution with `log(1+x)/log 2`, or with `x` itself at depth 0.
pub fn gauss_kuzmin_experiment(
    samples: usize,
    depth: usize,
    bins: usize,
    seed: u64,
) -> Result<(EmpiricalCDF, f64)> {
    if bins == 0 {
        return Err(Error::BadParameter("bins must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..samples)
        .map(|_| {
            let m: f64 = rng.sample(Open01);
            (0..depth).fold(m, |x, _| gauss_map(x))
        })
        .collect();
    let cdf = EmpiricalCDF::from_samples(&values, bins);
    let deviation = if depth == 0 {
        cdf.sup_deviation(|x| x)
    } else {
        cdf.sup_deviation(gauss_kuzmin_limit)
    };
    Ok((cdf, deviation))
}

/// Uniform point of the open interval drawn from `seed`.
pub fn seeded_start(interval: Interval, seed: u64) -> f64 {
    let t: f64 = ChaCha8Rng::seed_from_u64(seed).sample(Open01);
    interval.lo + t * interval.length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::FiberSet;
    use crate::catalog;

    fn roof_grid(n: usize, f: impl Fn(f64) -> (f64, f64)) -> AttractorGrid {
        AttractorGrid::from_fn(Interval::new(0.0, 1.0), n, |x| {
            let (lo, hi) = f(x);
            FiberSet::interval(lo, hi)
        })
        .unwrap()
    }

    #[test]
    fn fiber_measure_examples() {
        let g = roof_grid(4096, |x| (0.0, 1.0 / (1.0 + x)));
        assert!((fiber_measure(&g, 0.0).unwrap() - 1.0).abs() < 5e-3);
        assert!((fiber_measure(&g, 1.0).unwrap() - 0.5).abs() < 5e-3);
        let m = roof_grid(4096, |x| (1.0 / (2.0 + x), 1.0 / (1.0 + x)));
        assert!((fiber_measure(&m, 0.0).unwrap() - 0.5).abs() < 5e-3);
        assert!(matches!(
            fiber_measure(&g, 1.5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn profile_normalizes() {
        let g = roof_grid(1000, |x| (0.0, 1.0 / (1.0 + x)));
        let p = density_profile(&g, true).unwrap();
        assert!((p.integral() - 1.0).abs() < 1e-12);
        assert!((p.z - std::f64::consts::LN_2).abs() < 1e-6);
        assert!(p.sup_error(|x| 1.0 / (std::f64::consts::LN_2 * (1.0 + x))) < 1e-6);
    }

    #[test]
    fn zero_mass_is_rejected() {
        let g = roof_grid(16, |_| (0.0, 0.0));
        assert!(matches!(density_profile(&g, true), Err(Error::ZeroMass)));
    }

    #[test]
    fn gauss_ruelle_telescopes() {
        let (sys, _) = catalog::gauss();
        let r = ruelle_residual(&sys, |x| 1.0 / (1.0 + x), 0.3, 10_000).unwrap();
        assert!(r <= 2e-4, "{r}");
        assert!((r - 1.0 / (10_001.3)).abs() < 1e-9);
    }

    #[test]
    fn farey_ruelle_is_exact() {
        let (f, _) = catalog::farey();
        let (fp, _) = catalog::farey_plus();
        for x in [0.1, 0.37, 0.5, 0.9] {
            assert!(ruelle_residual(&f, |x| 1.0 / x, x, 1).unwrap() <= 1e-12);
            assert!(ruelle_residual(&fp, |x| 1.0 / (x * (1.0 - x)), x, 1).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn conjugated_farey_preserves_lebesgue() {
        for signed in [false, true] {
            let map = FareyConjugated::new(signed);
            assert!(ruelle_residual(&map, |_| 1.0, 1.0, 0).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn constant_observable_averages_to_one() {
        let (sys, _) = catalog::gauss();
        assert_eq!(
            birkhoff_average(&sys, |_| 1.0, 0.414214, 1000).unwrap(),
            1.0
        );
    }

    #[test]
    fn gauss_cloud_lies_under_roof() {
        let (sys, _) = catalog::gauss();
        let cloud = skew_orbit(&sys, SkewPoint::new(0.414214, 0.0), 100, 20_000).unwrap();
        assert_eq!(cloud.len(), 20_000);
        let CloudRows::Planar(rows) = &cloud.rows else {
            panic!()
        };
        assert!(rows
            .iter()
            .all(|p| p.y <= 1.0 / (1.0 + p.x) + 1e-9 && p.y >= -1e-9));
    }

    #[test]
    fn gauss_dual_cloud_in_unit_square() {
        let (sys, _) = catalog::gauss();
        let cloud = dual_orbit(&sys, DualPoint::new(0.414214, 0.0), 100, 5000).unwrap();
        let [x0, x1, v0, v1] = cloud.bounding_box().unwrap();
        assert!(x0 >= 0.0 && x1 <= 1.0 && v0 >= -1e-9 && v1 <= 1.0 + 1e-9);
    }

    #[test]
    fn conjugated_farey_cloud_stays_in_strip() {
        for signed in [false, true] {
            let map = FareyConjugated::new(signed);
            let cloud = farey_conjugated_orbit(map, 0.8, 10, 2000).unwrap();
            let CloudRows::Planar(rows) = &cloud.rows else {
                panic!()
            };
            assert!(
                rows.iter().all(|p| p.y.abs() <= 1.0 + 1e-6),
                "signed = {signed}"
            );
        }
    }

    #[test]
    fn conjugation_intertwines() {
        for signed in [false, true] {
            let map = FareyConjugated::new(signed);
            let (sys, _) = if signed {
                catalog::farey_plus()
            } else {
                catalog::farey()
            };
            for u in [0.3, 0.9, 1.7, if signed { -0.6 } else { 2.5 }] {
                let (x, _) = sys.step(from_u(map, u)).unwrap();
                assert!(
                    (to_u(map, x) - map.apply(u).unwrap()).abs() < 1e-9,
                    "{signed} {u}"
                );
            }
        }
    }

    #[test]
    fn uniform_histogram_is_flat() {
        let xs: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
        let p = histogram(Interval::new(0.0, 1.0), &xs, 10).unwrap();
        assert!(p.sup_error(|_| 1.0) < 1e-12);
    }

    #[test]
    fn kuzmin_depth_zero_is_uniform() {
        let (cdf, dev) = gauss_kuzmin_experiment(100_000, 0, 100, 42).unwrap();
        assert!(dev < 0.01);
        assert_eq!(*cdf.cumulative.last().unwrap(), 1.0);
        assert!(cdf.cumulative.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn kuzmin_improves_with_depth() {
        let (_, d1) = gauss_kuzmin_experiment(100_000, 1, 100, 42).unwrap();
        let (_, d20) = gauss_kuzmin_experiment(100_000, 20, 100, 42).unwrap();
        assert!(d20 <= 0.01 && d1 > d20, "{d1} {d20}");
    }
}
