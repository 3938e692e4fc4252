//! Constructors for the classical continued fraction systems, with their
//! known invariant domains and densities.

mod families;
mod raw;

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

pub use families::{ChanDigits, GaussDigits, RalstonDigits, SignedDigits, SymmetricDigits};
pub use raw::{FareyConjugated, Hurwitz};

use families::branch;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mobius::{Label, PiecewiseSystem};

/// Highest Rosen digit a generator enumerates.
pub const ROSEN_DIGIT_CAP: usize = 1_000_000;

/// Closed-form facts attached to a catalog system.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceSheet {
    /// Attractor fiber `[low(x), high(x)]`.
    pub fiber: Option<fn(f64) -> (f64, f64)>,
    /// Invariant density, normalized when the measure is finite.
    pub density: Option<fn(f64) -> f64>,
    pub finite_measure: bool,
    pub note: &'static str,
}

impl ReferenceSheet {
    pub const NONE: Self = Self {
        fiber: None,
        density: None,
        finite_measure: true,
        note: "no closed form known",
    };

    pub fn fiber_low(&self, x: f64) -> Option<f64> {
        self.fiber.map(|f| f(x).0)
    }

    pub fn fiber_high(&self, x: f64) -> Option<f64> {
        self.fiber.map(|f| f(x).1)
    }
}

pub type Catalogued = (PiecewiseSystem, ReferenceSheet);

fn unit() -> Interval {
    Interval::new(0.0, 1.0)
}

fn gauss_fiber(x: f64) -> (f64, f64) {
    (0.0, 1.0 / (1.0 + x))
}

fn gauss_density(x: f64) -> f64 {
    1.0 / (LN_2 * (1.0 + x))
}

/// `x -> {1/x}` on `[0, 1]`.
pub fn gauss() -> Catalogued {
    let system = PiecewiseSystem::new("gauss", unit(), Vec::new()).with_family(GaussDigits);
    let sheet = ReferenceSheet {
        fiber: Some(gauss_fiber),
        density: Some(gauss_density),
        finite_measure: true,
        note: "K = {0 <= y <= 1/(1+x)}, density 1/(log 2 (1+x))",
    };
    (system, sheet)
}

/// `x -> -1/x - trunc(-1/x)` on `[-1, 1]`.
pub fn symmetrized_gauss() -> Catalogued {
    let system = PiecewiseSystem::new("symmetrized-gauss", Interval::new(-1.0, 1.0), Vec::new())
        .with_family(SymmetricDigits);
    (system, ReferenceSheet::NONE)
}

fn farey_left() -> crate::mobius::MobiusBranch {
    branch([-1.0, 0.0, 1.0, -1.0], 0.0, 0.5, Label::Digit(0))
}

/// `x/(1-x)` on `[0, 1/2]`, `1/x - 1` on `[1/2, 1]`.
pub fn farey() -> Catalogued {
    let right = branch([-1.0, 1.0, 1.0, 0.0], 0.5, 1.0, Label::Digit(1));
    let system = PiecewiseSystem::new("farey", unit(), vec![farey_left(), right]);
    let sheet = ReferenceSheet {
        fiber: Some(|x| (0.0, 1.0 / x)),
        density: Some(|x| 1.0 / x),
        finite_measure: false,
        note: "K = {0 <= y <= 1/x}, infinite density 1/x",
    };
    (system, sheet)
}

/// `x/(1-x)` on `[0, 1/2]`, `2 - 1/x` on `[1/2, 1]`.
pub fn farey_plus() -> Catalogued {
    let right = branch([2.0, -1.0, 1.0, 0.0], 0.5, 1.0, Label::Digit(1));
    let system = PiecewiseSystem::new("farey-plus", unit(), vec![farey_left(), right]);
    let sheet = ReferenceSheet {
        fiber: Some(|x| (1.0 / (x - 1.0), 1.0 / x)),
        density: Some(|x| 1.0 / (x * (1.0 - x))),
        finite_measure: false,
        note: "K = {1/(x-1) <= y <= 1/x}, infinite density 1/(x(1-x))",
    };
    (system, sheet)
}

fn ralston_fiber(x: f64) -> (f64, f64) {
    if x < 0.5 {
        (1.0 / (x - 1.0), 1.0 / (x + 1.0))
    } else {
        (0.0, 1.0 / x)
    }
}

fn ralston_density(x: f64) -> f64 {
    let c = 1.0 / 6f64.ln();
    if x < 0.5 {
        2.0 * c / (1.0 - x * x)
    } else {
        c / x
    }
}

/// `1 - x` when the first digit is 1, `1/(1 + T x)` when it is odd, and
/// `T^2 x` when it is even, with `T` the Gauss map.
pub fn ralston() -> Catalogued {
    let one = branch([-1.0, 1.0, 0.0, 1.0], 0.5, 1.0, Label::Digit(1));
    let system = PiecewiseSystem::new("ralston", unit(), vec![one]).with_family(RalstonDigits);
    let sheet = ReferenceSheet {
        fiber: Some(ralston_fiber),
        density: Some(ralston_density),
        finite_measure: true,
        note: "K = {1/(x-1) <= y <= 1/(x+1)} on [0,1/2), {0 <= y <= 1/x} on [1/2,1]; C = 1/log 6",
    };
    (system, sheet)
}

/// Nakada α-expansion `x -> 1/|x| - floor(1/|x| + 1 - α)` on `[α-1, α]`.
pub fn nakada(alpha: f64) -> Result<Catalogued> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::BadParameter(format!(
            "nakada alpha must lie in (0, 1], got {alpha}"
        )));
    }
    let system = PiecewiseSystem::new(
        format!("nakada({alpha})"),
        Interval::new(alpha - 1.0, alpha),
        Vec::new(),
    )
    .with_family(SignedDigits::nakada(alpha));
    Ok((system, ReferenceSheet::NONE))
}

/// Rosen λ_q-expansion `x -> 1/|x| - λ floor(1/(λ|x|) + 1/2)` on `[-λ/2, λ/2]`.
pub fn rosen(q: u32) -> Result<Catalogued> {
    if q < 3 {
        return Err(Error::BadParameter(format!(
            "rosen q must be at least 3, got {q}"
        )));
    }
    let lambda = rosen_lambda(q);
    let system = PiecewiseSystem::new(
        format!("rosen({q})"),
        Interval::new(-lambda / 2.0, lambda / 2.0),
        Vec::new(),
    )
    .with_family(SignedDigits::rosen(lambda, ROSEN_DIGIT_CAP));
    Ok((system, ReferenceSheet::NONE))
}

pub fn rosen_lambda(q: u32) -> f64 {
    2.0 * (PI / f64::from(q)).cos()
}

/// `2x` on `[0, 1/2]`, `1/x - 1` on `[1/2, 1]`.
pub fn chan_additive() -> Catalogued {
    let doubling = branch([2.0, 0.0, 0.0, 1.0], 0.0, 0.5, Label::Digit(0));
    let gauss1 = branch([-1.0, 1.0, 1.0, 0.0], 0.5, 1.0, Label::Digit(1));
    let system = PiecewiseSystem::new("chan-add", unit(), vec![doubling, gauss1]);
    let sheet = ReferenceSheet {
        fiber: Some(gauss_fiber),
        density: Some(gauss_density),
        finite_measure: true,
        note: "same domain and density as the Gauss map",
    };
    (system, sheet)
}

fn chan_mult_density(x: f64) -> f64 {
    1.0 / ((4.0f64 / 3.0).ln() * (1.0 + x) * (2.0 + x))
}

/// `x -> 1/(2^n x) - 1` with `n = sup{k : 2^k x <= 1}`.
pub fn chan_multiplicative() -> Catalogued {
    let system = PiecewiseSystem::new("chan-mult", unit(), Vec::new()).with_family(ChanDigits);
    let sheet = ReferenceSheet {
        fiber: Some(|x| (1.0 / (2.0 + x), 1.0 / (1.0 + x))),
        density: Some(chan_mult_density),
        finite_measure: true,
        note: "K = {1/(2+x) <= y <= 1/(1+x)}, density c/((1+x)(2+x)) with c = 1/log(4/3)",
    };
    (system, sheet)
}

/// Subtractive binary gcd: strip common factors of two, then repeatedly halve
/// `q`, double `p`, or replace `(p, q)` by the sorted pair `(q - p, p)`.
pub fn binary_gcd(p: u64, q: u64) -> Result<u64> {
    if p == 0 || p >= q {
        return Err(Error::BadInput(format!(
            "binary_gcd needs 0 < p < q, got ({p}, {q})"
        )));
    }
    let shift = (p | q).trailing_zeros();
    let (mut p, mut q) = (p >> shift, q >> shift);
    while p != 0 {
        if 2 * p < q {
            if q % 2 == 0 {
                q /= 2;
            } else {
                p *= 2;
            }
        } else {
            let d = q - p;
            (p, q) = (d.min(p), d.max(p));
        }
    }
    Ok(q << shift)
}

/// A system resolved from a builtin name.
#[derive(Clone, Debug)]
pub enum Builtin {
    Mobius(PiecewiseSystem, ReferenceSheet),
    FareyConjugated(FareyConjugated),
    Hurwitz(Hurwitz),
}

pub const BUILTIN_NAMES: &[&str] = &[
    "gauss",
    "symmetrized-gauss",
    "farey",
    "farey-plus",
    "farey-conj",
    "farey-conj-signed",
    "ralston",
    "nakada",
    "rosen",
    "chan-add",
    "chan-mult",
    "hurwitz",
];

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Resolves a builtin name; `nakada` reads `alpha` (default 0.5) and `rosen`
/// reads `q` (default 3).
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Builtin> {
    let allowed: &[&str] = match name {
        "nakada" => &["alpha"],
        "rosen" => &["q"],
        _ => &[],
    };
    if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::BadParameter(format!(
            "{name} has no parameter {extra}"
        )));
    }
    let mobius = |(s, r): Catalogued| Builtin::Mobius(s, r);
    Ok(match name {
        "gauss" => mobius(gauss()),
        "symmetrized-gauss" => mobius(symmetrized_gauss()),
        "farey" => mobius(farey()),
        "farey-plus" => mobius(farey_plus()),
        "farey-conj" => Builtin::FareyConjugated(FareyConjugated::new(false)),
        "farey-conj-signed" => Builtin::FareyConjugated(FareyConjugated::new(true)),
        "ralston" => mobius(ralston()),
        "nakada" => mobius(nakada(param(params, "alpha", 0.5))?),
        "rosen" => {
            let q = param(params, "q", 3.0);
            if q.fract() != 0.0 || !(3.0..=1e6).contains(&q) {
                return Err(Error::BadParameter(format!(
                    "rosen q must be an integer >= 3, got {q}"
                )));
            }
            mobius(rosen(q as u32)?)
        }
        "chan-add" => mobius(chan_additive()),
        "chan-mult" => mobius(chan_multiplicative()),
        "hurwitz" => Builtin::Hurwitz(Hurwitz),
        other => {
            return Err(Error::BadInput(format!(
                "unknown system {other}; expected one of {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::IntervalMap;
    use crate::skew::{skew_step, SkewPoint};

    #[test]
    fn every_mobius_builtin_validates() {
        let no = BTreeMap::new();
        for name in BUILTIN_NAMES {
            if let Builtin::Mobius(system, _) = builtin(name, &no).unwrap() {
                let d = system.validate();
                assert!(d.passed(), "{name}: {:?}", d.failures);
            }
        }
        for alpha in [0.3, 0.4, 0.5, 0.618, 0.7, 1.0] {
            let d = nakada(alpha).unwrap().0.validate();
            assert!(d.passed(), "nakada({alpha}): {:?}", d.failures);
        }
        for q in 3..9 {
            let d = rosen(q).unwrap().0.validate();
            assert!(d.passed(), "rosen({q}): {:?}", d.failures);
        }
    }

    #[test]
    fn gauss_examples() {
        let (g, sheet) = gauss();
        let b = g.branch_at(0.6).unwrap();
        assert_eq!(b.label(), &Label::Digit(1));
        assert!((b.apply(0.6).unwrap() - (1.0 / 0.6 - 1.0)).abs() < 1e-15);
        assert_eq!(g.branch_at(0.5).unwrap().label(), &Label::Digit(1));
        assert_eq!(sheet.fiber.unwrap()(0.0), (0.0, 1.0));
        let (p, _) = skew_step(&g, SkewPoint::new(0.7, 0.2)).unwrap();
        assert!((p.x - 0.428_571_428_571_428_6).abs() < 1e-15);
        assert!((p.y - 0.602).abs() < 1e-15);
        let e = g.expansion_bound().unwrap();
        assert!(e.weakly_expanding);
        assert!(g.indifferent_fixed_points().is_empty());
    }

    #[test]
    fn symmetrized_examples() {
        let (s, _) = symmetrized_gauss();
        assert!((s.step(0.7).unwrap().0 + 0.428_571_428_571_428_6).abs() < 1e-15);
        assert!((s.step(-0.7).unwrap().0 - 0.428_571_428_571_428_6).abs() < 1e-15);
        let (p, _) = skew_step(&s, SkewPoint::new(0.7, 0.2)).unwrap();
        assert!((p.y + 0.602).abs() < 1e-15);
        assert!(s.indifferent_fixed_points().is_empty());
    }

    #[test]
    fn farey_examples() {
        let (f, _) = farey();
        assert!((f.step(0.25).unwrap().0 - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.step(0.8).unwrap().0 - 0.25).abs() < 1e-15);
        let (p, _) = skew_step(&f, SkewPoint::new(0.25, 1.0)).unwrap();
        assert!((p.y - 1.3125).abs() < 1e-15);
        assert_eq!(f.indifferent_fixed_points(), vec![0.0]);
        let (fp, sheet) = farey_plus();
        assert_eq!(sheet.fiber.unwrap()(0.5), (-2.0, 2.0));
        assert_eq!(fp.indifferent_fixed_points(), vec![0.0, 1.0]);
    }

    #[test]
    fn ralston_examples() {
        let (r, sheet) = ralston();
        assert!((r.step(0.7).unwrap().0 - 0.3).abs() < 1e-15);
        assert!((r.step(0.3).unwrap().0 - 0.75).abs() < 1e-12);
        assert!(r.indifferent_fixed_points().is_empty());
        let c = 1.0 / 6f64.ln();
        assert!((c - 0.558_111).abs() < 1e-6);
        // midpoint quadrature of the density
        let n = 200_000;
        let total: f64 = (0..n)
            .map(|j| sheet.density.unwrap()((j as f64 + 0.5) / n as f64))
            .sum::<f64>()
            / n as f64;
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nakada_examples() {
        let (n, _) = nakada(0.4).unwrap();
        assert!((n.step(0.3).unwrap().0 - 1.0 / 3.0).abs() < 1e-12);
        assert!((n.step(-0.3).unwrap().0 - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(nakada(0.0), Err(Error::BadParameter(_))));
        assert!(matches!(nakada(1.5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn nakada_one_is_gauss() {
        let (n, _) = nakada(1.0).unwrap();
        let (g, _) = gauss();
        for j in 1..1000 {
            let x = j as f64 / 1000.0 + 1e-7;
            if x > 1.0 {
                continue;
            }
            let a = n.step(x).unwrap().0;
            let b = g.step(x).unwrap().0;
            assert!((a - b).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn rosen_examples() {
        assert!((rosen_lambda(5) - 1.618_033_988_7).abs() < 1e-10);
        assert!((rosen_lambda(3) - 1.0).abs() < 1e-15);
        let (r, _) = rosen(4).unwrap();
        assert!((r.step(0.5).unwrap().0 - 0.585_786_4).abs() < 1e-7);
        let (r3, _) = rosen(3).unwrap();
        for j in 1..500 {
            let x = -0.5 + j as f64 / 500.0 + 1e-7;
            if x.abs() < 1e-3 {
                continue;
            }
            let t = 1.0 / x.abs();
            let expected = t - (t + 0.5).floor();
            assert!((r3.step(x).unwrap().0 - expected).abs() < 1e-12, "x = {x}");
        }
        assert!(matches!(rosen(2), Err(Error::BadParameter(_))));
    }

    #[test]
    fn chan_examples() {
        let (a, _) = chan_additive();
        assert!((a.step(0.3).unwrap().0 - 0.6).abs() < 1e-15);
        assert!((a.step(0.7).unwrap().0 - 0.428_571_428_571_428_6).abs() < 1e-15);
        let (p, _) = skew_step(&a, SkewPoint::new(0.3, 0.8)).unwrap();
        assert!((p.x - 0.6).abs() < 1e-15 && (p.y - 0.4).abs() < 1e-15);
        let (m, _) = chan_multiplicative();
        assert!((m.step(0.2).unwrap().0 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn binary_gcd_examples() {
        assert_eq!(binary_gcd(6, 10).unwrap(), 2);
        assert_eq!(binary_gcd(1, 2).unwrap(), 1);
        assert_eq!(binary_gcd(7, 14).unwrap(), 7);
        assert!(matches!(binary_gcd(5, 5), Err(Error::BadInput(_))));
        assert!(matches!(binary_gcd(0, 5), Err(Error::BadInput(_))));
    }

    #[test]
    fn unknown_builtin() {
        let no = BTreeMap::new();
        assert!(matches!(builtin("mystery", &no), Err(Error::BadInput(_))));
        let mut p = BTreeMap::new();
        p.insert("beta".to_string(), 1.0);
        assert!(matches!(builtin("gauss", &p), Err(Error::BadParameter(_))));
    }
}
