//! Adapters for maps outside the Möbius framework.

use num_complex::Complex64;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mobius::{IntervalMap, Label, Preimage};
use crate::skew::{hurwitz_step, ComplexPair};

/// `x -> |log(e^x - 1)|` on `(0, ∞)`, or the odd map
/// `x -> sign(x)·log(e^|x| - 1)` on `ℝ`. Both preserve Lebesgue measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FareyConjugated {
    pub signed: bool,
}

impl FareyConjugated {
    pub fn new(signed: bool) -> Self {
        Self { signed }
    }

    pub fn name(&self) -> &'static str {
        if self.signed {
            "farey-conj-signed"
        } else {
            "farey-conj"
        }
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let inner = x.abs().exp_m1().ln();
        Ok(if self.signed {
            x.signum() * inner
        } else {
            inner.abs()
        })
    }

    /// `T'(x) = ±e^|x| / (e^|x| - 1)`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let d = 1.0 / (-(-x.abs()).exp_m1());
        if self.signed {
            Ok(d)
        } else {
            Ok(if x.exp_m1() >= 1.0 { d } else { -d })
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        let ok = x.is_finite() && if self.signed { x != 0.0 } else { x > 0.0 };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                domain: self.domain(),
            })
        }
    }
}

impl IntervalMap for FareyConjugated {
    fn domain(&self) -> Interval {
        if self.signed {
            Interval::new(f64::NEG_INFINITY, f64::INFINITY)
        } else {
            Interval::new(0.0, f64::INFINITY)
        }
    }

    fn step(&self, x: f64) -> Result<(f64, Label)> {
        let y = self.apply(x)?;
        let label = if self.signed {
            Label::Digit(x.signum() as i64)
        } else {
            Label::Digit(i64::from(x.exp_m1() < 1.0))
        };
        Ok((y, label))
    }

    /// Two preimages with weights `1 - e^{-|x'|}`, which sum to one.
    fn preimages(&self, y: f64, _level: usize) -> Vec<Preimage> {
        let weight = |x: f64| -(-x.abs()).exp_m1();
        let xs = if self.signed {
            vec![(y.exp().ln_1p(), 1), (-(-y).exp().ln_1p(), -1)]
        } else {
            if !(y >= 0.0) {
                return Vec::new();
            }
            vec![(y.exp().ln_1p(), 0), ((-y).exp().ln_1p(), 1)]
        };
        xs.into_iter()
            .map(|(x, l)| Preimage {
                x,
                weight: weight(x),
                label: Label::Digit(l),
            })
            .collect()
    }
}

/// Complex nearest-integer continued fraction map on the unit square.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hurwitz;

impl Hurwitz {
    pub fn name(&self) -> &'static str {
        "hurwitz"
    }

    /// Start with `z` drawn uniformly from the square `|Re z|, |Im z| < 1/2`
    /// and `w = 0`.
    ///
    /// Points with small denominators such as `0.35 + 0.15i` have terminating
    /// expansions, so a generic start is needed for a meaningful cloud.
    pub fn start(&self, seed: u64) -> ComplexPair {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let re: f64 = rng.sample(Open01);
        let im: f64 = rng.sample(Open01);
        ComplexPair::new(Complex64::new(re - 0.5, im - 0.5), Complex64::new(0.0, 0.0))
    }

    pub fn step(&self, p: ComplexPair) -> Result<ComplexPair> {
        hurwitz_step(p)
    }
}
