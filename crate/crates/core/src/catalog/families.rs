//! Countable branch families for the catalog systems.

use crate::interval::Interval;
use crate::mobius::{BranchFamily, Label, MobiusBranch};

/// Builds a branch known to be valid; catalog matrices are fixed formulas.
pub(crate) fn branch(matrix: [f64; 4], lo: f64, hi: f64, label: Label) -> MobiusBranch {
    MobiusBranch::new(matrix, Interval::new(lo, hi), label)
        .unwrap_or_else(|e| panic!("catalog branch {matrix:?} on [{lo}, {hi}]: {e}"))
}

/// Largest digit a generator will enumerate or look up.
const MAX_DIGIT: f64 = 1e15;

/// `t(N) = (N+2)/(N+1)^2`, the distance from the images of Gauss-type digits
/// beyond `N` to the retained ones.
fn harmonic_tail(n: f64) -> f64 {
    (n + 2.0) / ((n + 1.0) * (n + 1.0))
}

fn neighbours(k: f64, min: i64) -> impl Iterator<Item = i64> {
    let k = k as i64;
    (k - 1..=k + 1).filter(move |&j| j >= min)
}

/// Gauss digits `x -> 1/x - n` on `[1/(n+1), 1/n]`, `n >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct GaussDigits;

impl GaussDigits {
    pub fn digit(n: i64) -> MobiusBranch {
        let nf = n as f64;
        branch(
            [-nf, 1.0, 1.0, 0.0],
            1.0 / (nf + 1.0),
            1.0 / nf,
            Label::Digit(n),
        )
    }
}

impl BranchFamily for GaussDigits {
    fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        (1..=level as i64).map(Self::digit).collect()
    }

    fn branches_near(&self, x: f64) -> Vec<MobiusBranch> {
        if !(x > 0.0) || 1.0 / x > MAX_DIGIT {
            return Vec::new();
        }
        neighbours((1.0 / x).floor(), 1).map(Self::digit).collect()
    }

    fn tail_domain(&self, level: usize) -> Vec<Interval> {
        vec![Interval::new(0.0, 1.0 / (level as f64 + 1.0))]
    }

    fn tail_bound(&self, level: usize) -> Option<f64> {
        Some(harmonic_tail(level as f64))
    }

    fn expansion_sup(&self) -> Option<f64> {
        Some(1.0)
    }

    fn shift_sup(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Digits of `x -> -1/x - trunc(-1/x)` on `[-1, 1]`, all orientation preserving.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricDigits;

impl SymmetricDigits {
    pub fn digit(n: i64) -> MobiusBranch {
        let m = n.unsigned_abs() as f64;
        if n > 0 {
            branch(
                [m, -1.0, 1.0, 0.0],
                1.0 / (m + 1.0),
                1.0 / m,
                Label::Digit(n),
            )
        } else {
            branch(
                [-m, -1.0, 1.0, 0.0],
                -1.0 / m,
                -1.0 / (m + 1.0),
                Label::Digit(n),
            )
        }
    }
}

impl BranchFamily for SymmetricDigits {
    fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        let n = level as i64;
        (-n..=n).filter(|&k| k != 0).map(Self::digit).collect()
    }

    fn branches_near(&self, x: f64) -> Vec<MobiusBranch> {
        if x == 0.0 || !x.is_finite() || 1.0 / x.abs() > MAX_DIGIT {
            return Vec::new();
        }
        let sign = x.signum() as i64;
        neighbours((1.0 / x.abs()).floor(), 1)
            .map(|k| Self::digit(sign * k))
            .collect()
    }

    fn tail_domain(&self, level: usize) -> Vec<Interval> {
        let r = 1.0 / (level as f64 + 1.0);
        vec![Interval::new(-r, r)]
    }

    fn tail_bound(&self, level: usize) -> Option<f64> {
        Some(harmonic_tail(level as f64))
    }

    fn expansion_sup(&self) -> Option<f64> {
        Some(1.0)
    }

    fn shift_sup(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Ralston branches with first digit at least 3: the odd digits
/// `x -> x/((1-n)x + 1)` and the composed even digits `T^2` indexed by the
/// pair `(n, m)` of consecutive Gauss digits.
///
/// Level `N` keeps odd `n <= 4N+1`, second digits `m <= N`, and for each `m`
/// even first digits up to `max(2, ceil(N/m))` rounded up to even.
#[derive(Debug, Clone, Copy)]
pub struct RalstonDigits;

impl RalstonDigits {
    pub fn odd(n: i64) -> MobiusBranch {
        let nf = n as f64;
        branch(
            [-1.0, 0.0, nf - 1.0, -1.0],
            1.0 / (nf + 1.0),
            1.0 / nf,
            Label::Digit(n),
        )
    }

    pub fn pair(n: i64, m: i64) -> MobiusBranch {
        let (nf, mf) = (n as f64, m as f64);
        branch(
            [mf * nf + 1.0, -mf, -nf, 1.0],
            mf / (nf * mf + 1.0),
            (mf + 1.0) / (nf * (mf + 1.0) + 1.0),
            Label::Pair(n, m),
        )
    }

    fn max_even(level: usize, m: i64) -> i64 {
        let n = level.div_ceil(m as usize).max(2) as i64;
        n + n % 2
    }
}

impl BranchFamily for RalstonDigits {
    fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        let mut out: Vec<MobiusBranch> = (3..=4 * level as i64 + 1)
            .step_by(2)
            .map(Self::odd)
            .collect();
        for m in 1..=level as i64 {
            for n in (2..=Self::max_even(level, m)).step_by(2) {
                out.push(Self::pair(n, m));
            }
        }
        out
    }

    fn branches_near(&self, x: f64) -> Vec<MobiusBranch> {
        if !(x > 0.0) || 1.0 / x > MAX_DIGIT {
            return Vec::new();
        }
        let mut out = Vec::new();
        for n in neighbours((1.0 / x).floor(), 2) {
            if n % 2 == 1 {
                out.push(Self::odd(n));
                continue;
            }
            let t = 1.0 / x - n as f64;
            if !(t > 0.0) || 1.0 / t > MAX_DIGIT {
                continue;
            }
            out.extend(neighbours((1.0 / t).floor(), 1).map(|m| Self::pair(n, m)));
        }
        out
    }

    fn tail_domain(&self, level: usize) -> Vec<Interval> {
        let odd_max = 4 * level as i64 + 1;
        let mut out = vec![Interval::new(0.0, 1.0 / (odd_max as f64 + 1.0))];
        for n in (2..odd_max).step_by(2) {
            let covered = (1..=level as i64)
                .take_while(|&m| Self::max_even(level, m) >= n)
                .last();
            let nf = n as f64;
            match covered {
                Some(m) => {
                    let mf = m as f64 + 1.0;
                    out.push(Interval::new(mf / (nf * mf + 1.0), 1.0 / nf));
                }
                None => out.push(Interval::new(1.0 / (nf + 1.0), 1.0 / nf)),
            }
        }
        out
    }

    fn tail_bound(&self, level: usize) -> Option<f64> {
        let n = level as f64;
        Some(1.0 / n + 4.0 / (n * n))
    }

    fn expansion_sup(&self) -> Option<f64> {
        // the odd digits reach (cx+d)^2 = 4/(n+1)^2 <= 1/4; the pairs stay below 1/4
        Some(0.25)
    }

    fn shift_sup(&self) -> Option<f64> {
        // odd: (n-1)·2/(n+1) < 2; pairs: n·(1 - n x) with x >= m/(nm+1) gives n/(nm+1) < 1
        Some(2.0)
    }
}

/// Chan multiplicative digits `x -> 1/(2^n x) - 1` on `[2^-(n+1), 2^-n]`, `n >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct ChanDigits;

impl ChanDigits {
    pub fn digit(n: i64) -> MobiusBranch {
        let p = 2f64.powi(n as i32);
        branch([-p, 1.0, p, 0.0], 0.5 / p, 1.0 / p, Label::Digit(n))
    }
}

impl BranchFamily for ChanDigits {
    fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        (0..=level as i64).map(Self::digit).collect()
    }

    fn branches_near(&self, x: f64) -> Vec<MobiusBranch> {
        if !(x > 0.0) || x < 1e-300 {
            return Vec::new();
        }
        neighbours((-x.log2()).floor(), 0)
            .map(Self::digit)
            .collect()
    }

    fn tail_domain(&self, level: usize) -> Vec<Interval> {
        vec![Interval::new(0.0, 2f64.powi(-(level as i32) - 1))]
    }

    fn tail_bound(&self, level: usize) -> Option<f64> {
        Some(2f64.powi(1 - level as i32))
    }

    fn expansion_sup(&self) -> Option<f64> {
        Some(1.0)
    }

    fn shift_sup(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Digits `k` of a map `x -> 1/|x| - λk` on `[lo, hi]` containing zero, where
/// the positive digit `k` covers `1/|x| ∈ [λ(k - 1 + s), λ(k + s))`.
///
/// Nakada α-expansions use `λ = 1, s = α`; Rosen expansions use
/// `s = 1/2` with `λ = 2cos(π/q)`.
#[derive(Debug, Clone, Copy)]
pub struct SignedDigits {
    lambda: f64,
    offset: f64,
    lo: f64,
    hi: f64,
    cap: Option<usize>,
}

impl SignedDigits {
    pub fn nakada(alpha: f64) -> Self {
        Self {
            lambda: 1.0,
            offset: alpha,
            lo: alpha - 1.0,
            hi: alpha,
            cap: None,
        }
    }

    pub fn rosen(lambda: f64, cap: usize) -> Self {
        Self {
            lambda,
            offset: 0.5,
            lo: -lambda / 2.0,
            hi: lambda / 2.0,
            cap: Some(cap),
        }
    }

    /// Branch for signed digit `k`, or `None` when its domain misses the interval.
    pub fn digit(&self, k: i64) -> Option<MobiusBranch> {
        if k == 0 {
            return None;
        }
        let m = k.unsigned_abs() as f64;
        let near = 1.0 / (self.lambda * (m + self.offset));
        let far_den = self.lambda * (m - 1.0 + self.offset);
        let far = if far_den > 0.0 {
            1.0 / far_den
        } else {
            f64::INFINITY
        };
        let shift = self.lambda * m;
        if k > 0 {
            let hi = far.min(self.hi);
            (near < hi).then(|| branch([-shift, 1.0, 1.0, 0.0], near, hi, Label::Digit(k)))
        } else {
            let lo = (-far).max(self.lo);
            (lo < -near).then(|| branch([-shift, -1.0, 1.0, 0.0], lo, -near, Label::Digit(k)))
        }
    }

    fn effective(&self, level: usize) -> usize {
        self.cap.map_or(level, |c| level.min(c))
    }
}

impl BranchFamily for SignedDigits {
    fn branches(&self, level: usize) -> Vec<MobiusBranch> {
        let n = self.effective(level) as i64;
        (-n..=n).filter_map(|k| self.digit(k)).collect()
    }

    fn branches_near(&self, x: f64) -> Vec<MobiusBranch> {
        if x == 0.0 || !x.is_finite() {
            return Vec::new();
        }
        let t = 1.0 / (self.lambda * x.abs());
        if t > MAX_DIGIT {
            return Vec::new();
        }
        let sign = x.signum() as i64;
        neighbours((t + 1.0 - self.offset).floor(), 1)
            .filter_map(|k| self.digit(sign * k))
            .collect()
    }

    fn tail_domain(&self, level: usize) -> Vec<Interval> {
        let r = 1.0 / (self.lambda * (self.effective(level) as f64 + self.offset));
        vec![Interval::new((-r).max(self.lo), r.min(self.hi))]
    }

    fn tail_bound(&self, level: usize) -> Option<f64> {
        let r = self.lambda * (self.effective(level) as f64 + self.offset);
        Some((1.0 + 2.0 / r) / r)
    }

    fn expansion_sup(&self) -> Option<f64> {
        let r = self.hi.max(-self.lo);
        Some(r * r)
    }

    fn shift_sup(&self) -> Option<f64> {
        Some(self.hi.max(-self.lo))
    }
}
