//! Generator functions `f: (0, ∞) → ℝ` and the witnesses built from them.
//!
//! A generator must be nondecreasing and diverge to `-∞` at `0+`. For a
//! nondecreasing function the two-sided sequence condition reduces to that
//! one-sided limit: if `f(t_n) → -∞` while `t_n ≥ t₀ > 0` along a
//! subsequence, monotonicity would give `f(t_n) ≥ f(t₀)`. The checkers here
//! therefore only probe divergence at `0+`.
//!
//! All verification in this module is sampled: grids and geometric probes
//! stand in for the universal quantifiers. The catalog generators are
//! monotone and divergent analytically; the checkers are diagnostics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Tolerance for ties when checking monotonicity. Relative once `|f| > 1`.
pub const F1_TOL: f64 = 1e-12;

/// Smallest argument probed when searching for divergence at `0+`.
pub const UNDERFLOW_FLOOR: f64 = f64::MIN_POSITIVE;

/// Anything that can be evaluated as a candidate generator.
pub trait Evaluate {
    fn name(&self) -> String;

    /// `f(t)` for `t > 0`; errors outside the domain or on a non-finite value.
    fn eval(&self, t: f64) -> Result<f64>;
}

/// The built-in generator catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `f(t) = ln t`
    Log,
    /// `f(t) = -1/t`
    NegInverse,
    /// `f(t) = ln t + t`
    LogPlusLinear,
}

impl Generator {
    pub const CATALOG: [Generator; 3] = [Generator::Log, Generator::NegInverse, Generator::LogPlusLinear];

    pub fn as_str(self) -> &'static str {
        match self {
            Generator::Log => "log",
            Generator::NegInverse => "neg_inverse",
            Generator::LogPlusLinear => "log_plus_linear",
        }
    }

    /// Reserved for parameterized generators; the catalog takes none.
    pub fn params(self) -> &'static [f64] {
        &[]
    }

    fn raw(self, t: f64) -> f64 {
        match self {
            Generator::Log => t.ln(),
            Generator::NegInverse => -1.0 / t,
            Generator::LogPlusLinear => t.ln() + t,
        }
    }
}

impl Evaluate for Generator {
    fn name(&self) -> String {
        self.as_str().to_owned()
    }

    fn eval(&self, t: f64) -> Result<f64> {
        eval_checked(self.as_str(), t, |t| self.raw(t))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" => Ok(Generator::Log),
            "neg_inverse" => Ok(Generator::NegInverse),
            "log_plus_linear" => Ok(Generator::LogPlusLinear),
            other => Err(Error::UnknownGenerator(other.to_owned())),
        }
    }
}

/// Adapter for ad-hoc functions, mostly used to exercise the checkers on
/// functions outside the class.
pub struct FnGenerator<F> {
    name: &'static str,
    f: F,
}

impl<F: Fn(f64) -> f64> FnGenerator<F> {
    pub fn new(name: &'static str, f: F) -> Self {
        FnGenerator { name, f }
    }
}

impl<F: Fn(f64) -> f64> Evaluate for FnGenerator<F> {
    fn name(&self) -> String {
        self.name.to_owned()
    }

    fn eval(&self, t: f64) -> Result<f64> {
        eval_checked(self.name, t, &self.f)
    }
}

fn eval_checked(name: &str, t: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain { generator: name.to_owned(), t });
    }
    let v = f(t);
    if !v.is_finite() {
        return Err(Error::NonFinite { generator: name.to_owned(), t });
    }
    Ok(v)
}

/// A generator together with its slack `alpha ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub generator: Generator,
    pub alpha: f64,
}

impl Witness {
    pub fn new(generator: Generator, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Witness { generator, alpha })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.generator.eval(t)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, alpha = {}", self.generator, self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneViolation {
    pub s: f64,
    pub t: f64,
    pub f_s: f64,
    pub f_t: f64,
}

/// Checks `f(grid[i]) ≤ f(grid[i+1])` up to [`F1_TOL`] on consecutive grid points.
pub fn check_f1<G: Evaluate + ?Sized>(g: &G, grid: &[f64]) -> Result<Verdict<MonotoneViolation>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(&bad) = grid.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidGrid(format!("grid entry {bad} is not a finite positive real")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!("grid is not strictly ascending at {} -> {}", w[0], w[1])));
    }

    let values = grid.iter().map(|&t| g.eval(t)).collect::<Result<Vec<_>>>()?;
    let violation = grid.windows(2).zip(values.windows(2)).find_map(|(ts, fs)| {
        let scale = fs[0].abs().max(fs[1].abs()).max(1.0);
        (fs[0] > fs[1] + F1_TOL * scale).then(|| MonotoneViolation { s: ts[0], t: ts[1], f_s: fs[0], f_t: fs[1] })
    });
    Ok(Verdict::from_first(violation))
}

/// A point below which `f` was observed to drop under `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    pub target: f64,
    pub t: f64,
    pub value: f64,
}

/// "divergence not observed": the probe reached the underflow floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceFailure {
    pub target: f64,
    pub smallest_t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F2Report {
    pub witnesses: Vec<DivergenceWitness>,
    pub verdict: Verdict<DivergenceFailure>,
}

impl F2Report {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Probes divergence at `0+`: for every target, halve `t` starting from
/// `t_hi / 2` until `f(t) < target` or the underflow floor is crossed.
pub fn check_f2<G: Evaluate + ?Sized>(g: &G, targets: &[f64], t_hi: f64) -> Result<F2Report> {
    if !(t_hi > 0.0) || !t_hi.is_finite() {
        return Err(Error::InvalidArgument(format!("t_hi must be a finite positive real, got {t_hi}")));
    }
    let mut witnesses = Vec::with_capacity(targets.len());
    for &target in targets {
        if target.is_nan() {
            return Err(Error::InvalidArgument("target is NaN".into()));
        }
        match first_below(g, target, t_hi)? {
            Probe::Found { t, value } => witnesses.push(DivergenceWitness { target, t, value }),
            Probe::Floor { smallest_t, value } => {
                return Ok(F2Report {
                    witnesses,
                    verdict: Verdict::Fail(DivergenceFailure { target, smallest_t, value }),
                });
            }
        }
    }
    Ok(F2Report { witnesses, verdict: Verdict::Pass })
}

enum Probe {
    /// `f(t) < target`; `t` is the first such probe.
    Found { t: f64, value: f64 },
    Floor { smallest_t: f64, value: f64 },
}

/// Geometric probe `hi/2, hi/4, …` down to the underflow floor.
fn first_below<G: Evaluate + ?Sized>(g: &G, target: f64, hi: f64) -> Result<Probe> {
    let mut t = hi * 0.5;
    loop {
        let value = g.eval(t)?;
        if value < target {
            return Ok(Probe::Found { t, value });
        }
        let next = t * 0.5;
        if next < UNDERFLOW_FLOOR {
            return Ok(Probe::Floor { smallest_t: t, value });
        }
        t = next;
    }
}

/// Largest (up to a relative `tol`) `δ ∈ (0, search_hi]` with `f(t) < y` for
/// every `0 < t < δ`.
///
/// The bracket is found by halving from `search_hi`, then refined by bisection
/// on the monotone `f` until `hi - lo ≤ tol·lo`. The returned value is the
/// lower end shrunk by one more `tol` step, so `f(δ) < y` holds strictly.
/// On a plateau at level `y` the result is conservative: it stops at the
/// left edge of the plateau.
pub fn delta_below<G: Evaluate + ?Sized>(g: &G, y: f64, search_hi: f64, tol: f64) -> Result<f64> {
    if !(search_hi > 0.0) || !search_hi.is_finite() {
        return Err(Error::InvalidArgument(format!("search_hi must be a finite positive real, got {search_hi}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tol must lie in (0, 1), got {tol}")));
    }
    if y.is_nan() {
        return Err(Error::InvalidArgument("target level is NaN".into()));
    }

    if g.eval(search_hi)? < y {
        return Ok(search_hi);
    }

    let (mut lo, mut hi) = match first_below(g, y, search_hi)? {
        Probe::Found { t, .. } => (t, t * 2.0),
        Probe::Floor { smallest_t, value } => {
            return Err(Error::NoDelta { target: y, smallest_t, value });
        }
    };
    // invariant: f(lo) < y <= f(hi)
    while hi - lo > tol * lo {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if g.eval(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo * (1.0 - tol))
}
