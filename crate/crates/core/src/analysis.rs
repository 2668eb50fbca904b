//! Desk-scale exploration: open balls under `D` and `d`, minimal slack
//! fitting, and a seeded search for F-metrics that are not metrics.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{check_axioms, is_metric, min_chain_sums, AxiomReport, Pair, TriangleViolation};
use crate::error::{Error, Result};
use crate::generator::{Evaluate, Generator, Witness};
use crate::induced::InducedMetric;
use crate::space::{FiniteSpace, Matrix, SpaceDocument};
use crate::verdict::Verdict;

/// Which distance a ball is taken under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Under {
    /// the F-metric `D`
    #[serde(rename = "D")]
    Base,
    /// the induced metric `d`
    #[serde(rename = "d")]
    Induced,
}

impl fmt::Display for Under {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Under::Base => "D",
            Under::Induced => "d",
        })
    }
}

impl FromStr for Under {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" => Ok(Under::Base),
            "d" => Ok(Under::Induced),
            other => Err(Error::InvalidSelector(other.to_owned())),
        }
    }
}

/// Sources of distance matrices a ball can be taken in.
pub trait Distances {
    fn distances(&self, under: Under) -> Result<&Matrix>;
}

impl Distances for FiniteSpace {
    fn distances(&self, under: Under) -> Result<&Matrix> {
        match under {
            Under::Base => Ok(self.dist()),
            Under::Induced => Err(Error::InvalidSelector("d (a bare space has no induced metric)".into())),
        }
    }
}

impl Distances for InducedMetric {
    fn distances(&self, under: Under) -> Result<&Matrix> {
        Ok(match under {
            Under::Base => self.base().dist(),
            Under::Induced => self.d(),
        })
    }
}

/// Open ball `{ j : dist(center, j) < radius }`; members ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
    pub members: Vec<usize>,
    pub under: Under,
}

impl Ball {
    pub fn contains(&self, j: usize) -> bool {
        self.members.binary_search(&j).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.members.iter().all(|&j| other.contains(j))
    }
}

pub fn ball<S: Distances + ?Sized>(source: &S, center: usize, radius: f64, under: Under) -> Result<Ball> {
    let m = source.distances(under)?;
    if center >= m.len() {
        return Err(Error::InvalidCenter { center, n: m.len() });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let members = m.row(center).iter().enumerate().filter(|&(_, &v)| v < radius).map(|(j, _)| j).collect();
    Ok(Ball { center, radius, members, under })
}

/// `r_prime` is the largest `r' ≤ radius` with `B_inner(center, r') ⊆ B_outer(center, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingRow {
    pub center: usize,
    pub radius: f64,
    pub outer: Under,
    pub inner: Under,
    pub r_prime: f64,
}

/// For every center and every realized distance `r` (the distinct positive
/// entries of `D` and `d`), the nesting radius in both directions.
///
/// On a finite space the inner ball stays inside the outer one exactly while
/// `r'` does not exceed the inner distance to the nearest point outside the
/// outer ball, so the largest admissible `r'` is that distance (capped at `r`).
pub fn ball_nesting_evidence(space: &FiniteSpace, im: &InducedMetric) -> Result<Vec<NestingRow>> {
    if space.len() != im.len() {
        return Err(Error::DimensionMismatch { expected: im.len(), actual: space.len() });
    }
    let mut radii: Vec<f64> = space
        .dist()
        .upper_pairs()
        .chain(im.d().upper_pairs())
        .map(|(_, _, v)| v)
        .filter(|&v| v > 0.0)
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let mut rows = Vec::with_capacity(2 * space.len() * radii.len());
    for center in 0..space.len() {
        for &radius in &radii {
            for (outer, inner) in [(Under::Base, Under::Induced), (Under::Induced, Under::Base)] {
                let r_prime = nesting_radius(im, center, radius, outer, inner)?;
                rows.push(NestingRow { center, radius, outer, inner, r_prime });
            }
        }
    }
    Ok(rows)
}

pub fn nesting_radius(im: &InducedMetric, center: usize, radius: f64, outer: Under, inner: Under) -> Result<f64> {
    let outer_ball = ball(im, center, radius, outer)?;
    let inner_row = im.distances(inner)?.row(center);
    let nearest_outside = (0..im.len())
        .filter(|&j| !outer_ball.contains(j))
        .map(|j| inner_row[j])
        .fold(f64::INFINITY, f64::min);
    Ok(nearest_outside.min(radius))
}

/// Smallest slack making the chain condition hold, with the pair that binds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinAlpha {
    pub generator: Generator,
    pub alpha_star: f64,
    /// `None` when every pair already holds with `α = 0`.
    pub binding: Option<Pair>,
}

/// `α* = max(0, max_{i≠j} f(D(i,j)) − f(m(i,j)))` with `m` the minimal chain sums.
pub fn min_alpha(space: &FiniteSpace, g: Generator) -> Result<MinAlpha> {
    let sums = min_chain_sums(space);
    let mut best = 0.0;
    let mut binding = None;
    for (i, j, direct) in space.dist().upper_pairs() {
        if direct <= 0.0 {
            continue;
        }
        let chain = sums[(i, j)];
        if chain <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "pair ({i}, {j}) has a zero-length chain; no finite alpha exists"
            )));
        }
        let gap = g.eval(direct)? - g.eval(chain)?;
        if gap > best {
            best = gap;
            binding = Some(Pair { i, j });
        }
    }
    Ok(MinAlpha { generator: g, alpha_star: best, binding })
}

/// Symmetric matrix with off-diagonal entries uniform in `(0, scale]`.
pub fn random_space(n: usize, scale: f64, seed: u64) -> Result<FiniteSpace> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("random spaces need at least 2 points, got {n}")));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(format!("scale must be a finite positive real, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.random();
            let v = scale * (1.0 - u);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    Ok(FiniteSpace::from_rows(rows)?)
}

/// `D(i, j) = (i − j)²` on `{0, …, n−1}`.
pub fn squared_integer_space(n: usize) -> FiniteSpace {
    FiniteSpace::from_fn(n, |i, j| (i as f64 - j as f64).powi(2)).expect("squared integers form a valid table")
}

/// Per-trial seed, derived by counter so trials are independent of order.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer over (seed, trial)
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub trial: u64,
    pub space: SpaceDocument,
    pub report: AxiomReport,
    pub metric: Verdict<TriangleViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub generator: Generator,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub tol: f64,
    pub hits: Vec<SearchHit>,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search results always serialize")
    }

    /// Parses and re-checks every hit: F-metric under the recorded witness and not a metric.
    pub fn from_json(text: &str) -> Result<Self> {
        let result: SearchResult = serde_json::from_str(text)?;
        result.revalidate()?;
        Ok(result)
    }

    pub fn revalidate(&self) -> Result<()> {
        let w = Witness::new(self.generator, self.alpha)?;
        for hit in &self.hits {
            let space = hit.space.clone().into_space()?;
            if !check_axioms(&space, &w, self.tol)?.passed {
                return Err(Error::InvalidHit { trial: hit.trial, reason: "fails the F-metric axioms".into() });
            }
            if is_metric(&space, self.tol).passed() {
                return Err(Error::InvalidHit { trial: hit.trial, reason: "is a metric".into() });
            }
        }
        Ok(())
    }
}

/// Random spaces that are F-metrics under `(g, alpha)` but not metrics.
/// Trial 0 is the squared-integer space on `n` points; the rest are
/// [`random_space`] draws with unit scale and per-trial seeds.
pub fn search_fmetric_not_metric(
    g: Generator,
    alpha: f64,
    n: usize,
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<SearchResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let w = Witness::new(g, alpha)?;
    let mut hits = Vec::new();
    for trial in 0..trials {
        let space = if trial == 0 { squared_integer_space(n.max(2)) } else { random_space(n, 1.0, trial_seed(seed, trial))? };
        let report = check_axioms(&space, &w, tol)?;
        if !report.passed {
            continue;
        }
        let metric = is_metric(&space, tol);
        if metric.passed() {
            continue;
        }
        hits.push(SearchHit { trial, space: space.to_document(), report, metric });
    }
    Ok(SearchResult { generator: g, alpha, n, seed, trials, tol, hits })
}
