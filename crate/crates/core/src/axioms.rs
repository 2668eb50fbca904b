//! Axiom checks for F-metric spaces on a finite carrier.
//!
//! The chain condition quantifies over every finite chain between two points.
//! On a finite carrier with nonnegative weights the infimum over chains is
//! attained by a simple path, and a nondecreasing generator makes the
//! condition hold for all chains iff it holds at the minimal chain sum. So
//! [`check_d3`] runs one all-pairs shortest path pass; [`check_d3_bruteforce`]
//! enumerates chains explicitly and serves as the independent oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Witness;
use crate::space::{FiniteSpace, Matrix};
use crate::verdict::Verdict;

/// Absolute slack applied after generator evaluation and in triangle checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on the number of chains the brute-force oracle may visit.
pub const DEFAULT_CHAIN_CAP: u64 = 10_000_000;

pub const CARRIER_NOTE: &str =
    "finite carrier: chains range over the loaded points only, so the chain infimum is the all-pairs shortest path";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub i: usize,
    pub j: usize,
}

/// All-pairs minimal chain sums plus next-hop table for path reconstruction.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    sums: Matrix,
    next: Vec<usize>,
}

impl ShortestPaths {
    /// Floyd–Warshall with a fixed elimination order `k = 0, 1, …, n-1` and a
    /// strict improvement test, so ties keep the earliest intermediate found.
    pub fn compute(dist: &Matrix) -> Self {
        let n = dist.len();
        let mut sums = dist.clone();
        let mut next: Vec<usize> = (0..n * n).map(|idx| idx % n).collect();
        for k in 0..n {
            for i in 0..n {
                let dik = sums[(i, k)];
                if i == k {
                    continue;
                }
                for j in 0..n {
                    let via = dik + sums[(k, j)];
                    if via < sums[(i, j)] {
                        sums.set(i, j, via);
                        next[i * n + j] = next[i * n + k];
                    }
                }
            }
        }
        ShortestPaths { sums, next }
    }

    pub fn sums(&self) -> &Matrix {
        &self.sums
    }

    pub fn into_sums(self) -> Matrix {
        self.sums
    }

    /// Point sequence of a minimal chain from `i` to `j` (both endpoints included).
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let n = self.sums.len();
        let mut path = vec![i];
        let mut at = i;
        while at != j && path.len() <= n {
            at = self.next[at * n + j];
            path.push(at);
        }
        path
    }
}

/// Minimal chain sum between every pair of points.
pub fn min_chain_sums(space: &FiniteSpace) -> Matrix {
    ShortestPaths::compute(space.dist()).into_sums()
}

/// Identity of indiscernibles: every off-diagonal distance is positive.
pub fn check_d1(space: &FiniteSpace) -> Verdict<Pair> {
    Verdict::from_first(space.dist().upper_pairs().find(|&(_, _, v)| v <= 0.0).map(|(i, j, _)| Pair { i, j }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricPair {
    pub i: usize,
    pub j: usize,
    pub forward: f64,
    pub backward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2Report {
    pub verdict: Verdict<AsymmetricPair>,
    pub symmetrized_at_load: bool,
}

impl D2Report {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Symmetry. Already a load-time invariant; kept as an explicit report line.
pub fn check_d2(space: &FiniteSpace) -> D2Report {
    let d = space.dist();
    let n = space.len();
    let violation = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| d[(i, j)] != d[(j, i)])
        .map(|(i, j)| AsymmetricPair { i, j, forward: d[(i, j)], backward: d[(j, i)] });
    D2Report { verdict: Verdict::from_first(violation), symmetrized_at_load: space.was_symmetrized() }
}

/// Evidence for a failed chain inequality `f(D(x,y)) ≤ f(chain sum) + α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainViolation {
    pub pair: Pair,
    pub chain: Vec<usize>,
    pub direct: f64,
    pub chain_sum: f64,
    /// `f(D(x, y))`
    pub lhs: f64,
    /// `f(chain_sum) + α`; `-∞` (serialized as `null`) when the chain sum is zero.
    pub rhs: f64,
}

/// `f(sum) + α`, reading `f(0)` as its limit `-∞`.
fn chain_side(w: &Witness, sum: f64) -> Result<f64> {
    if sum == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(w.eval(sum)? + w.alpha)
    }
}

/// Chain inequality on every pair with positive distance, via minimal chain sums.
pub fn check_d3(space: &FiniteSpace, w: &Witness, tol: f64) -> Result<Verdict<ChainViolation>> {
    let paths = ShortestPaths::compute(space.dist());
    check_d3_with(space, w, tol, &paths)
}

fn check_d3_with(space: &FiniteSpace, w: &Witness, tol: f64, paths: &ShortestPaths) -> Result<Verdict<ChainViolation>> {
    for (i, j, direct) in space.dist().upper_pairs() {
        if direct <= 0.0 {
            continue;
        }
        let chain_sum = paths.sums()[(i, j)];
        let lhs = w.eval(direct)?;
        let rhs = chain_side(w, chain_sum)?;
        if lhs > rhs + tol {
            return Ok(Verdict::Fail(ChainViolation {
                pair: Pair { i, j },
                chain: paths.path(i, j),
                direct,
                chain_sum,
                lhs,
                rhs,
            }));
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceOutcome {
    pub verdict: Verdict<ChainViolation>,
    pub chains_visited: u64,
}

/// Oracle for [`check_d3`]: tests the inequality on every chain of at most
/// `max_len` points, skipping immediate repetitions (they add zero weight).
pub fn check_d3_bruteforce(space: &FiniteSpace, w: &Witness, max_len: usize, tol: f64) -> Result<BruteForceOutcome> {
    check_d3_bruteforce_capped(space, w, max_len, tol, DEFAULT_CHAIN_CAP)
}

pub fn check_d3_bruteforce_capped(
    space: &FiniteSpace,
    w: &Witness,
    max_len: usize,
    tol: f64,
    cap: u64,
) -> Result<BruteForceOutcome> {
    if max_len < 2 {
        return Err(Error::InvalidArgument(format!("max_len must be at least 2, got {max_len}")));
    }
    let mut search = ChainSearch { space, w, max_len, tol, cap, visited: 0, chain: Vec::with_capacity(max_len) };
    for (i, j, direct) in space.dist().upper_pairs() {
        if direct <= 0.0 {
            continue;
        }
        let lhs = w.eval(direct)?;
        search.chain.clear();
        search.chain.push(i);
        if let Some(v) = search.walk(j, direct, lhs, 0.0)? {
            return Ok(BruteForceOutcome { verdict: Verdict::Fail(v), chains_visited: search.visited });
        }
    }
    Ok(BruteForceOutcome { verdict: Verdict::Pass, chains_visited: search.visited })
}

struct ChainSearch<'a> {
    space: &'a FiniteSpace,
    w: &'a Witness,
    max_len: usize,
    tol: f64,
    cap: u64,
    visited: u64,
    chain: Vec<usize>,
}

impl ChainSearch<'_> {
    fn walk(&mut self, target: usize, direct: f64, lhs: f64, sum: f64) -> Result<Option<ChainViolation>> {
        if self.chain.len() == self.max_len {
            return Ok(None);
        }
        let last = *self.chain.last().expect("chain starts non-empty");
        for next in 0..self.space.len() {
            if next == last {
                continue;
            }
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::ChainBudget { cap: self.cap });
            }
            let extended = sum + self.space.d(last, next);
            self.chain.push(next);
            if next == target {
                let rhs = chain_side(self.w, extended)?;
                if lhs > rhs + self.tol {
                    return Ok(Some(ChainViolation {
                        pair: Pair { i: self.chain[0], j: target },
                        chain: self.chain.clone(),
                        direct,
                        chain_sum: extended,
                        lhs,
                        rhs,
                    }));
                }
            }
            if let Some(v) = self.walk(target, direct, lhs, extended)? {
                return Ok(Some(v));
            }
            self.chain.pop();
        }
        Ok(None)
    }
}

/// Verdict on all three axioms for one witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub carrier: String,
    pub witness: Witness,
    pub tol: f64,
    pub d1: Verdict<Pair>,
    pub d2: D2Report,
    pub d3: Verdict<ChainViolation>,
    pub passed: bool,
}

pub fn check_axioms(space: &FiniteSpace, w: &Witness, tol: f64) -> Result<AxiomReport> {
    let d1 = check_d1(space);
    let d2 = check_d2(space);
    let d3 = check_d3(space, w, tol)?;
    let passed = d1.passed() && d2.passed() && d3.passed();
    Ok(AxiomReport { carrier: CARRIER_NOTE.to_owned(), witness: *w, tol, d1, d2, d3, passed })
}

/// A triple `(x, y, z)` with `D(x,z) > D(x,y) + D(y,z) + tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub direct: f64,
    pub via: f64,
}

/// Triangle inequality over all ordered triples, first violation in
/// lexicographic `(x, y, z)` order.
pub fn is_metric(space: &FiniteSpace, tol: f64) -> Verdict<TriangleViolation> {
    triangle_violation(space.dist(), tol).map_or(Verdict::Pass, Verdict::Fail)
}

pub(crate) fn triangle_violation(d: &Matrix, tol: f64) -> Option<TriangleViolation> {
    let n = d.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let direct = d[(x, z)];
                let via = d[(x, y)] + d[(y, z)];
                if direct > via + tol {
                    return Some(TriangleViolation { x, y, z, direct, via });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Generator;

    fn squared(n: usize) -> FiniteSpace {
        FiniteSpace::from_fn(n, |i, j| (i as f64 - j as f64).powi(2)).unwrap()
    }

    fn log(alpha: f64) -> Witness {
        Witness::new(Generator::Log, alpha).unwrap()
    }

    #[test]
    fn d1_cases() {
        let ok = FiniteSpace::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(check_d1(&ok).passed());
        let zero = FiniteSpace::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(check_d1(&zero), Verdict::Fail(Pair { i: 0, j: 1 }));
        assert!(check_d1(&squared(4)).passed());
    }

    #[test]
    fn d2_passes_and_notes_symmetrization() {
        assert!(check_d2(&squared(4)).passed());
        assert!(!check_d2(&squared(4)).symmetrized_at_load);
        let s = FiniteSpace::from_rows(vec![vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]]).unwrap();
        let r = check_d2(&s);
        assert!(r.passed() && r.symmetrized_at_load);
    }

    #[test]
    fn chain_sums_of_squared_space() {
        let m = min_chain_sums(&squared(4));
        assert_eq!(m[(0, 3)], 3.0);
        assert_eq!(m[(0, 1)], 1.0);
        for i in 0..4 {
            assert_eq!(m[(i, i)], 0.0);
            for j in 0..4 {
                assert_eq!(m[(i, j)], (i as f64 - j as f64).abs());
            }
        }
        let paths = ShortestPaths::compute(squared(4).dist());
        assert_eq!(paths.path(0, 3), vec![0, 1, 2, 3]);
        assert_eq!(paths.path(3, 0), vec![3, 2, 1, 0]);
        assert_eq!(paths.path(2, 2), vec![2]);
    }

    #[test]
    fn d3_squared_space() {
        assert!(check_d3(&squared(4), &log(3f64.ln()), DEFAULT_TOL).unwrap().passed());

        let v = check_d3(&squared(4), &log(1.5f64.ln()), DEFAULT_TOL).unwrap();
        let ev = v.evidence().expect("fails with ln 1.5");
        assert_eq!(ev.pair, Pair { i: 0, j: 2 });
        assert_eq!(ev.chain, vec![0, 1, 2]);
        assert_eq!(ev.chain_sum, 2.0);
        assert!((ev.lhs - 4f64.ln()).abs() < 1e-15);
        assert!((ev.rhs - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn d3_metric_with_zero_alpha() {
        let unit = FiniteSpace::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        assert!(check_d3(&unit, &log(0.0), DEFAULT_TOL).unwrap().passed());
    }

    #[test]
    fn d3_shortcut_through_coincident_point() {
        let s = FiniteSpace::from_rows(vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0], vec![1.0, 2.0, 0.0]]).unwrap();
        let v = check_d3(&s, &log(0.0), DEFAULT_TOL).unwrap();
        let ev = v.evidence().unwrap();
        assert_eq!(ev.pair, Pair { i: 1, j: 2 });
        assert_eq!(ev.chain, vec![1, 0, 2]);
    }

    #[test]
    fn d3_zero_chain_sum_reads_as_violation() {
        let s = FiniteSpace::from_rows(vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        let v = check_d3(&s, &log(5.0), DEFAULT_TOL).unwrap();
        let ev = v.evidence().unwrap();
        assert_eq!(ev.pair, Pair { i: 0, j: 2 });
        assert_eq!(ev.chain_sum, 0.0);
        assert_eq!(ev.rhs, f64::NEG_INFINITY);
    }

    #[test]
    fn bruteforce_examples() {
        let out = check_d3_bruteforce(&squared(4), &log(3f64.ln()), 4, DEFAULT_TOL).unwrap();
        assert!(out.verdict.passed());

        let out = check_d3_bruteforce(&squared(3), &log(1.5f64.ln()), 3, DEFAULT_TOL).unwrap();
        let ev = out.verdict.evidence().unwrap();
        assert_eq!(ev.chain, vec![0, 1, 2]);

        let two = FiniteSpace::from_rows(vec![vec![0.0, 7.0], vec![7.0, 0.0]]).unwrap();
        for g in Generator::CATALOG {
            let w = Witness::new(g, 0.0).unwrap();
            assert!(check_d3_bruteforce(&two, &w, 2, DEFAULT_TOL).unwrap().verdict.passed());
        }
    }

    #[test]
    fn bruteforce_budget_and_arguments() {
        let s = FiniteSpace::from_fn(6, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        let err = check_d3_bruteforce_capped(&s, &log(0.0), 6, DEFAULT_TOL, 100).unwrap_err();
        assert!(matches!(err, Error::ChainBudget { cap: 100 }));
        assert!(check_d3_bruteforce(&s, &log(0.0), 1, DEFAULT_TOL).is_err());
    }

    #[test]
    fn axioms_aggregate() {
        assert!(check_axioms(&squared(4), &log(3f64.ln()), DEFAULT_TOL).unwrap().passed);
        let r = check_axioms(&squared(3), &log(1.5f64.ln()), DEFAULT_TOL).unwrap();
        assert!(!r.passed && r.d1.passed() && r.d2.passed() && !r.d3.passed());
        let unit = FiniteSpace::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        assert!(check_axioms(&unit, &log(0.0), DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn metric_check() {
        let ev = is_metric(&squared(4), DEFAULT_TOL);
        let t = ev.evidence().unwrap();
        assert_eq!((t.x, t.y, t.z), (0, 1, 2));
        assert_eq!((t.direct, t.via), (4.0, 2.0));
        let unit = FiniteSpace::from_fn(3, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        assert!(is_metric(&unit, DEFAULT_TOL).passed());
        let two = FiniteSpace::from_rows(vec![vec![0.0, 9.0], vec![9.0, 0.0]]).unwrap();
        assert!(is_metric(&two, DEFAULT_TOL).passed());
    }
}
