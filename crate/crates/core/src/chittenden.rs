//! Uniform regularity certificates.
//!
//! For an F-metric with witness `(f, α)` and any `ε > 0`, pick `δ > 0` with
//! `f(t) < f(ε) − α` for all `0 < t < δ` and set `φ(ε) = δ/2`. Whenever
//! `D(x,y) < φ` and `D(y,z) < φ`, the three-point chain gives
//! `f(D(x,z)) ≤ f(D(x,y) + D(y,z)) + α < f(ε)`, hence `D(x,z) < ε`.
//! Together with separation and symmetry this is the hypothesis set of
//! Chittenden's metrization theorem.

use serde::{Deserialize, Serialize};

use crate::axioms::{check_axioms, check_d1, check_d2, D2Report, Pair};
use crate::error::{Error, Result};
use crate::generator::{delta_below, Generator, Witness};
use crate::space::FiniteSpace;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub epsilon: f64,
    pub delta: f64,
    pub phi: f64,
}

/// `ε ↦ (δ, φ = δ/2)` for one witness, ascending in `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub generator: Generator,
    pub alpha: f64,
    pub entries: Vec<CertificateEntry>,
}

impl RegularityCertificate {
    pub fn witness(&self) -> Witness {
        Witness { generator: self.generator, alpha: self.alpha }
    }

    pub fn phi(&self, epsilon: f64) -> Option<f64> {
        self.entries.iter().find(|e| e.epsilon == epsilon).map(|e| e.phi)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }
}

/// `δ = delta_below(f, f(ε) − α, search_hi = ε, tol)` and `φ = δ/2` per `ε`.
///
/// `search_hi = ε` is enough because `f(ε) ≥ f(ε) − α`, so no `t ≥ ε` can
/// qualify.
pub fn phi_certificate(w: &Witness, epsilons: &[f64], tol: f64) -> Result<RegularityCertificate> {
    let mut sorted = epsilons.to_vec();
    if let Some(&bad) = sorted.iter().find(|&&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be a finite positive real, got {bad}")));
    }
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();

    let entries = sorted
        .into_iter()
        .map(|epsilon| {
            let level = w.eval(epsilon)? - w.alpha;
            let delta = delta_below(&w.generator, level, epsilon, tol)?;
            Ok(CertificateEntry { epsilon, delta, phi: delta / 2.0 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegularityCertificate { generator: w.generator, alpha: w.alpha, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityViolation {
    pub epsilon: f64,
    pub phi: f64,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub d_xy: f64,
    pub d_yz: f64,
    pub d_xz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    /// Ordered triples `(x, y, z)` with `x ≠ z`, summed over entries.
    pub triples_checked: u64,
    /// Triples where both hops were below `φ`.
    pub premises_fired: u64,
    pub violations: Vec<RegularityViolation>,
    pub passed: bool,
}

/// Checks `D(x,y) < φ ∧ D(y,z) < φ ⇒ D(x,z) < ε` for every entry and every
/// ordered triple. Triples with `x = z` hold trivially (`D(x,x) = 0`) and are
/// skipped.
pub fn verify_uniform_regularity(
    space: &FiniteSpace,
    w: &Witness,
    cert: &RegularityCertificate,
) -> Result<RegularityReport> {
    let cw = cert.witness();
    if cw.generator != w.generator || cw.alpha.to_bits() != w.alpha.to_bits() {
        return Err(Error::WitnessMismatch { cert: cw.to_string(), given: w.to_string() });
    }

    let n = space.len();
    let mut triples_checked = 0u64;
    let mut premises_fired = 0u64;
    let mut violations = Vec::new();
    for entry in &cert.entries {
        for x in 0..n {
            for y in 0..n {
                let d_xy = space.d(x, y);
                for z in 0..n {
                    if x == z {
                        continue;
                    }
                    triples_checked += 1;
                    let d_yz = space.d(y, z);
                    if !(d_xy < entry.phi && d_yz < entry.phi) {
                        continue;
                    }
                    premises_fired += 1;
                    let d_xz = space.d(x, z);
                    if !(d_xz < entry.epsilon) {
                        violations.push(RegularityViolation {
                            epsilon: entry.epsilon,
                            phi: entry.phi,
                            x,
                            y,
                            z,
                            d_xy,
                            d_yz,
                            d_xz,
                        });
                    }
                }
            }
        }
    }
    let passed = violations.is_empty();
    Ok(RegularityReport { triples_checked, premises_fired, violations, passed })
}

pub const CONCLUSION_VALID: &str = "metrizability certificate valid on this finite sample";
pub const CONCLUSION_INVALID: &str = "metrizability certificate not established";

/// Chittenden's three conditions: separation, symmetry, uniform regularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChittendenReport {
    pub witness: Witness,
    pub condition_i: Verdict<Pair>,
    pub condition_ii: D2Report,
    pub certificate: RegularityCertificate,
    pub condition_iii: RegularityReport,
    pub passed: bool,
    pub conclusion: String,
}

/// Refuses (with [`Error::NotFMetric`]) unless the space is an F-metric under `w`.
pub fn chittenden_report(space: &FiniteSpace, w: &Witness, epsilons: &[f64], tol: f64) -> Result<ChittendenReport> {
    let axioms = check_axioms(space, w, tol)?;
    if !axioms.passed {
        return Err(Error::NotFMetric(Box::new(axioms)));
    }
    let condition_i = check_d1(space);
    let condition_ii = check_d2(space);
    let certificate = phi_certificate(w, epsilons, delta_tol(tol))?;
    let condition_iii = verify_uniform_regularity(space, w, &certificate)?;
    let passed = condition_i.passed() && condition_ii.passed() && condition_iii.passed;
    let conclusion = if passed { CONCLUSION_VALID } else { CONCLUSION_INVALID }.to_owned();
    Ok(ChittendenReport { witness: *w, condition_i, condition_ii, certificate, condition_iii, passed, conclusion })
}

/// Relative bisection tolerance used for `δ` extraction: three orders of
/// magnitude finer than the comparison tolerance, floored at `1e-15`.
pub fn delta_tol(tol: f64) -> f64 {
    (tol * 1e-3).clamp(1e-15, 1e-3)
}
