//! Randomized regularity sweep: generate, rescale so the regularity premise
//! fires, validate, certify, verify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::trial_seed;
use crate::axioms::check_axioms;
use crate::chittenden::{delta_tol, phi_certificate, verify_uniform_regularity, RegularityCertificate, RegularityViolation};
use crate::error::{Error, Result};
use crate::generator::{Generator, Witness};
use crate::space::FiniteSpace;

pub const DEFAULT_EPSILONS: [f64; 4] = [1e-3, 1e-1, 1.0, 10.0];

/// Largest jitter factor applied to a planar Euclidean metric.
const MAX_SPREAD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub generator: Generator,
    pub alpha: f64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub tol: f64,
}

/// How a base space is rescaled for one `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rescale {
    /// largest entry just below `2φ(ε)`
    Tight,
    /// smallest off-diagonal entry at `φ(ε)/2`; larger entries may exceed `ε`
    Wide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofStepViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub trial: u64,
    pub epsilon: f64,
    pub rescale: Rescale,
    pub regularity: Option<RegularityViolation>,
    pub proof_step: Option<ProofStepViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub certificate: RegularityCertificate,
    /// base spaces drawn
    pub generated: u64,
    /// rescaled instances examined (`generated × |ε| × 2`)
    pub instances: u64,
    /// instances passing the F-metric axioms
    pub valid: u64,
    /// the subset of `valid` rescaled with [`Rescale::Tight`]
    pub valid_tight: u64,
    pub triples_checked: u64,
    pub premises_fired: u64,
    /// violating triples of uniform regularity across valid instances
    pub violations: u64,
    /// triples breaking `f(D(x,z)) ≤ f(D(x,y) + D(y,z)) + α`
    pub proof_step_violations: u64,
    pub first_failure: Option<SweepFailure>,
    pub passed: bool,
}

/// Planar Euclidean metric on `n` random points, each distance multiplied by
/// an independent factor in `[1, spread]` with `spread` drawn from `[1, 4]`.
pub fn jittered_space(n: usize, seed: u64) -> Result<FiniteSpace> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sweep spaces need at least 2 points, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = rng.random_range(1.0..=MAX_SPREAD);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (points[i].0 - points[j].0, points[i].1 - points[j].1);
            let v = dx.hypot(dy) * rng.random_range(1.0..=spread);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    Ok(FiniteSpace::from_rows(rows)?)
}

pub fn rescaled(space: &FiniteSpace, phi: f64, mode: Rescale) -> Result<FiniteSpace> {
    let off: Vec<f64> = space.dist().upper_pairs().map(|(_, _, v)| v).filter(|&v| v > 0.0).collect();
    let (Some(min), Some(max)) =
        (off.iter().copied().reduce(f64::min), off.iter().copied().reduce(f64::max))
    else {
        return Ok(space.clone());
    };
    let factor = match mode {
        Rescale::Tight => 2.0 * phi * (1.0 - 1e-6) / max,
        Rescale::Wide => 0.5 * phi / min,
    };
    Ok(space.scaled(factor)?)
}

/// First triple breaking the three-point chain inequality, if any.
pub fn proof_step_violation(space: &FiniteSpace, w: &Witness, tol: f64) -> Result<Option<ProofStepViolation>> {
    let n = space.len();
    for x in 0..n {
        for z in 0..n {
            if x == z {
                continue;
            }
            let lhs = w.eval(space.d(x, z))?;
            for y in 0..n {
                let rhs = w.eval(space.d(x, y) + space.d(y, z))? + w.alpha;
                if lhs > rhs + tol {
                    return Ok(Some(ProofStepViolation { x, y, z, lhs, rhs }));
                }
            }
        }
    }
    Ok(None)
}

fn count_proof_step_violations(space: &FiniteSpace, w: &Witness, tol: f64) -> Result<u64> {
    let n = space.len();
    let mut count = 0;
    for x in 0..n {
        for z in (0..n).filter(|&z| z != x) {
            let lhs = w.eval(space.d(x, z))?;
            for y in 0..n {
                if lhs > w.eval(space.d(x, y) + space.d(y, z))? + w.alpha + tol {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

pub fn regularity_sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let w = Witness::new(config.generator, config.alpha)?;
    let certificate = phi_certificate(&w, &config.epsilons, delta_tol(config.tol))?;

    let mut report = SweepReport {
        config: config.clone(),
        certificate: certificate.clone(),
        generated: 0,
        instances: 0,
        valid: 0,
        valid_tight: 0,
        triples_checked: 0,
        premises_fired: 0,
        violations: 0,
        proof_step_violations: 0,
        first_failure: None,
        passed: true,
    };

    for trial in 0..config.trials {
        let base = jittered_space(config.n, trial_seed(config.seed, trial))?;
        report.generated += 1;
        for entry in &certificate.entries {
            for mode in [Rescale::Tight, Rescale::Wide] {
                let space = rescaled(&base, entry.phi, mode)?;
                report.instances += 1;
                if !check_axioms(&space, &w, config.tol)?.passed {
                    continue;
                }
                report.valid += 1;
                if mode == Rescale::Tight {
                    report.valid_tight += 1;
                }

                let reg = verify_uniform_regularity(&space, &w, &certificate)?;
                report.triples_checked += reg.triples_checked;
                report.premises_fired += reg.premises_fired;
                report.violations += reg.violations.len() as u64;
                let steps = count_proof_step_violations(&space, &w, config.tol)?;
                report.proof_step_violations += steps;

                if report.first_failure.is_none() && (!reg.passed || steps > 0) {
                    report.first_failure = Some(SweepFailure {
                        trial,
                        epsilon: entry.epsilon,
                        rescale: mode,
                        regularity: reg.violations.first().cloned(),
                        proof_step: proof_step_violation(&space, &w, config.tol)?,
                    });
                }
            }
        }
    }
    report.passed = report.violations == 0 && report.proof_step_violations == 0;
    Ok(report)
}
