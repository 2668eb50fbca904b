//! The chain-infimum metric `d(x,y) = inf Σ D(u_i, u_{i+1})` induced by an
//! F-metric, computed as all-pairs shortest paths on the finite carrier.

use serde::{Deserialize, Serialize};

use crate::axioms::{check_axioms, min_chain_sums, triangle_violation};
use crate::error::{Error, Result};
use crate::generator::Witness;
use crate::space::{DerivedFrom, FiniteSpace, Matrix, SpaceDocument};

#[derive(Debug, Clone, PartialEq)]
pub struct InducedMetric {
    base: FiniteSpace,
    d: Matrix,
    witness: Witness,
}

impl InducedMetric {
    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// The induced distances as a plain space (same labels).
    pub fn as_space(&self) -> FiniteSpace {
        FiniteSpace::new(self.base.labels().to_vec(), self.d.to_rows()).expect("induced metric is a valid table")
    }

    /// Space document of `d` with a `derived_from` block naming the witness.
    pub fn to_document(&self) -> SpaceDocument {
        SpaceDocument {
            labels: self.base.labels().to_vec(),
            matrix: self.d.to_rows(),
            derived_from: Some(DerivedFrom::from(self.witness)),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }
}

/// Builds `d` for a space that is an F-metric under `w`, then re-checks
/// that `d` is a metric. A failure of the latter is an implementation bug.
pub fn induced_metric(space: &FiniteSpace, w: &Witness, tol: f64) -> Result<InducedMetric> {
    let report = check_axioms(space, w, tol)?;
    if !report.passed {
        return Err(Error::NotFMetric(Box::new(report)));
    }
    let d = min_chain_sums(space);
    validate_metric(&d, tol)?;
    Ok(InducedMetric { base: space.clone(), d, witness: *w })
}

fn validate_metric(d: &Matrix, tol: f64) -> Result<()> {
    let n = d.len();
    for i in 0..n {
        if d[(i, i)] != 0.0 {
            return Err(Error::InducedNotMetric(format!("d({i},{i}) = {}", d[(i, i)])));
        }
        for j in 0..n {
            if d[(i, j)] != d[(j, i)] {
                return Err(Error::InducedNotMetric(format!("d({i},{j}) != d({j},{i})")));
            }
            if i != j && !(d[(i, j)] > 0.0) {
                return Err(Error::InducedNotMetric(format!("d({i},{j}) = {} is not positive", d[(i, j)])));
            }
        }
    }
    if let Some(t) = triangle_violation(d, tol) {
        return Err(Error::InducedNotMetric(format!(
            "triangle ({}, {}, {}): {} > {}",
            t.x, t.y, t.z, t.direct, t.via
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRelation {
    pub i: usize,
    pub j: usize,
    /// `D(i, j)`
    pub direct: f64,
    /// `d(i, j)`
    pub induced: f64,
    /// `d ≤ D`
    pub raw_holds: bool,
    /// `f(D)`
    pub f_direct: f64,
    /// `f(d) + α`
    pub f_induced_plus_alpha: f64,
    /// `f(D) ≤ f(d) + α`
    pub f_holds: bool,
}

/// Raw-scale and f-scale relations between `D` and `d`, kept separate since
/// `f(D) ≤ f(d) + α` cannot be inverted for a non-strictly increasing `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub witness: Witness,
    pub tol: f64,
    pub pairs: Vec<PairRelation>,
    pub passed: bool,
}

pub fn compare(space: &FiniteSpace, im: &InducedMetric, tol: f64) -> Result<CompareReport> {
    if space.len() != im.len() {
        return Err(Error::DimensionMismatch { expected: im.len(), actual: space.len() });
    }
    let w = im.witness;
    let mut pairs = Vec::new();
    for (i, j, direct) in space.dist().upper_pairs() {
        let induced = im.d[(i, j)];
        let f_direct = w.eval(direct)?;
        let f_induced_plus_alpha = w.eval(induced)? + w.alpha;
        pairs.push(PairRelation {
            i,
            j,
            direct,
            induced,
            raw_holds: induced <= direct + tol,
            f_direct,
            f_induced_plus_alpha,
            f_holds: f_direct <= f_induced_plus_alpha + tol,
        });
    }
    let passed = pairs.iter().all(|p| p.raw_holds && p.f_holds);
    Ok(CompareReport { witness: w, tol, pairs, passed })
}
