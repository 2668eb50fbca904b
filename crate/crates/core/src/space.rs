//! Finite distance structures and their on-disk formats.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpaceError};
use crate::generator::{Generator, Witness};

/// Asymmetry at or below this is averaged away at load time; above it is an error.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Off-diagonal entries `(i, j, value)` with `i < j`.
    pub fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self[(i, j)])))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows())
    }
}

/// A labeled finite point set with a validated distance matrix `D`.
///
/// Invariants (enforced by every constructor): square, finite, nonnegative,
/// zero diagonal, exactly symmetric, distinct labels, at least one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    dist: Matrix,
    symmetrized: bool,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let n = rows.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(SpaceError::NotSquare { row, len: r.len(), n });
        }
        if labels.len() != n {
            return Err(SpaceError::LabelCount { labels: labels.len(), n });
        }
        let mut seen = HashSet::with_capacity(n);
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(SpaceError::DuplicateLabel(dup.clone()));
        }

        let mut dist = Matrix::from_fn(n, |i, j| rows[i][j]);
        for i in 0..n {
            for j in 0..n {
                let v = dist[(i, j)];
                if !v.is_finite() {
                    return Err(SpaceError::NonFinite(i, j));
                }
                if v < 0.0 {
                    return Err(SpaceError::Negative { i, j, value: v });
                }
            }
            if dist[(i, i)] != 0.0 {
                return Err(SpaceError::NonzeroDiagonal { i, value: dist[(i, i)] });
            }
        }

        let mut symmetrized = false;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (dist[(i, j)], dist[(j, i)]);
                if a == b {
                    continue;
                }
                if (a - b).abs() > SYMMETRY_TOL {
                    return Err(SpaceError::Asymmetric { i, j, a, b });
                }
                let mean = 0.5 * (a + b);
                dist.set(i, j, mean);
                dist.set(j, i, mean);
                symmetrized = true;
            }
        }

        Ok(FiniteSpace { labels, dist, symmetrized })
    }

    /// Space labelled `"0"`, `"1"`, ….
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(labels, rows)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self, SpaceError> {
        Self::from_rows(Matrix::from_fn(n, f).to_rows())
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self) -> &Matrix {
        &self.dist
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[(i, j)]
    }

    /// Whether load-time averaging removed a sub-tolerance asymmetry.
    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// Same labels, every distance multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self, SpaceError> {
        Self::new(self.labels.clone(), Matrix::from_fn(self.len(), |i, j| self.dist[(i, j)] * factor).to_rows())
    }

    pub fn to_document(&self) -> SpaceDocument {
        SpaceDocument { labels: self.labels.clone(), matrix: self.dist.to_rows(), derived_from: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpaceDocument = serde_json::from_str(text)?;
        Ok(doc.into_space()?)
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }

    /// Header row of labels followed by the matrix rows.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        Self::from_delimited(reader, b',')
    }

    pub fn from_delimited<R: Read>(reader: R, delimiter: u8) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let labels: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let parsed = record
                .iter()
                .map(|field| field.parse::<f64>().map_err(|_| SpaceError::Parse { row, text: field.to_owned() }))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        Ok(Self::new(labels, rows)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().flexible(false).from_writer(writer);
        wtr.write_record(&self.labels)?;
        for row in self.dist.rows() {
            wtr.write_record(row.iter().map(|v| v.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Provenance block attached to an induced-metric document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedFrom {
    pub generator: Generator,
    pub alpha: f64,
}

impl From<Witness> for DerivedFrom {
    fn from(w: Witness) -> Self {
        DerivedFrom { generator: w.generator, alpha: w.alpha }
    }
}

/// `{ "labels": [...], "matrix": [[...], ...] }`, optionally with `derived_from`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDocument {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<DerivedFrom>,
}

impl SpaceDocument {
    pub fn into_space(self) -> Result<FiniteSpace, SpaceError> {
        FiniteSpace::new(self.labels, self.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("space documents always serialize")
    }
}

/// Loads a space from a path, choosing the format by extension (`.csv`/`.tsv`
/// are separated values, everything else is JSON).
pub fn load_space(path: &std::path::Path) -> Result<FiniteSpace> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("csv") => FiniteSpace::from_csv(std::fs::File::open(path)?),
        Some("tsv") => FiniteSpace::from_delimited(std::fs::File::open(path)?, b'\t'),
        _ => FiniteSpace::from_json(&std::fs::read_to_string(path)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn loads_two_point_space() {
        let s = FiniteSpace::from_json(r#"{"labels":["a","b"],"matrix":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.d(0, 1), 1.0);
        assert!(!s.was_symmetrized());
    }

    #[test]
    fn rejects_asymmetric() {
        let e = FiniteSpace::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert!(matches!(e, SpaceError::Asymmetric { i: 0, j: 1, .. }));
        assert!(e.to_string().contains("asymmetric"));
    }

    #[test]
    fn rejects_nonzero_diagonal() {
        let e = FiniteSpace::from_rows(vec![vec![0.5, 1.0], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(e, SpaceError::NonzeroDiagonal { i: 0, .. }));
        assert!(e.to_string().contains("nonzero diagonal"));
    }

    #[test]
    fn rejects_malformed_tables() {
        assert_eq!(FiniteSpace::from_rows(vec![]).unwrap_err(), SpaceError::Empty);
        assert!(matches!(
            FiniteSpace::from_rows(vec![vec![0.0, 1.0], vec![1.0]]).unwrap_err(),
            SpaceError::NotSquare { row: 1, .. }
        ));
        assert!(matches!(
            FiniteSpace::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap_err(),
            SpaceError::Negative { .. }
        ));
        assert!(matches!(
            FiniteSpace::new(vec!["x".into(), "x".into()], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap_err(),
            SpaceError::DuplicateLabel(_)
        ));
        assert!(matches!(
            FiniteSpace::new(vec!["x".into()], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap_err(),
            SpaceError::LabelCount { .. }
        ));
        assert!(matches!(
            FiniteSpace::from_rows(vec![vec![0.0, f64::INFINITY], vec![f64::INFINITY, 0.0]]).unwrap_err(),
            SpaceError::NonFinite(0, 1)
        ));
    }

    #[test]
    fn tiny_asymmetry_is_averaged() {
        let s = FiniteSpace::from_rows(vec![vec![0.0, 1.0], vec![1.0 + 5e-10, 0.0]]).unwrap();
        assert!(s.was_symmetrized());
        assert_eq!(s.d(0, 1), s.d(1, 0));
        assert!((s.d(0, 1) - (1.0 + 2.5e-10)).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let s = FiniteSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.0, 0.1, 1e-7], vec![0.1, 0.0, 1.0 / 3.0], vec![1e-7, 1.0 / 3.0, 0.0]],
        )
        .unwrap();
        let text = s.to_csv();
        assert!(text.starts_with("a,b,c\n"));
        assert_eq!(FiniteSpace::from_csv(text.as_bytes()).unwrap(), s);
    }

    #[test]
    fn csv_rejects_garbage() {
        let err = FiniteSpace::from_csv("a,b\n0,x\n1,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidSpace(SpaceError::Parse { row: 0, .. })));
    }

    #[test]
    fn document_ignores_missing_derived_block() {
        let s = FiniteSpace::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let json = s.to_json();
        assert!(!json.contains("derived_from"));
        assert_eq!(FiniteSpace::from_json(&json).unwrap(), s);
    }
}
