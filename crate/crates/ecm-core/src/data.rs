//! Data containers, CSV ingestion, normalization, and hard assignment.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{EcmError, Result};
use crate::scalar::Scalar;

/// N x d matrix of points, optionally with feature names.
#[derive(Debug, Clone)]
pub struct Dataset<S: Scalar> {
    points: Array2<S>,
    pub feature_names: Option<Vec<String>>,
}

impl<S: Scalar> Dataset<S> {
    /// Validates shape (N >= 1, d >= 1) and finiteness of every entry.
    pub fn new(points: Array2<S>) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(EcmError::InvalidParams(format!(
                "dataset must be non-empty, got {}x{}",
                points.nrows(),
                points.ncols()
            )));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(EcmError::InvalidParams(
                "dataset contains a non-finite entry".into(),
            ));
        }
        Ok(Self {
            points,
            feature_names: None,
        })
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(EcmError::DimensionMismatch(
                "rows have unequal lengths".into(),
            ));
        }
        let flat: Vec<S> = rows.iter().flatten().copied().collect();
        let points = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| EcmError::InvalidParams(e.to_string()))?;
        Self::new(points)
    }

    pub fn n_points(&self) -> usize {
        self.points.nrows()
    }

    pub fn n_dims(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Array2<S> {
        &self.points
    }

    /// Per-feature (min, max) over the points.
    pub fn feature_bounds(&self) -> Vec<(S, S)> {
        (0..self.n_dims())
            .map(|j| {
                let col = self.points.column(j);
                let mut lo = S::infinity();
                let mut hi = S::neg_infinity();
                for &v in col {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            })
            .collect()
    }
}

/// Dataset plus ground-truth labels canonicalized to `{0..k-1}`.
#[derive(Debug, Clone)]
pub struct LabeledDataset<S: Scalar> {
    pub dataset: Dataset<S>,
    pub labels: Vec<usize>,
}

impl<S: Scalar> LabeledDataset<S> {
    /// Validates length agreement and canonicalizes the labels by first
    /// appearance.
    pub fn new(dataset: Dataset<S>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != dataset.n_points() {
            return Err(EcmError::LengthMismatch(labels.len(), dataset.n_points()));
        }
        let labels = canonicalize(&labels);
        Ok(Self { dataset, labels })
    }

    /// Number of distinct classes.
    pub fn n_classes(&self) -> usize {
        self.labels.iter().map(|&l| l + 1).max().unwrap_or(0)
    }
}

/// Renames labels to contiguous ids in order of first appearance.
pub fn canonicalize(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| {
            if let Some(pos) = seen.iter().position(|s| s == l) {
                pos
            } else {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

/// A clustering result: centers, memberships, the minimized objective pair
/// `(g1, g2) = (f1, -f2)`, and provenance of the producing run.
#[derive(Debug, Clone)]
pub struct Clustering<S: Scalar> {
    pub centers: Array2<S>,
    pub memberships: Array2<S>,
    pub objectives: [S; 2],
    pub provenance: Provenance,
}

/// Method name, seed, and parameter summary attached to each clustering.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub method: String,
    pub seed: u64,
    pub params: String,
}

impl<S: Scalar> Clustering<S> {
    /// Hard labels from the membership matrix.
    pub fn labels(&self) -> Vec<usize> {
        hard_assign(&self.memberships)
    }

    /// Serializes as CSV with header `point_index,label,mu_0..mu_{c-1}`.
    pub fn to_csv(&self) -> String {
        let c = self.memberships.ncols();
        let mut out = String::from("point_index,label");
        for j in 0..c {
            let _ = write!(out, ",mu_{j}");
        }
        out.push('\n');
        let labels = self.labels();
        for (i, row) in self.memberships.rows().into_iter().enumerate() {
            let _ = write!(out, "{i},{}", labels[i]);
            for &mu in row {
                let _ = write!(out, ",{}", mu.to64());
            }
            out.push('\n');
        }
        out
    }
}

/// Loads a comma-separated file, one point per row, no header. If
/// `label_column` is given (0-based), that column is read as a class tag
/// (any token) and returned canonicalized; the remaining columns must be
/// numeric.
pub fn load_dataset<S: Scalar>(
    path: &Path,
    label_column: Option<usize>,
) -> Result<(Dataset<S>, Option<Vec<usize>>)> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, label_column)
}

/// CSV parser behind [`load_dataset`]; errors carry 1-based positions.
pub fn parse_csv<S: Scalar>(
    text: &str,
    label_column: Option<usize>,
) -> Result<(Dataset<S>, Option<Vec<usize>>)> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    let mut arity: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        match arity {
            None => arity = Some(cells.len()),
            Some(a) if a != cells.len() => {
                return Err(EcmError::Parse {
                    row: i + 1,
                    col: cells.len(),
                    message: format!("expected {a} cells, found {}", cells.len()),
                })
            }
            _ => {}
        }
        if let Some(lc) = label_column {
            if lc >= cells.len() {
                return Err(EcmError::Parse {
                    row: i + 1,
                    col: lc + 1,
                    message: format!("label column {lc} out of range"),
                });
            }
        }
        let mut row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            if label_column == Some(j) {
                tags.push(cell.trim().to_string());
                continue;
            }
            let v: f64 = cell.trim().parse().map_err(|_| EcmError::Parse {
                row: i + 1,
                col: j + 1,
                message: format!("not a number: {:?}", cell.trim()),
            })?;
            row.push(S::of(v));
        }
        rows.push(row);
    }
    let dataset = Dataset::from_rows(&rows)?;
    let labels = label_column.map(|_| {
        let mut seen: Vec<&str> = Vec::new();
        tags.iter()
            .map(|t| {
                if let Some(pos) = seen.iter().position(|s| s == t) {
                    pos
                } else {
                    seen.push(t);
                    seen.len() - 1
                }
            })
            .collect()
    });
    Ok((dataset, labels))
}

/// Scales every feature to `[-1, 1]`; constant features map to 0.
pub fn normalize_minmax<S: Scalar>(ds: &Dataset<S>) -> Dataset<S> {
    let mut points = ds.points.clone();
    let two = S::of(2.0);
    for mut col in points.columns_mut() {
        let mut lo = S::infinity();
        let mut hi = S::neg_infinity();
        for &v in col.iter() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let range = hi - lo;
        if range > S::zero() {
            for v in col.iter_mut() {
                *v = two * (*v - lo) / range - S::one();
            }
        } else {
            for v in col.iter_mut() {
                *v = S::zero();
            }
        }
    }
    Dataset {
        points,
        feature_names: ds.feature_names.clone(),
    }
}

/// Maximum-membership label per row; ties go to the lowest cluster index.
pub fn hard_assign<S: Scalar>(mu: &Array2<S>) -> Vec<usize> {
    mu.rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            let mut best_v = row[0];
            for (j, &v) in row.iter().enumerate().skip(1) {
                if v > best_v {
                    best = j;
                    best_v = v;
                }
            }
            best
        })
        .collect()
}

/// Debug-build check that every membership row sums to 1 within 1e-9.
pub(crate) fn debug_check_membership_rows<S: Scalar>(mu: &Array2<S>) {
    if cfg!(debug_assertions) {
        for (i, row) in mu.rows().into_iter().enumerate() {
            let sum: f64 = row.iter().map(|v| v.to64()).sum();
            debug_assert!((sum - 1.0).abs() < 1e-9, "membership row {i} sums to {sum}");
        }
    }
}
