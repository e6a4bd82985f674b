//! Core data types: point matrices and class labels.

use crate::error::{Error, Result};

/// A dense row-major matrix of points: one row per point.
///
/// Used both for the original high-dimensional data and for the embedding.
/// Immutable after construction; all entries are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix {
    data: Vec<f64>,
    n_points: usize,
    dim: usize,
}

impl PointMatrix {
    /// Build from a flat row-major buffer.
    pub fn from_vec(data: Vec<f64>, n_points: usize, dim: usize) -> Result<Self> {
        if data.len() != n_points * dim {
            return Err(Error::Shape(format!(
                "buffer holds {} values, expected {} ({} x {})",
                data.len(),
                n_points * dim,
                n_points,
                dim
            )));
        }
        if n_points < 2 {
            return Err(Error::TooSmall(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        if dim < 1 {
            return Err(Error::TooSmall("need at least 1 dimension".into()));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Value(format!(
                "non-finite value at point {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self {
            data,
            n_points,
            dim,
        })
    }

    /// Build from per-point rows of uniform width.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::TooSmall("no points".into()));
        }
        let dim = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Format(format!(
                    "row {} has {} columns, expected {}",
                    i,
                    r.len(),
                    dim
                )));
            }
        }
        Self::from_vec(rows.concat(), n, dim)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of point `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Flat row-major view of all coordinates.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Check that `self` (high side) and `other` (low side) can be paired.
    pub fn check_pair(&self, other: &PointMatrix) -> Result<()> {
        if self.n_points != other.n_points {
            return Err(Error::Shape(format!(
                "matrices have {} and {} points",
                self.n_points, other.n_points
            )));
        }
        Ok(())
    }
}

/// Per-point integer class labels for the supervised measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<u32>,
    classes: Vec<u32>,
}

impl LabelVector {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::TooSmall("no labels".into()));
        }
        let mut classes = labels.clone();
        classes.sort_unstable();
        classes.dedup();
        Ok(Self { labels, classes })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Distinct labels in ascending order.
    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Check the label vector matches a matrix with `n` points.
    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.labels.len() != n {
            return Err(Error::Shape(format!(
                "{} labels for {} points",
                self.labels.len(),
                n
            )));
        }
        Ok(())
    }
}
