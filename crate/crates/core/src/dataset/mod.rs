//! Point/label data model, CSV persistence and synthetic benchmark sets.

mod csv_io;
mod synthetic;

pub use csv_io::{load_csv, save_csv, CsvOptions, LabelColumn};
pub use synthetic::{cluster_centers, generate_synthetic, SyntheticSpec, SyntheticVariant};

use crate::error::{Error, Result};

/// An `N × D` point matrix with optional binary outlier labels.
///
/// Points are addressed by their row index everywhere in the crate; `ids`
/// are carried along as metadata (they default to `0..N`).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<f64>,
    n: usize,
    dim: usize,
    labels: Option<Vec<u8>>,
    ids: Vec<usize>,
    name: String,
}

impl Dataset {
    /// Builds a dataset from row-major coordinates.
    pub fn from_flat(
        n: usize,
        dim: usize,
        points: Vec<f64>,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 points, got {n}"
            )));
        }
        if dim < 1 {
            return Err(Error::InvalidDataset("need at least 1 dimension".into()));
        }
        if points.len() != n * dim {
            return Err(Error::InvalidDataset(format!(
                "expected {} coordinates for {n}x{dim}, got {}",
                n * dim,
                points.len()
            )));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite coordinate at row {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        if let Some(labels) = &labels {
            validate_labels(labels, n)?;
        }
        Ok(Self {
            points,
            n,
            dim,
            labels,
            ids: (0..n).collect(),
            name: String::new(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Option<Vec<u8>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has {} columns, expected {dim}",
                rows[i].len()
            )));
        }
        let flat = rows.iter().flatten().copied().collect();
        Self::from_flat(rows.len(), dim, flat, labels)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the point identifiers. They must be unique and one per point.
    pub fn with_ids(mut self, ids: Vec<usize>) -> Result<Self> {
        if ids.len() != self.n {
            return Err(Error::InvalidDataset(format!(
                "expected {} ids, got {}",
                self.n,
                ids.len()
            )));
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDataset("point ids are not unique".into()));
        }
        self.ids = ids;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Option<Vec<u8>>) -> Result<Self> {
        if let Some(l) = &labels {
            validate_labels(l, self.n)?;
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a dataset holds at least two points.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_outliers(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().filter(|&&v| v == 1).count())
    }

    /// Euclidean distance between rows `a` and `b`.
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        euclidean(self.point(a), self.point(b))
    }

    /// Same labels, ids and name over a new coordinate matrix.
    pub(crate) fn with_points(&self, dim: usize, points: Vec<f64>) -> Result<Self> {
        let mut out = Self::from_flat(self.n, dim, points, None)?;
        out.labels = self.labels.clone();
        out.ids = self.ids.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    /// Rescales every feature to `[0, 1]`. Constant features map to 0.
    pub fn min_max_normalized(&self) -> Self {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for row in self.rows() {
            for (j, &v) in row.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let points = self
            .rows()
            .flat_map(|row| {
                row.iter().enumerate().map(|(j, &v)| {
                    let span = hi[j] - lo[j];
                    if span > 0.0 {
                        (v - lo[j]) / span
                    } else {
                        0.0
                    }
                })
            })
            .collect();
        self.with_points(self.dim, points)
            .expect("normalized coordinates stay finite")
    }
}

#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn validate_labels(labels: &[u8], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::InvalidDataset(format!(
            "expected {n} labels, got {}",
            labels.len()
        )));
    }
    if let Some(i) = labels.iter().position(|&v| v > 1) {
        return Err(Error::InvalidDataset(format!(
            "label {} at row {i} is not 0 or 1",
            labels[i]
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_too_few_points_and_non_finite() {
        assert!(Dataset::from_rows(&[vec![1.0]], None).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![f64::NAN]], None).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![f64::INFINITY]], None).is_err());
        assert!(Dataset::from_rows(&[vec![], vec![]], None).is_err());
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = Dataset::from_rows(&[vec![1.0, 2.0], vec![3.0]], None).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn label_checks() {
        let rows = [vec![0.0], vec![1.0]];
        assert!(Dataset::from_rows(&rows, Some(vec![0, 1])).is_ok());
        assert!(Dataset::from_rows(&rows, Some(vec![0, 2])).is_err());
        assert!(Dataset::from_rows(&rows, Some(vec![0])).is_err());
    }

    #[test]
    fn ids_must_be_unique() {
        let d = Dataset::from_rows(&[vec![0.0], vec![1.0]], None).unwrap();
        assert_eq!(d.ids(), &[0, 1]);
        assert!(d.clone().with_ids(vec![4, 4]).is_err());
        assert_eq!(d.with_ids(vec![9, 3]).unwrap().ids(), &[9, 3]);
    }

    #[test]
    fn min_max_maps_to_unit_box() {
        let d = Dataset::from_rows(&[vec![1.0, 5.0], vec![3.0, 5.0], vec![2.0, 5.0]], None)
            .unwrap()
            .min_max_normalized();
        assert_eq!(d.as_flat(), &[0.0, 0.0, 1.0, 0.0, 0.5, 0.0]);
    }
}
