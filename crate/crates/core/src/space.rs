//! Information level: the space distances are computed in.
//!
//! [`SpaceKind::FullSpace`] is the identity. [`SpaceKind::PcaSubspace`]
//! centers the data and projects it onto the leading `max(1, ⌊D/2⌋)`
//! principal directions of the sample covariance.

use crate::dataset::Dataset;
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::method::SpaceKind;

const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTransform {
    kind: SpaceKind,
    pca: Option<PcaState>,
}

#[derive(Debug, Clone, PartialEq)]
struct PcaState {
    mean: Vec<f64>,
    /// Row-major `input_dim × target_dim`, orthonormal columns.
    basis: Vec<f64>,
    input_dim: usize,
    target_dim: usize,
    /// Leading covariance eigenvalues, one per basis column.
    eigenvalues: Vec<f64>,
}

/// Subspace dimension for a `dim`-dimensional input.
pub fn subspace_dim(dim: usize) -> usize {
    (dim / 2).max(1)
}

impl SpaceTransform {
    pub fn full_space() -> Self {
        Self {
            kind: SpaceKind::FullSpace,
            pca: None,
        }
    }

    pub fn fit(kind: SpaceKind, dataset: &Dataset) -> Result<Self> {
        match kind {
            SpaceKind::FullSpace => Ok(Self::full_space()),
            SpaceKind::PcaSubspace => fit_pca(dataset).map(|pca| Self {
                kind,
                pca: Some(pca),
            }),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mean(&self) -> Option<&[f64]> {
        self.pca.as_ref().map(|p| p.mean.as_slice())
    }

    /// Row-major `D × d` basis.
    pub fn basis(&self) -> Option<&[f64]> {
        self.pca.as_ref().map(|p| p.basis.as_slice())
    }

    pub fn target_dim(&self) -> Option<usize> {
        self.pca.as_ref().map(|p| p.target_dim)
    }

    /// Covariance eigenvalues of the retained directions, descending. Their
    /// sum is the variance kept by the projection.
    pub fn retained_eigenvalues(&self) -> Option<&[f64]> {
        self.pca.as_ref().map(|p| p.eigenvalues.as_slice())
    }

    pub fn apply(&self, dataset: &Dataset) -> Result<Dataset> {
        let Some(pca) = &self.pca else {
            return Ok(dataset.clone());
        };
        if dataset.dim() != pca.input_dim {
            return Err(Error::DimensionMismatch {
                expected: pca.input_dim,
                actual: dataset.dim(),
            });
        }
        let (dim, target) = (pca.input_dim, pca.target_dim);
        let mut out = Vec::with_capacity(dataset.len() * target);
        let mut centered = vec![0.0; dim];
        for row in dataset.rows() {
            for (c, (x, m)) in centered.iter_mut().zip(row.iter().zip(&pca.mean)) {
                *c = x - m;
            }
            for j in 0..target {
                out.push(
                    (0..dim)
                        .map(|i| centered[i] * pca.basis[i * target + j])
                        .sum(),
                );
            }
        }
        dataset.with_points(target, out)
    }
}

fn fit_pca(dataset: &Dataset) -> Result<PcaState> {
    let (n, dim) = (dataset.len(), dataset.dim());
    if dim < 2 {
        return Err(Error::SubspaceDimension(dim));
    }
    let mut mean = vec![0.0; dim];
    for row in dataset.rows() {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }

    let mut cov = vec![0.0; dim * dim];
    let mut centered = vec![0.0; dim];
    for row in dataset.rows() {
        for (c, (x, m)) in centered.iter_mut().zip(row.iter().zip(&mean)) {
            *c = x - m;
        }
        for i in 0..dim {
            for j in i..dim {
                cov[i * dim + j] += centered[i] * centered[j];
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..dim {
        for j in i..dim {
            let v = cov[i * dim + j] / denom;
            cov[i * dim + j] = v;
            cov[j * dim + i] = v;
        }
    }
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("covariance has non-finite entries".into()));
    }

    let eig = symmetric_eigen(&cov, dim)?;
    let target = subspace_dim(dim);
    let scale = cov.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    let mut basis = vec![0.0; dim * target];
    for j in 0..target {
        let mut v = eig.vector(j);
        let pivot = v.iter().enumerate().fold(
            0,
            |best, (i, x)| if x.abs() > v[best].abs() { i } else { best },
        );
        if v[pivot] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let residual = (0..dim)
            .map(|i| {
                let cv: f64 = (0..dim).map(|k| cov[i * dim + k] * v[k]).sum();
                (cv - eig.values[j] * v[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        if residual > RESIDUAL_TOL * scale {
            return Err(Error::Numerical(format!(
                "eigenpair {j} residual {residual:e} exceeds tolerance"
            )));
        }
        for i in 0..dim {
            basis[i * target + j] = v[i];
        }
    }

    Ok(PcaState {
        mean,
        basis,
        input_dim: dim,
        target_dim: target,
        eigenvalues: eig.values[..target].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_space_is_identity() {
        let d = Dataset::from_rows(
            &[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
            Some(vec![0, 1]),
        )
        .unwrap();
        let t = SpaceTransform::fit(SpaceKind::FullSpace, &d).unwrap();
        assert!(t.mean().is_none() && t.basis().is_none());
        assert_eq!(t.apply(&d).unwrap(), d);
    }

    #[test]
    fn x_axis_data_projects_on_positive_x() {
        let rows: Vec<Vec<f64>> = [-3.0, -1.0, 0.5, 2.0, 4.0]
            .iter()
            .map(|&x| vec![x, 0.0])
            .collect();
        let d = Dataset::from_rows(&rows, None).unwrap();
        let t = SpaceTransform::fit(SpaceKind::PcaSubspace, &d).unwrap();
        assert_eq!(t.target_dim(), Some(1));
        let b = t.basis().unwrap();
        assert!((b[0] - 1.0).abs() < 1e-12 && b[1].abs() < 1e-12, "{b:?}");
    }

    #[test]
    fn mean_projects_to_origin_and_labels_carry() {
        let rows = vec![
            vec![1.0, 2.0, 0.0, 1.0],
            vec![3.0, -1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0, 2.0],
            vec![2.0, 1.0, 1.0, 1.0],
        ];
        let d = Dataset::from_rows(&rows, Some(vec![0, 1, 0, 0]))
            .unwrap()
            .with_ids(vec![10, 11, 12, 13])
            .unwrap();
        let t = SpaceTransform::fit(SpaceKind::PcaSubspace, &d).unwrap();
        let mean = t.mean().unwrap().to_vec();
        let probe = Dataset::from_rows(&[mean.clone(), mean], None).unwrap();
        let p = t.apply(&probe).unwrap();
        assert!(p.as_flat().iter().all(|v| v.abs() < 1e-12));

        let sub = t.apply(&d).unwrap();
        assert_eq!(sub.dim(), 2);
        assert_eq!(sub.labels(), d.labels());
        assert_eq!(sub.ids(), d.ids());
    }

    #[test]
    fn errors() {
        let d1 = Dataset::from_rows(&[vec![1.0], vec![2.0]], None).unwrap();
        assert!(matches!(
            SpaceTransform::fit(SpaceKind::PcaSubspace, &d1),
            Err(Error::SubspaceDimension(1))
        ));
        let d2 = Dataset::from_rows(&[vec![1.0, 0.0], vec![2.0, 1.0]], None).unwrap();
        let t = SpaceTransform::fit(SpaceKind::PcaSubspace, &d2).unwrap();
        let d3 = Dataset::from_rows(&[vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]], None).unwrap();
        assert!(matches!(t.apply(&d3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn target_dim_rule() {
        assert_eq!(subspace_dim(2), 1);
        assert_eq!(subspace_dim(3), 1);
        assert_eq!(subspace_dim(6), 3);
        assert_eq!(subspace_dim(259), 129);
    }
}
