//! Brute-force oracles shared by the integration and acceptance targets.
//! Each is written directly from the textbook definition and shares no code
//! with the library.
#![allow(dead_code)]

use neighbor_lof::dataset::Dataset;
use rand::Rng;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn rows(data: &Dataset) -> Vec<Vec<f64>> {
    data.rows().map(<[f64]>::to_vec).collect()
}

/// Uniform points in `[0, 10)^dim`.
pub fn random_points(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..10.0)).collect())
        .collect()
}

/// Static-sorting kNN lists: full sort by (distance, id).
pub fn knn_sorted(points: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    (0..points.len())
        .map(|x| {
            let mut others: Vec<(f64, usize)> = (0..points.len())
                .filter(|&z| z != x)
                .map(|z| (dist(&points[x], &points[z]), z))
                .collect();
            others.sort_by(|a, b| a.partial_cmp(b).unwrap());
            others.into_iter().take(k).map(|(_, z)| z).collect()
        })
        .collect()
}

/// Dynamic selection, recomputing the set distance from scratch each round.
/// Entries are `(id, distance to x)` in selection order.
pub fn knn_dynamic(points: &[Vec<f64>], k: usize) -> Vec<Vec<(usize, f64)>> {
    (0..points.len())
        .map(|x| {
            let mut chosen = vec![x];
            let mut out = Vec::new();
            for _ in 0..k {
                let mut best: Option<(f64, usize)> = None;
                for z in 0..points.len() {
                    if chosen.contains(&z) {
                        continue;
                    }
                    let d = chosen
                        .iter()
                        .map(|&s| dist(&points[s], &points[z]))
                        .fold(f64::INFINITY, f64::min);
                    if best.is_none_or(|(bd, bz)| d < bd || (d == bd && z < bz)) {
                        best = Some((d, z));
                    }
                }
                let (_, z) = best.unwrap();
                chosen.push(z);
                out.push((z, dist(&points[x], &points[z])));
            }
            out
        })
        .collect()
}

/// Points whose list contains `x`, ascending.
pub fn reverse(lists: &[Vec<usize>], x: usize) -> Vec<usize> {
    (0..lists.len())
        .filter(|&z| lists[z].contains(&x))
        .collect()
}

/// Classic LOF over static-sorting neighborhoods.
pub fn classic_lof(points: &[Vec<f64>], k: usize) -> Vec<f64> {
    let n = points.len();
    let nn = knn_sorted(points, k);
    let kdist: Vec<f64> = (0..n)
        .map(|p| dist(&points[p], &points[*nn[p].last().unwrap()]))
        .collect();
    let lrd: Vec<f64> = (0..n)
        .map(|p| {
            let total: f64 = nn[p]
                .iter()
                .map(|&o| kdist[o].max(dist(&points[p], &points[o])))
                .sum();
            nn[p].len() as f64 / total
        })
        .collect();
    (0..n)
        .map(|p| nn[p].iter().map(|&o| lrd[o] / lrd[p]).sum::<f64>() / nn[p].len() as f64)
        .collect()
}

/// Fraction of (outlier, inlier) pairs ranked correctly, ties counting 1/2.
pub fn pairwise_auc(keys: &[f64], labels: &[u8]) -> f64 {
    let mut hits = 0.0;
    let mut pairs = 0.0;
    for (i, &a) in keys.iter().enumerate() {
        if labels[i] != 1 {
            continue;
        }
        for (j, &b) in keys.iter().enumerate() {
            if labels[j] != 0 {
                continue;
            }
            pairs += 1.0;
            if a > b {
                hits += 1.0;
            } else if a == b {
                hits += 0.5;
            }
        }
    }
    hits / pairs
}

/// The seven-point configuration: A=0 .. G=6. With k = 3 and static
/// sorting, KNN(A)={B,C,D}, RKNN(A)={B,C}.
pub const SEVEN_POINTS: [[f64; 2]; 7] = [
    [11.0, 15.0],
    [19.0, 8.0],
    [8.0, 17.0],
    [13.0, 7.0],
    [3.0, 4.0],
    [15.0, 0.0],
    [8.0, 4.0],
];

pub fn seven_point_dataset() -> Dataset {
    let rows: Vec<Vec<f64>> = SEVEN_POINTS.iter().map(|p| p.to_vec()).collect();
    Dataset::from_rows(&rows, None).unwrap()
}

/// Projection onto the top `d` eigenvectors of the sample covariance,
/// computed with nalgebra.
pub fn dense_pca(points: &[Vec<f64>], d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    use nalgebra::{DMatrix, SymmetricEigen};
    let n = points.len();
    let dim = points[0].len();
    let x = DMatrix::from_fn(n, dim, |i, j| points[i][j]);
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(n, dim, |i, j| x[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let projected = (0..n)
        .map(|i| {
            order[..d]
                .iter()
                .map(|&j| {
                    (0..dim)
                        .map(|c| centered[(i, c)] * eig.eigenvectors[(c, j)])
                        .sum()
                })
                .collect()
        })
        .collect();
    (projected, values)
}

pub fn distance_matrix(points: &[Vec<f64>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len() * points.len());
    for a in points {
        for b in points {
            out.push(dist(a, b));
        }
    }
    out
}
