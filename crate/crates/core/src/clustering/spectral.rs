use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::kmeans::{fit_kmeans, KmeansConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, squared_distance, Matrix};

/// Graph construction for spectral clustering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Affinity {
    /// `exp(-gamma * |x - y|^2)`.
    Rbf {
        /// Kernel width, positive.
        gamma: f64,
    },
    /// Symmetrized k-nearest-neighbour connectivity `(A + Aᵀ) / 2`.
    NearestNeighbors {
        /// Neighbours per point, excluding the point itself.
        n_neighbors: usize,
    },
}

/// Spectral clustering configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Affinity and its parameter.
    pub affinity: Affinity,
    /// Number of clusters.
    pub n_clusters: usize,
    /// Dimension of the PCA embedding the points are expected in.
    pub pca_components: usize,
}

impl SpectralConfig {
    /// Two clusters on a 2-D embedding.
    pub fn new(affinity: Affinity) -> Self {
        Self { affinity, n_clusters: 2, pca_components: 2 }
    }
}

/// Spectral clustering outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFit {
    /// Cluster id per point.
    pub assignments: Vec<usize>,
    /// All Laplacian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Connected components of the affinity graph.
    pub graph_components: usize,
}

/// RBF width `1 / (d * mean feature variance)`.
pub fn default_gamma(points: &Matrix) -> f64 {
    let cov = points.covariance();
    let d = points.cols().max(1) as f64;
    let mean_var = (0..points.cols()).map(|j| cov[(j, j)]).sum::<f64>() / d;
    if mean_var > 0.0 {
        1.0 / (d * mean_var)
    } else {
        1.0
    }
}

/// Dense symmetric affinity matrix with zero diagonal.
pub fn affinity_matrix(points: &Matrix, affinity: &Affinity) -> Result<Matrix> {
    let n = points.rows();
    let mut w = Matrix::zeros(n, n);
    match *affinity {
        Affinity::Rbf { gamma } => {
            if !(gamma > 0.0) {
                return Err(Error::Parameter(format!("gamma {gamma} must be positive")));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = (-gamma * squared_distance(points.row(i), points.row(j))).exp();
                    w[(i, j)] = v;
                    w[(j, i)] = v;
                }
            }
        }
        Affinity::NearestNeighbors { n_neighbors } => {
            if n_neighbors == 0 || n_neighbors >= n {
                return Err(Error::Parameter(format!("n_neighbors = {n_neighbors} with {n} points")));
            }
            let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
            for i in 0..n {
                order.clear();
                order.extend((0..n).filter(|&j| j != i).map(|j| (squared_distance(points.row(i), points.row(j)), j)));
                order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                for &(_, j) in order.iter().take(n_neighbors) {
                    w[(i, j)] += 0.5;
                    w[(j, i)] += 0.5;
                }
            }
        }
    }
    Ok(w)
}

/// `I - D^{-1/2} W D^{-1/2}`; isolated vertices get a zero row.
pub fn normalized_laplacian(w: &Matrix) -> Matrix {
    let n = w.rows();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| {
            let deg: f64 = w.row(i).iter().sum();
            if deg > 0.0 {
                1.0 / deg.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = -w[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
            l[(i, j)] = if i == j && inv_sqrt[i] > 0.0 { 1.0 + v } else { v };
        }
    }
    l
}

/// Connected components of the graph `w > 0`.
pub fn connected_components(w: &Matrix) -> usize {
    let n = w.rows();
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && w[(u, v)] > 0.0 {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    count
}

/// Spectral clustering on already-embedded points: affinity graph,
/// symmetric normalized Laplacian, bottom `k` eigenvectors (Jacobi),
/// row normalization, then k-means on the rows.
pub fn fit_spectral(points: &Matrix, cfg: &SpectralConfig, seed: u64) -> Result<SpectralFit> {
    let n = points.rows();
    let k = cfg.n_clusters;
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("n_clusters = {k} with {n} points")));
    }
    if points.cols() != cfg.pca_components {
        return Err(Error::Parameter(format!(
            "expected a {}-component embedding, got {} columns",
            cfg.pca_components,
            points.cols()
        )));
    }
    let w = affinity_matrix(points, &cfg.affinity)?;
    let graph_components = connected_components(&w);
    if graph_components > k {
        log::warn!("affinity graph has {graph_components} components for {k} clusters");
    }
    let lap = normalized_laplacian(&w);
    let eig = linalg::symmetric_eigen(&lap)?;
    let mut embedding = Matrix::zeros(n, k);
    for c in 0..k {
        embedding.set_column(c, &eig.vector(c));
    }
    for i in 0..n {
        let row = embedding.row_mut(i);
        let norm = linalg::dot(row, row).sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
    let km = fit_kmeans(&embedding, &KmeansConfig::new(k), seed)?;
    Ok(SpectralFit { assignments: km.assignments, eigenvalues: eig.values, graph_components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disconnected_components_are_recovered() {
        let mut rows = Vec::new();
        for i in 0..6 {
            rows.push([i as f64 * 0.1, 0.0]);
        }
        for i in 0..6 {
            rows.push([50.0 + i as f64 * 0.1, 3.0]);
        }
        let pts = Matrix::from_rows(&rows).unwrap();
        let cfg = SpectralConfig::new(Affinity::NearestNeighbors { n_neighbors: 3 });
        let fit = fit_spectral(&pts, &cfg, 4).unwrap();
        assert_eq!(fit.graph_components, 2);
        let first = fit.assignments[0];
        assert!(fit.assignments[..6].iter().all(|&a| a == first));
        assert!(fit.assignments[6..].iter().all(|&a| a != first));
    }

    #[test]
    fn rejects_wrong_embedding_width() {
        let pts = Matrix::zeros(4, 3);
        let cfg = SpectralConfig::new(Affinity::Rbf { gamma: 1.0 });
        assert!(matches!(fit_spectral(&pts, &cfg, 0), Err(Error::Parameter(_))));
    }
}
