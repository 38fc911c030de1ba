use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{squared_distance, Matrix};
use crate::rng::{self, Rng};

/// K-means hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansConfig {
    /// Number of clusters.
    pub k: usize,
    /// Lloyd iteration cap per restart.
    pub max_iter: usize,
    /// Stop when no centroid moves farther than this.
    pub tol: f64,
    /// Independent k-means++ restarts; the lowest inertia wins.
    pub n_init: usize,
}

impl KmeansConfig {
    /// Defaults: 300 iterations, tolerance 1e-4, 10 restarts.
    pub fn new(k: usize) -> Self {
        Self { k, max_iter: 300, tol: 1e-4, n_init: 10 }
    }
}

/// Outcome of a k-means fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmeansResult {
    /// `k x d` centroids.
    pub centroids: Matrix,
    /// Nearest-centroid index per point.
    pub assignments: Vec<usize>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: f64,
    /// Lloyd iterations of the winning restart.
    pub iterations: usize,
    /// Inertia after every assignment step of the winning restart.
    pub inertia_trace: Vec<f64>,
}

/// Lloyd's algorithm from k-means++ seeds, best of `n_init` restarts.
pub fn fit_kmeans(points: &Matrix, cfg: &KmeansConfig, seed: u64) -> Result<KmeansResult> {
    validate(points, cfg.k)?;
    let mut best: Option<KmeansResult> = None;
    for restart in 0..cfg.n_init.max(1) {
        let mut rng = rng::stream(seed, restart as u64);
        let init = kmeans_plus_plus(points, cfg.k, &mut rng);
        let fit = lloyd(points, init, cfg.max_iter, cfg.tol);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn validate(points: &Matrix, k: usize) -> Result<()> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("k = {k} with {n} points")));
    }
    if points.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("points must be finite".into()));
    }
    Ok(())
}

fn kmeans_plus_plus(points: &Matrix, k: usize, rng: &mut Rng) -> Matrix {
    let n = points.rows();
    let mut centroids = Matrix::zeros(k, points.cols());
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    centroids.row_mut(0).copy_from_slice(points.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| squared_distance(points.row(i), points.row(first))).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && *w > 0.0 {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| d2.iter().rposition(|w| *w > 0.0).expect("positive total"))
        } else {
            // all remaining points coincide with a centroid
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen[pick] = true;
        centroids.row_mut(c).copy_from_slice(points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(points.row(i), points.row(pick)));
        }
    }
    centroids
}

fn assign(points: &Matrix, centroids: &Matrix, assignments: &mut [usize], dist: &mut [f64]) -> f64 {
    let mut inertia = 0.0;
    for (i, x) in points.iter_rows().enumerate() {
        let mut best = (0usize, f64::INFINITY);
        for c in 0..centroids.rows() {
            let d = squared_distance(x, centroids.row(c));
            if d < best.1 {
                best = (c, d);
            }
        }
        assignments[i] = best.0;
        dist[i] = best.1;
        inertia += best.1;
    }
    inertia
}

fn lloyd(points: &Matrix, mut centroids: Matrix, max_iter: usize, tol: f64) -> KmeansResult {
    let (n, d, k) = (points.rows(), points.cols(), centroids.rows());
    let mut assignments = vec![0usize; n];
    let mut dist = vec![0.0; n];
    let mut trace = Vec::new();
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        trace.push(assign(points, &centroids, &mut assignments, &mut dist));
        let mut sums = Matrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for (i, x) in points.iter_rows().enumerate() {
            counts[assignments[i]] += 1;
            for (s, v) in sums.row_mut(assignments[i]).iter_mut().zip(x) {
                *s += v;
            }
        }
        let mut shift = 0.0f64;
        for c in 0..k {
            if counts[c] == 0 {
                // reseed an empty cluster at the point farthest from its centroid
                let far = (0..n).fold(0, |b, i| if dist[i] > dist[b] { i } else { b });
                sums.row_mut(c).copy_from_slice(points.row(far));
                dist[far] = 0.0;
            } else {
                let inv = 1.0 / counts[c] as f64;
                sums.row_mut(c).iter_mut().for_each(|s| *s *= inv);
            }
            shift = shift.max(squared_distance(sums.row(c), centroids.row(c)).sqrt());
        }
        centroids = sums;
        if shift < tol {
            break;
        }
    }
    let inertia = assign(points, &centroids, &mut assignments, &mut dist);
    trace.push(inertia);
    KmeansResult { centroids, assignments, inertia, iterations, inertia_trace: trace }
}

/// One point of an elbow curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElbowPoint {
    /// Number of clusters.
    pub k: usize,
    /// Best inertia found.
    pub inertia: f64,
}

/// Inertia for every `k` in the range, each the best of 10 seeded restarts.
///
/// The solution for `k - 1` plus the point farthest from it is also tried as
/// a starting configuration, so inertia never increases with `k`.
pub fn elbow_curve(points: &Matrix, k_range: RangeInclusive<usize>, seed: u64) -> Result<Vec<ElbowPoint>> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo == 0 || hi > points.rows() || lo > hi {
        return Err(Error::Parameter(format!("k range {lo}..={hi} with {} points", points.rows())));
    }
    let mut out = Vec::new();
    let mut previous: Option<KmeansResult> = None;
    for k in k_range {
        let mut cfg = KmeansConfig::new(k);
        cfg.n_init = 10;
        let mut best = fit_kmeans(points, &cfg, seed.wrapping_add(k as u64))?;
        if let Some(prev) = previous.as_ref().filter(|p| p.centroids.rows() + 1 == k) {
            let mut init = Matrix::zeros(k, points.cols());
            for c in 0..k - 1 {
                init.row_mut(c).copy_from_slice(prev.centroids.row(c));
            }
            let far = (0..points.rows())
                .map(|i| (i, squared_distance(points.row(i), prev.centroids.row(prev.assignments[i]))))
                .fold((0, -1.0), |b, x| if x.1 > b.1 { x } else { b })
                .0;
            init.row_mut(k - 1).copy_from_slice(points.row(far));
            let warm = lloyd(points, init, cfg.max_iter, cfg.tol);
            if warm.inertia < best.inertia {
                best = warm;
            }
        }
        out.push(ElbowPoint { k, inertia: best.inertia });
        previous = Some(best);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> Matrix {
        Matrix::from_vec(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn two_pairs_on_a_line() {
        let fit = fit_kmeans(&line(&[0.0, 1.0, 10.0, 11.0]), &KmeansConfig::new(2), 3).unwrap();
        let mut c = fit.centroids.column(0);
        c.sort_by(f64::total_cmp);
        assert_eq!(c, vec![0.5, 10.5]);
        assert_eq!(fit.inertia, 1.0);
    }

    #[test]
    fn k_equals_n() {
        let pts = line(&[3.0, -1.0, 4.0, 1.5, 9.0]);
        let fit = fit_kmeans(&pts, &KmeansConfig::new(5), 0).unwrap();
        assert_eq!(fit.inertia, 0.0);
    }

    #[test]
    fn k_too_large() {
        assert!(matches!(fit_kmeans(&line(&[1.0]), &KmeansConfig::new(2), 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn elbow_k1_is_total_sum_of_squares() {
        let v = [1.0, 2.0, 4.0, 8.0];
        let mean = v.iter().sum::<f64>() / 4.0;
        let tss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
        let e = elbow_curve(&line(&v), 1..=3, 1).unwrap();
        assert!((e[0].inertia - tss).abs() < 1e-12);
        assert!(e.windows(2).all(|w| w[1].inertia <= w[0].inertia));
    }
}
