use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{distance, Matrix};

/// Inter-cluster distance rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    /// Minimum increase of within-cluster variance.
    Ward,
    /// Maximum pairwise distance.
    Complete,
    /// Mean pairwise distance (UPGMA).
    Average,
}

impl Linkage {
    /// All supported linkages.
    pub const ALL: [Linkage; 3] = [Linkage::Ward, Linkage::Complete, Linkage::Average];

    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Linkage::Ward => "ward",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        }
    }

    /// Lance-Williams update of `d(k, i ∪ j)`.
    fn update(self, d_ki: f64, d_kj: f64, d_ij: f64, n_i: f64, n_j: f64, n_k: f64) -> f64 {
        match self {
            Linkage::Complete => d_ki.max(d_kj),
            Linkage::Average => (n_i * d_ki + n_j * d_kj) / (n_i + n_j),
            Linkage::Ward => {
                let t = n_i + n_j + n_k;
                let v = ((n_k + n_i) * d_ki * d_ki + (n_k + n_j) * d_kj * d_kj - n_k * d_ij * d_ij) / t;
                v.max(0.0).sqrt()
            }
        }
    }
}

/// One agglomeration step. Leaves are nodes `0..n`; the merge at step `s`
/// creates node `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    /// Smaller node id.
    pub left: usize,
    /// Larger node id.
    pub right: usize,
    /// Linkage distance at which the two clusters merged.
    pub distance: f64,
    /// Points in the new cluster.
    pub size: usize,
}

/// Full dendrogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    /// Linkage used.
    pub linkage: Linkage,
    /// `n - 1` merges in the order they happened.
    pub merges: Vec<Merge>,
}

impl MergeTree {
    /// Flat clustering obtained by stopping after `n - k` merges. Cluster
    /// ids follow the order of first appearance in the rows.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.merges.len() + 1;
        if k == 0 || k > n {
            return Err(Error::Parameter(format!("k = {k} with {n} points")));
        }
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, m) in self.merges.iter().take(n - k).enumerate() {
            let (a, b) = (find(&mut parent, m.left), find(&mut parent, m.right));
            parent[a] = n + s;
            parent[b] = n + s;
        }
        let mut ids = vec![usize::MAX; 2 * n - 1];
        let mut next = 0;
        Ok((0..n)
            .map(|i| {
                let r = find(&mut parent, i);
                if ids[r] == usize::MAX {
                    ids[r] = next;
                    next += 1;
                }
                ids[r]
            })
            .collect())
    }
}

/// Dendrogram plus the flat cut at `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgglomerativeFit {
    /// Full merge tree.
    pub tree: MergeTree,
    /// Cluster id per point.
    pub assignments: Vec<usize>,
}

struct Condensed {
    n: usize,
    d: Vec<f64>,
}

impl Condensed {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[self.idx(i, j)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.d[k] = v;
    }
}

/// Agglomerative clustering with Lance-Williams updates on Euclidean
/// distances. The closest pair merges first; ties go to the pair with the
/// lowest indices.
pub fn fit_agglomerative(points: &Matrix, linkage: Linkage, k: usize) -> Result<AgglomerativeFit> {
    let n = points.rows();
    if n < 2 {
        return Err(Error::Parameter(format!("need at least 2 points, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("k = {k} with {n} points")));
    }
    warn_if_unscaled(points);

    let mut dist = Condensed { n, d: vec![0.0; n * (n - 1) / 2] };
    for i in 0..n {
        for j in (i + 1)..n {
            dist.set(i, j, distance(points.row(i), points.row(j)));
        }
    }
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut node: Vec<usize> = (0..n).collect();
    // nearest active neighbour among higher indices
    let mut nn = vec![usize::MAX; n];
    let mut nn_dist = vec![f64::INFINITY; n];

    let rescan = |i: usize, active: &[bool], dist: &Condensed, nn: &mut [usize], nn_dist: &mut [f64]| {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in (i + 1)..n {
            if active[j] {
                let d = dist.get(i, j);
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        nn[i] = best.0;
        nn_dist[i] = best.1;
    };
    for i in 0..n {
        rescan(i, &active, &dist, &mut nn, &mut nn_dist);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut a = usize::MAX;
        for i in 0..n {
            if active[i] && nn[i] != usize::MAX && (a == usize::MAX || nn_dist[i] < nn_dist[a]) {
                a = i;
            }
        }
        let b = nn[a];
        let d_ab = nn_dist[a];
        let (na, nb) = (size[a] as f64, size[b] as f64);
        for k in 0..n {
            if !active[k] || k == a || k == b {
                continue;
            }
            let updated = linkage.update(dist.get(k, a), dist.get(k, b), d_ab, na, nb, size[k] as f64);
            dist.set(k, a, updated);
        }
        active[b] = false;
        let (l, r) = if node[a] < node[b] { (node[a], node[b]) } else { (node[b], node[a]) };
        size[a] += size[b];
        merges.push(Merge { left: l, right: r, distance: d_ab, size: size[a] });
        node[a] = n + step;

        rescan(a, &active, &dist, &mut nn, &mut nn_dist);
        for k in 0..n {
            if !active[k] || k == a {
                continue;
            }
            if k < a {
                if nn[k] == a || nn[k] == b {
                    rescan(k, &active, &dist, &mut nn, &mut nn_dist);
                } else {
                    let d = dist.get(k, a);
                    if d < nn_dist[k] || (d == nn_dist[k] && a < nn[k]) {
                        nn[k] = a;
                        nn_dist[k] = d;
                    }
                }
            } else if k < b && nn[k] == b {
                rescan(k, &active, &dist, &mut nn, &mut nn_dist);
            }
        }
    }
    let tree = MergeTree { linkage, merges };
    let assignments = tree.cut(k)?;
    Ok(AgglomerativeFit { tree, assignments })
}

fn warn_if_unscaled(points: &Matrix) {
    let n = points.rows() as f64;
    let means = points.column_means();
    for (j, m) in means.iter().enumerate() {
        // 0/1 indicator columns are not scaled
        if points.iter_rows().all(|r| r[j] == 0.0 || r[j] == 1.0) {
            continue;
        }
        let var = points.iter_rows().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n;
        if m.abs() > 1e-6 || (var > 0.0 && (var - 1.0).abs() > 1e-6) {
            log::warn!("agglomerative clustering on unstandardized data (column {j})");
            return;
        }
    }
}
