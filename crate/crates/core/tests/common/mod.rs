#![allow(dead_code)]

use ehrsev_core::data::{ColumnSpec, Dataset, FeatureSchema};
use ehrsev_core::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn schema(names: &[&str]) -> FeatureSchema {
    FeatureSchema {
        columns: names.iter().map(|n| ColumnSpec::continuous(n)).collect(),
        label_column: "label".into(),
        positive_label: "1".into(),
        negative_label: "0".into(),
    }
}

pub fn names(d: usize) -> Vec<String> {
    (0..d).map(|j| format!("f{j}")).collect()
}

pub fn dataset(rows: &[Vec<f64>], labels: &[u8]) -> Dataset {
    let d = rows[0].len();
    let n = names(d);
    let refs: Vec<&str> = n.iter().map(String::as_str).collect();
    Dataset::new(schema(&refs), Matrix::from_rows(rows).unwrap(), labels.to_vec()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two isotropic Gaussian classes centred at `-sep/2` and `+sep/2` on every axis.
pub fn blobs(n_per_class: usize, d: usize, sep: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..2 * n_per_class {
        let c = (i % 2) as u8;
        let centre = if c == 1 { sep / 2.0 } else { -sep / 2.0 };
        rows.push((0..d).map(|_| centre + noise.sample(&mut r)).collect());
        labels.push(c);
    }
    dataset(&rows, &labels)
}

/// Two concentric noisy rings in the plane; the outer ring is class 1.
pub fn rings(n_per_ring: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let noise = Normal::new(0.0, 0.05).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..2u8 {
        let radius = if c == 1 { 3.0 } else { 1.0 };
        for i in 0..n_per_ring {
            let t = core::f64::consts::TAU * (i as f64 + r.gen_range(-0.3..0.3)) / n_per_ring as f64;
            rows.push(vec![radius * t.cos() + noise.sample(&mut r), radius * t.sin() + noise.sample(&mut r)]);
            labels.push(c);
        }
    }
    dataset(&rows, &labels)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut r = r.clone();
        r.push(v);
        r
    }).collect();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[p][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, p);
        for i in 0..n {
            if i != col {
                let f = m[i][col] / m[col][col];
                for j in col..=n {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

pub fn accuracy(pred: &[u8], truth: &[u8]) -> f64 {
    pred.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}
