mod common;

use common::{blobs, rings};
use ehrsev_core::clustering::{
    connected_components, elbow_curve, fit_agglomerative, fit_gmm, fit_kmeans, fit_spectral, Affinity, GmmConfig,
    KmeansConfig, Linkage, SpectralConfig,
};
use ehrsev_core::metrics::{align_clusters, gaussian_log_likelihood};
use ehrsev_core::Matrix;
use proptest::prelude::*;

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn cloud() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 6..40).prop_map(|r| Matrix::from_rows(&r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lloyd_inertia_never_increases(x in cloud(), k in 1usize..5, seed in 0u64..1000) {
        let fit = fit_kmeans(&x, &KmeansConfig::new(k), seed).unwrap();
        for w in fit.inertia_trace.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "{:?}", fit.inertia_trace);
        }
        let recomputed: f64 = (0..x.rows()).map(|i| sq(x.row(i), fit.centroids.row(fit.assignments[i]))).sum();
        prop_assert!((recomputed - fit.inertia).abs() <= 1e-9 * recomputed.max(1.0));
        // every point sits with a nearest centroid
        for i in 0..x.rows() {
            let own = sq(x.row(i), fit.centroids.row(fit.assignments[i]));
            for c in 0..k {
                prop_assert!(own <= sq(x.row(i), fit.centroids.row(c)) + 1e-9);
            }
        }
    }

    #[test]
    fn merge_heights_are_monotone(x in cloud(), k in 1usize..5) {
        let k = k.min(x.rows());
        for linkage in Linkage::ALL {
            let fit = fit_agglomerative(&x, linkage, k).unwrap();
            let merges = &fit.tree.merges;
            prop_assert_eq!(merges.len(), x.rows() - 1);
            for w in merges.windows(2) {
                prop_assert!(w[1].distance >= w[0].distance - 1e-9, "{} {:?}", linkage.name(), merges);
            }
            prop_assert_eq!(merges.last().unwrap().size, x.rows());
            let mut ids = fit.assignments.clone();
            ids.sort_unstable();
            ids.dedup();
            prop_assert_eq!(ids.len(), k);
        }
    }
}

#[test]
fn single_linkage_free_merge_on_a_line() {
    // 0, 1, 3 on a line: complete merges {0,1} at 1 then at 3
    let x = Matrix::from_rows(&[[0.0], [1.0], [3.0]]).unwrap();
    let fit = fit_agglomerative(&x, Linkage::Complete, 1).unwrap();
    let d: Vec<f64> = fit.tree.merges.iter().map(|m| m.distance).collect();
    assert_eq!(d, vec![1.0, 3.0]);
    let avg = fit_agglomerative(&x, Linkage::Average, 1).unwrap();
    assert_eq!(avg.tree.merges[1].distance, 2.5);
    // ward: sqrt(2 * n1 n2 / (n1 + n2)) * |centroid gap| = sqrt(4/3) * 2.5
    let ward = fit_agglomerative(&x, Linkage::Ward, 1).unwrap();
    assert!((ward.tree.merges[1].distance - (4.0f64 / 3.0).sqrt() * 2.5).abs() < 1e-12);
}

#[test]
fn em_log_likelihood_never_decreases() {
    for seed in 0..5 {
        let ds = blobs(60, 2, 3.0, seed);
        let fit = fit_gmm(ds.features(), &GmmConfig::new(3), seed).unwrap();
        let trace = &fit.params.log_likelihood_trace;
        assert!(trace.len() >= 2);
        for w in trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-8 * w[0].abs(), "seed {seed}: {trace:?}");
        }
    }
}

#[test]
fn gmm_recovers_separated_blobs() {
    let ds = blobs(100, 2, 8.0, 11);
    let fit = fit_gmm(ds.features(), &GmmConfig::new(2), 3).unwrap();
    let map = align_clusters(&fit.assignments, ds.labels()).unwrap();
    assert!(map.scores.accuracy >= 0.99, "{}", map.scores.accuracy);
    let wsum: f64 = fit.params.weights.iter().sum();
    assert!((wsum - 1.0).abs() < 1e-12);
    // the reported likelihood is the likelihood of the final parameters up to one M-step
    let ll = gaussian_log_likelihood(ds.features(), &fit.params).unwrap();
    assert!(ll >= fit.params.log_likelihood().unwrap() - 1e-6 * ll.abs());
}

#[test]
fn kmeans_recovers_separated_blobs() {
    let ds = blobs(100, 3, 8.0, 5);
    let fit = fit_kmeans(ds.features(), &KmeansConfig::new(2), 0).unwrap();
    assert_eq!(align_clusters(&fit.assignments, ds.labels()).unwrap().scores.accuracy, 1.0);
}

#[test]
fn elbow_decreases_on_blobs() {
    let ds = blobs(50, 2, 6.0, 2);
    let curve = elbow_curve(ds.features(), 1..=6, 0).unwrap();
    assert_eq!(curve.iter().map(|p| p.k).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
    for w in curve.windows(2) {
        assert!(w[1].inertia <= w[0].inertia + 1e-9);
    }
}

#[test]
fn nearest_neighbour_spectral_separates_rings() {
    let ds = rings(100, 4);
    let cfg = SpectralConfig::new(Affinity::NearestNeighbors { n_neighbors: 6 });
    let fit = fit_spectral(ds.features(), &cfg, 0).unwrap();
    assert_eq!(fit.graph_components, 2);
    let map = align_clusters(&fit.assignments, ds.labels()).unwrap();
    assert_eq!(map.scores.accuracy, 1.0);
    assert!(fit.eigenvalues[0].abs() < 1e-8 && fit.eigenvalues[1].abs() < 1e-8);
    // k-means cannot split concentric rings
    let km = fit_kmeans(ds.features(), &KmeansConfig::new(2), 0).unwrap();
    assert!(align_clusters(&km.assignments, ds.labels()).unwrap().scores.accuracy < 0.8);
}

#[test]
fn rbf_spectral_separates_blobs() {
    let ds = blobs(60, 2, 8.0, 9);
    let fit = fit_spectral(ds.features(), &SpectralConfig::new(Affinity::Rbf { gamma: 0.5 }), 1).unwrap();
    assert_eq!(align_clusters(&fit.assignments, ds.labels()).unwrap().scores.accuracy, 1.0);
    assert_eq!(connected_components(&Matrix::identity(3)), 3);
}

#[test]
fn fits_are_deterministic_per_seed() {
    let ds = blobs(40, 2, 2.0, 1);
    let x = ds.features();
    assert_eq!(fit_kmeans(x, &KmeansConfig::new(3), 7).unwrap(), fit_kmeans(x, &KmeansConfig::new(3), 7).unwrap());
    assert_eq!(fit_gmm(x, &GmmConfig::new(2), 7).unwrap(), fit_gmm(x, &GmmConfig::new(2), 7).unwrap());
    let cfg = SpectralConfig::new(Affinity::NearestNeighbors { n_neighbors: 5 });
    assert_eq!(fit_spectral(x, &cfg, 7).unwrap(), fit_spectral(x, &cfg, 7).unwrap());
}
