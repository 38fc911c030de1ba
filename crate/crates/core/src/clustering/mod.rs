//! Unsupervised learners. All fits are deterministic for a given seed.

mod gmm;
mod hierarchical;
mod kmeans;
mod spectral;

pub use gmm::{fit_gmm, GmmConfig, GmmFit, GmmParams};
pub use hierarchical::{fit_agglomerative, AgglomerativeFit, Linkage, Merge, MergeTree};
pub use kmeans::{elbow_curve, fit_kmeans, ElbowPoint, KmeansConfig, KmeansResult};
pub use spectral::{
    affinity_matrix, connected_components, default_gamma, fit_spectral, normalized_laplacian, Affinity,
    SpectralConfig, SpectralFit,
};
