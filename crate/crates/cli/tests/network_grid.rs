mod common;

use ehrsev::config::ModelConfig;
use ehrsev::experiment::Preprocessing;
use ehrsev::io::load_dataset;
use ehrsev::reproduce::table_config;
use ehrsev_core::neural_net::{fit_mlp, gradient_check, MlpModel};

/// Backpropagation agrees with central differences for every network the
/// reproduction grid can select, both at initialization and after training.
#[test]
fn reproduction_grid_networks_pass_gradient_check() {
    let dir = tempfile::tempdir().unwrap();
    let data = common::write_ehr(dir.path(), 200, 5);
    let cfg = table_config(14, &data, 42).unwrap();
    let ds = load_dataset(&data, true).unwrap();
    let prep = Preprocessing::fit(&cfg, &ds, true).unwrap();
    let ds = prep.apply(&ds).unwrap();
    let batch = ds.subset(&(0..8).collect::<Vec<_>>());
    let candidates = cfg.models[0].candidates(cfg.seed).unwrap();
    assert_eq!(candidates.len(), 3);
    for c in candidates {
        let ModelConfig::Mlp(m) = c else { panic!("grid holds networks only") };
        let fresh = MlpModel::init(ds.n_features(), &m).unwrap();
        let trained = fit_mlp(&ds, &m).unwrap();
        for model in [&fresh, &trained] {
            let g = gradient_check(model, &batch, 1e-5).unwrap();
            assert!(g.max_relative_error < 1e-4, "epochs {}: {g:?}", m.epochs);
            assert_eq!(g.checked + g.skipped, model.n_params());
            assert!(g.checked > g.skipped);
        }
    }
}
