mod common;

use common::{accuracy, blobs, dataset, schema, solve};
use ehrsev_core::classifiers::*;
use ehrsev_core::data::Dataset;
use ehrsev_core::neural_net::{fit_mlp, MlpConfig};
use ehrsev_core::{Error, Matrix};
use proptest::prelude::*;

fn gini(c: [f64; 2]) -> f64 {
    let n = c[0] + c[1];
    if n == 0.0 { 0.0 } else { 1.0 - (c[0] / n).powi(2) - (c[1] / n).powi(2) }
}

/// Every (feature, midpoint) candidate with its Gini decrease, in (feature, threshold) order.
fn exhaustive_splits(rows: &[Vec<f64>], y: &[u8]) -> Vec<(usize, f64, f64)> {
    let n = rows.len() as f64;
    let mut total = [0.0; 2];
    y.iter().for_each(|&t| total[t as usize] += 1.0);
    let mut out = Vec::new();
    for f in 0..rows[0].len() {
        let mut vals: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let thr = 0.5 * (w[0] + w[1]);
            let mut left = [0.0; 2];
            for (r, &t) in rows.iter().zip(y) {
                if r[f] <= thr {
                    left[t as usize] += 1.0;
                }
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = left[0] + left[1];
            let gain = gini(total) - nl / n * gini(left) - (n - nl) / n * gini(right);
            out.push((f, thr, gain));
        }
    }
    out
}

fn grid_table() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<u8>)> {
    (1usize..4).prop_flat_map(|d| {
        (4usize..=50).prop_flat_map(move |n| {
            (
                prop::collection::vec(prop::collection::vec((0i32..6).prop_map(f64::from), d), n),
                prop::collection::vec(0u8..2, n),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn root_split_matches_exhaustive_search((rows, mut y) in grid_table()) {
        y[0] = 0;
        y[1] = 1;
        let ds = dataset(&rows, &y);
        let model = fit_decision_tree(&ds, &TreeConfig { max_depth: Some(1), ..TreeConfig::default() }).unwrap();
        let ModelParams::DecisionTree(tree) = &model.params else { unreachable!() };
        let cands = exhaustive_splits(&rows, &y);
        match tree.nodes[0] {
            TreeNode::Split { feature, threshold, .. } => {
                let best = cands.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
                let chosen = cands.iter().find(|c| c.0 == feature && c.1 == threshold).expect("candidate threshold");
                prop_assert!((chosen.2 - best).abs() < 1e-12, "chosen {chosen:?}, best {best}");
                // nothing earlier in (feature, threshold) order is clearly better
                for c in cands.iter().take_while(|c| (c.0, c.1) != (feature, threshold)) {
                    prop_assert!(c.2 <= chosen.2 + 1e-9);
                }
            }
            TreeNode::Leaf { .. } => prop_assert!(cands.is_empty()),
        }
    }

    #[test]
    fn fast_large_margin_closes_the_duality_gap(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, 0u8..2), 50),
        c in prop::sample::select(vec![0.1, 1.0, 10.0]),
        seed in 0u64..100,
    ) {
        let rows: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.0, p.1]).collect();
        let mut y: Vec<u8> = pts.iter().map(|p| p.2).collect();
        y[0] = 0;
        y[1] = 1;
        let ds = dataset(&rows, &y);
        let cfg = FlmConfig { c, tol: 1e-6, max_epochs: 20_000, seed, ..FlmConfig::default() };
        let model = fit_fast_large_margin(&ds, &cfg).unwrap();
        let ModelParams::FastLargeMargin(m) = &model.params else { unreachable!() };
        prop_assert!(m.converged);
        let gap = m.primal_objective - m.dual_objective;
        prop_assert!(gap >= -1e-9, "weak duality violated: {gap}");
        prop_assert!(gap <= 1e-3 * m.primal_objective.max(1.0), "gap {gap}");
        prop_assert!(m.alphas.iter().all(|a| (0.0..=c).contains(a)));
        // w = sum a_i y_i x_i, bias = sum a_i y_i
        let sign = |t: u8| if t == 1 { 1.0 } else { -1.0 };
        for j in 0..2 {
            let w: f64 = (0..50).map(|i| m.alphas[i] * sign(y[i]) * rows[i][j]).sum();
            prop_assert!((w - m.weights[j]).abs() < 1e-9);
        }
        let b: f64 = (0..50).map(|i| m.alphas[i] * sign(y[i])).sum();
        prop_assert!((b - m.bias).abs() < 1e-9);
    }
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    (-gamma * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()).exp()
}

/// Minimum of `1/2 a'Qa - e'a` over the box and `y'a = 0` by enumerating
/// which variables sit at 0, at `c` or strictly inside.
fn brute_force_dual(q: &[Vec<f64>], y: &[f64], c: f64) -> (f64, Vec<f64>) {
    let n = y.len();
    let mut best = (f64::INFINITY, vec![]);
    for code in 0..3usize.pow(n as u32) {
        let state: Vec<usize> = (0..n).map(|i| code / 3usize.pow(i as u32) % 3).collect();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        if free.is_empty() {
            if y.iter().zip(&alpha).map(|(a, b)| a * b).sum::<f64>().abs() > 1e-12 {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = vec![vec![0.0; m + 1]; m + 1];
            let mut rhs = vec![0.0; m + 1];
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[r][s] = q[i][j];
                }
                a[r][m] = y[i];
                a[m][r] = y[i];
                rhs[r] = 1.0 - (0..n).filter(|j| state[*j] == 1).map(|j| q[i][j] * c).sum::<f64>();
            }
            rhs[m] = -(0..n).filter(|j| state[*j] == 1).map(|j| y[j] * c).sum::<f64>();
            let Some(sol) = solve(&a, &rhs) else { continue };
            if sol[..m].iter().any(|v| *v < -1e-12 || *v > c + 1e-12) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = sol[r];
            }
        }
        let obj = 0.5 * (0..n).map(|i| (0..n).map(|j| alpha[i] * alpha[j] * q[i][j]).sum::<f64>()).sum::<f64>()
            - alpha.iter().sum::<f64>();
        if obj < best.0 {
            best = (obj, alpha);
        }
    }
    best
}

#[test]
fn svc_dual_matches_brute_force() {
    let mut r = common::rng(21);
    use rand::Rng;
    for trial in 0..8 {
        let rows: Vec<Vec<f64>> = (0..6).map(|_| vec![r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)]).collect();
        let mut y: Vec<u8> = (0..6).map(|_| r.gen_range(0..2)).collect();
        y[0] = 0;
        y[1] = 1;
        let c = [0.5, 1.0, 5.0][trial % 3];
        let gamma = 0.7;
        let sign: Vec<f64> = y.iter().map(|&t| if t == 1 { 1.0 } else { -1.0 }).collect();
        let q: Vec<Vec<f64>> =
            (0..6).map(|i| (0..6).map(|j| sign[i] * sign[j] * rbf(&rows[i], &rows[j], gamma)).collect()).collect();
        let (min, alpha) = brute_force_dual(&q, &sign, c);
        let ds = dataset(&rows, &y);
        let cfg = SvcConfig { c, kernel: Kernel::Rbf, gamma: Some(gamma), tol: 1e-10, max_iter: 100_000 };
        let model = fit_svc(&ds, &cfg).unwrap();
        let ModelParams::Svc(m) = &model.params else { unreachable!() };
        assert!(m.converged);
        assert!((m.dual_objective + min).abs() < 1e-8, "trial {trial}: {} vs {}", m.dual_objective, -min);
        // decision values without the bias are unique at the optimum
        for x in &rows {
            let oracle: f64 = (0..6).map(|i| alpha[i] * sign[i] * rbf(&rows[i], x, gamma)).sum();
            assert!((m.decision(x) - m.bias - oracle).abs() < 1e-6);
        }
        // free support vectors lie on the margin
        for (i, x) in rows.iter().enumerate() {
            if alpha[i] > 1e-6 && alpha[i] < c - 1e-6 {
                assert!((sign[i] * m.decision(x) - 1.0).abs() < 1e-6, "trial {trial} row {i}");
            }
        }
    }
}

/// Ridge-penalized logistic regression by plain IRLS with an unpenalized intercept.
fn irls_oracle(rows: &[Vec<f64>], y: &[u8], l2: f64) -> Vec<f64> {
    let p = rows[0].len() + 1;
    let mut beta = vec![0.0; p];
    for _ in 0..200 {
        let mut a = vec![vec![0.0; p]; p];
        let mut b = vec![0.0; p];
        for (r, &t) in rows.iter().zip(y) {
            let z: Vec<f64> = std::iter::once(1.0).chain(r.iter().copied()).collect();
            let eta: f64 = z.iter().zip(&beta).map(|(u, v)| u * v).sum();
            let mu = 1.0 / (1.0 + (-eta).exp());
            let w = mu * (1.0 - mu);
            let work = eta + (f64::from(t) - mu) / w;
            for i in 0..p {
                b[i] += w * z[i] * work;
                for j in 0..p {
                    a[i][j] += w * z[i] * z[j];
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate().skip(1) {
            row[i] += l2;
        }
        let next = solve(&a, &b).unwrap();
        let step = next.iter().zip(&beta).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        beta = next;
        if step < 1e-10 {
            break;
        }
    }
    beta
}

fn noisy_linear(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
    use rand::Rng;
    let mut r = common::rng(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)]).collect();
    let y = rows
        .iter()
        .map(|x| {
            let p = 1.0 / (1.0 + (-(0.3 + 1.2 * x[0] - 0.8 * x[1])).exp());
            u8::from(r.gen::<f64>() < p)
        })
        .collect();
    (rows, y)
}

#[test]
fn logistic_matches_irls_oracle() {
    for seed in 0..5 {
        let (rows, y) = noisy_linear(20, seed);
        let ds = dataset(&rows, &y);
        for l2 in [0.1, 1.0, 5.0] {
            let model = fit_logistic(&ds, &LogisticConfig { l2_reg: l2, max_iter: 100, tol: 1e-10 }).unwrap();
            let ModelParams::Logistic(m) = &model.params else { unreachable!() };
            assert!(m.converged);
            let beta = irls_oracle(&rows, &y, l2);
            assert!((m.intercept - beta[0]).abs() < 1e-6, "seed {seed} l2 {l2}");
            for j in 0..2 {
                assert!((m.coefficients[j] - beta[j + 1]).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn glm_equals_unpenalized_logistic() {
    let (rows, y) = noisy_linear(80, 3);
    let ds = dataset(&rows, &y);
    let glm = fit_glm(&ds, &GlmConfig::default()).unwrap();
    let lr = fit_logistic(&ds, &LogisticConfig { l2_reg: 0.0, max_iter: 100, tol: 1e-10 }).unwrap();
    let (ModelParams::Glm(g), ModelParams::Logistic(l)) = (&glm.params, &lr.params) else { unreachable!() };
    assert!(g.linear.converged);
    assert!((g.linear.intercept - l.intercept).abs() < 1e-6);
    for j in 0..2 {
        assert!((g.linear.coefficients[j] - l.coefficients[j]).abs() < 1e-6);
    }
    let dev: f64 = -2.0
        * rows
            .iter()
            .zip(&y)
            .map(|(x, &t)| {
                let p = g.linear.score(x);
                if t == 1 { p.ln() } else { (1.0 - p).ln() }
            })
            .sum::<f64>();
    assert!((g.deviance - dev).abs() < 1e-6);
    let n1 = y.iter().filter(|&&t| t == 1).count() as f64;
    let n = y.len() as f64;
    let null = -2.0 * (n1 * (n1 / n).ln() + (n - n1) * ((n - n1) / n).ln());
    assert!((g.null_deviance - null).abs() < 1e-9);
    assert!(g.deviance < g.null_deviance);
}

fn all_models(ds: &Dataset) -> Vec<FittedModel> {
    let mlp = MlpConfig { hidden_layers: vec![8], epochs: 30, learning_rate: 0.05, batch_size: 8, ..MlpConfig::default() };
    let mut models = vec![
        fit_decision_tree(ds, &TreeConfig::default()).unwrap(),
        fit_random_forest(ds, &ForestConfig { n_trees: 15, ..ForestConfig::default() }).unwrap(),
        fit_adaboost(ds, &AdaBoostConfig { n_rounds: 20 }).unwrap(),
        fit_knn(ds, &KnnConfig { k: 5 }).unwrap(),
        fit_gaussian_nb(ds, &NaiveBayesConfig::default()).unwrap(),
        fit_logistic(ds, &LogisticConfig::default()).unwrap(),
        fit_glm(ds, &GlmConfig::default()).unwrap(),
        fit_svc(ds, &SvcConfig::default()).unwrap(),
        fit_fast_large_margin(ds, &FlmConfig::default()).unwrap(),
        FittedModel::new(ds, ModelParams::Mlp(fit_mlp(ds, &mlp).unwrap())),
    ];
    for p in BoostPreset::ALL {
        models.push(fit_gbdt(ds, &BoostConfig { n_rounds: 20, ..BoostConfig::preset(p) }).unwrap());
    }
    models
}

#[test]
fn every_classifier_learns_separated_blobs() {
    let train = blobs(60, 3, 4.0, 1);
    let test = blobs(60, 3, 4.0, 2);
    for m in all_models(&train) {
        let acc = accuracy(&m.predict(&test).unwrap(), test.labels());
        assert!(acc >= 0.9, "{}: {acc}", m.algorithm());
    }
}

#[test]
fn labels_follow_scores_and_rules() {
    let train = blobs(40, 2, 1.0, 4);
    for m in all_models(&train) {
        let scores = m.predict_score(&train).unwrap();
        let labels = m.predict(&train).unwrap();
        let rule = m.params.decision_rule();
        for (s, l) in scores.iter().zip(&labels) {
            assert_eq!(rule.label(*s), *l, "{}", m.algorithm());
            if rule != DecisionRule::Margin {
                assert!((0.0..=1.0).contains(s), "{}: {s}", m.algorithm());
            }
        }
    }
    assert_eq!(DecisionRule::Majority.label(0.5), 0);
    assert_eq!(DecisionRule::Probability.label(0.5), 1);
    assert_eq!(DecisionRule::Margin.label(0.0), 1);
}

#[test]
fn column_order_does_not_matter_but_names_do() {
    let train = blobs(30, 3, 2.0, 6);
    let perm = [2usize, 0, 1];
    let names = ["f2", "f0", "f1"];
    let shuffled =
        Dataset::new(schema(&names), train.features().select_columns(&perm), train.labels().to_vec()).unwrap();
    let dropped = Dataset::new(schema(&["f0", "f1"]), train.features().select_columns(&[0, 1]), train.labels().to_vec())
        .unwrap();
    for m in all_models(&train) {
        assert_eq!(m.predict_score(&train).unwrap(), m.predict_score(&shuffled).unwrap(), "{}", m.algorithm());
        match m.predict(&dropped) {
            Err(Error::FeatureMismatch { missing, extra }) => {
                assert_eq!(missing, vec!["f2".to_string()]);
                assert!(extra.is_empty());
            }
            other => panic!("{}: {other:?}", m.algorithm()),
        }
    }
}

#[test]
fn fits_are_deterministic() {
    let train = blobs(30, 2, 1.5, 7);
    let a = all_models(&train);
    let b = all_models(&train);
    assert_eq!(a, b);
}

#[test]
fn tree_predictions_survive_affine_feature_maps() {
    let (rows, y) = noisy_linear(60, 9);
    let grid: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| (v * 4.0).round()).collect()).collect();
    let moved: Vec<Vec<f64>> = grid.iter().map(|r| vec![4.0 * r[0] + 3.0, 2.0 * r[1] - 5.0]).collect();
    let a = dataset(&grid, &y);
    let b = dataset(&moved, &y);
    let ma = fit_decision_tree(&a, &TreeConfig::default()).unwrap();
    let mb = fit_decision_tree(&b, &TreeConfig::default()).unwrap();
    assert_eq!(ma.predict(&a).unwrap(), mb.predict(&b).unwrap());
    let fa = fit_random_forest(&a, &ForestConfig { n_trees: 10, ..ForestConfig::default() }).unwrap();
    let fb = fit_random_forest(&b, &ForestConfig { n_trees: 10, ..ForestConfig::default() }).unwrap();
    assert_eq!(fa.predict_score(&a).unwrap(), fb.predict_score(&b).unwrap());
}

#[test]
fn knn_is_invariant_to_global_scaling() {
    let (rows, y) = noisy_linear(50, 10);
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * 8.0).collect()).collect();
    let (a, b) = (dataset(&rows, &y), dataset(&scaled, &y));
    let ka = fit_knn(&a, &KnnConfig { k: 3 }).unwrap();
    let kb = fit_knn(&b, &KnnConfig { k: 3 }).unwrap();
    assert_eq!(ka.predict_score(&a).unwrap(), kb.predict_score(&b).unwrap());
    let one = fit_knn(&a, &KnnConfig { k: 1 }).unwrap();
    assert_eq!(one.predict(&a).unwrap(), y);
}

#[test]
fn single_unbootstrapped_tree_forest_is_a_tree() {
    let (rows, y) = noisy_linear(60, 12);
    let ds = dataset(&rows, &y);
    let cfg = ForestConfig { n_trees: 1, bootstrap: false, max_features: Some(2), ..ForestConfig::default() };
    let forest = fit_random_forest(&ds, &cfg).unwrap();
    let tree = fit_decision_tree(&ds, &TreeConfig::default()).unwrap();
    let (ModelParams::RandomForest(f), ModelParams::DecisionTree(t)) = (&forest.params, &tree.params) else {
        unreachable!()
    };
    assert_eq!(&f.trees[0], t);
    assert_eq!(forest.predict(&ds).unwrap(), tree.predict(&ds).unwrap());
}

#[test]
fn forest_score_is_the_vote_share() {
    let (rows, y) = noisy_linear(60, 13);
    let ds = dataset(&rows, &y);
    let model = fit_random_forest(&ds, &ForestConfig { n_trees: 7, ..ForestConfig::default() }).unwrap();
    let ModelParams::RandomForest(f) = &model.params else { unreachable!() };
    for (x, s) in rows.iter().zip(model.predict_score(&ds).unwrap()) {
        let votes = f.trees.iter().filter(|t| t.predict(x) == 1).count();
        assert_eq!(s, votes as f64 / 7.0);
    }
}

#[test]
fn unsplittable_boosting_is_one_newton_step() {
    // constant feature: every tree is one leaf with -lr * G / (H + l2)
    let rows = vec![vec![1.0]; 10];
    let y = [1u8, 1, 1, 0, 0, 0, 0, 0, 0, 0];
    let ds = dataset(&rows, &y);
    let cfg = BoostConfig { n_rounds: 1, learning_rate: 0.3, base_score: Some(0.0), ..BoostConfig::preset(BoostPreset::XgboostLike) };
    let model = fit_gbdt(&ds, &cfg).unwrap();
    let ModelParams::Gbdt(m) = &model.params else { unreachable!() };
    let g = 10.0 * 0.5 - 3.0;
    let h = 10.0 * 0.25;
    let leaf = -0.3 * g / (h + 1.0);
    assert!((m.margin(&[1.0]) - leaf).abs() < 1e-12);
    assert_eq!(m.trees[0].n_leaves(), 1);
}

#[test]
fn zero_learning_rate_gives_the_prior() {
    let (rows, y) = noisy_linear(40, 14);
    let ds = dataset(&rows, &y);
    let prior = y.iter().filter(|&&t| t == 1).count() as f64 / 40.0;
    for p in BoostPreset::ALL {
        let model = fit_gbdt(&ds, &BoostConfig { learning_rate: 0.0, ..BoostConfig::preset(p) }).unwrap();
        for s in model.predict_score(&ds).unwrap() {
            assert!((s - prior).abs() < 1e-12);
        }
    }
    let bad = BoostConfig { learning_rate: -0.1, ..BoostConfig::preset(BoostPreset::XgboostLike) };
    assert!(fit_gbdt(&ds, &bad).is_err());
}

#[test]
fn boosting_training_loss_never_increases() {
    let (rows, y) = noisy_linear(120, 15);
    let ds = dataset(&rows, &y);
    for p in BoostPreset::ALL {
        let model = fit_gbdt(&ds, &BoostConfig { n_rounds: 40, ..BoostConfig::preset(p) }).unwrap();
        let ModelParams::Gbdt(m) = &model.params else { unreachable!() };
        assert_eq!(m.loss_trace.len(), 41);
        for w in m.loss_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{}: {:?}", p.name(), m.loss_trace);
        }
    }
}

#[test]
fn missing_values_follow_their_learned_branch() {
    // NaN rows are all positive; observed values carry no signal
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..40 {
        rows.push(vec![f64::from(i % 5)]);
        y.push((i % 2) as u8);
    }
    for _ in 0..20 {
        rows.push(vec![f64::NAN]);
        y.push(1);
    }
    let ds = dataset(&rows, &y);
    for p in [BoostPreset::XgboostLike, BoostPreset::LightgbmLike] {
        let model = fit_gbdt(&ds, &BoostConfig { n_rounds: 30, ..BoostConfig::preset(p) }).unwrap();
        let ModelParams::Gbdt(m) = &model.params else { unreachable!() };
        assert!(m.score(&[f64::NAN]) > 0.8, "{}", p.name());
        assert!(m.score(&[2.0]) < 0.7, "{}", p.name());
    }
    let strict = BoostConfig { allow_missing: false, ..BoostConfig::preset(BoostPreset::XgboostLike) };
    assert!(fit_gbdt(&ds, &strict).is_err());
}

#[test]
fn adaboost_alphas_follow_weighted_error() {
    let (rows, y) = noisy_linear(60, 16);
    let ds = dataset(&rows, &y);
    let model = fit_adaboost(&ds, &AdaBoostConfig { n_rounds: 10 }).unwrap();
    let ModelParams::AdaBoost(m) = &model.params else { unreachable!() };
    for (a, e) in m.alphas.iter().zip(&m.errors) {
        assert!(*e > 0.0 && *e < 0.5);
        assert!((a - ((1.0 - e) / e).ln()).abs() < 1e-12);
    }
}

#[test]
fn degenerate_inputs_are_rejected() {
    let ds = dataset(&[vec![0.0], vec![1.0], vec![2.0]], &[0, 1, 1]);
    assert!(fit_knn(&ds, &KnnConfig { k: 0 }).is_err());
    assert!(fit_knn(&ds, &KnnConfig { k: 4 }).is_err());
    let one = dataset(&[vec![0.0], vec![1.0]], &[1, 1]);
    assert!(fit_svc(&one, &SvcConfig::default()).is_err());
    assert!(fit_gaussian_nb(&one, &NaiveBayesConfig::default()).is_err());
    // a single-class forest is one constant leaf
    let f = fit_random_forest(&one, &ForestConfig::default()).unwrap();
    assert_eq!(f.predict(&one).unwrap(), vec![1, 1]);
    let mut nan = Matrix::zeros(3, 1);
    nan[(0, 0)] = f64::NAN;
    let bad = Dataset::new(schema(&["f0"]), nan, vec![0, 1, 1]).unwrap();
    assert!(fit_logistic(&bad, &LogisticConfig::default()).is_err());
}
