//! Invariant checks over randomized inputs: embedding norms, estimator
//! identities against closed-form oracles, clustering guarantees, and
//! score bounds.

mod common;

use proptest::prelude::*;

use qkmeans::backend::{self, builtin_profile};
use qkmeans::cluster::{self, ClusterConfig};
use qkmeans::data;
use qkmeans::dist::{self, BlockSpec, EstimatorConfig};
use qkmeans::embed::{amplitude_pair_states, Embedding, VectorPair};
use qkmeans::metrics;
use qkmeans::qsim;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vec_pair(max_dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max_dim)
        .prop_flat_map(|d| {
            (
                proptest::collection::vec(-10.0..10.0f64, d),
                proptest::collection::vec(-10.0..10.0f64, d),
            )
        })
        .prop_filter("pair needs weight", |(a, b)| common::z_of(a, b) > 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn amplitude_states_are_unit_norm((a, b) in vec_pair(8)) {
        let s = amplitude_pair_states(&VectorPair::new(a, b).unwrap()).unwrap();
        prop_assert!((norm(&s.psi) - 1.0).abs() < 1e-9);
        prop_assert!((norm(&s.phi) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn amplitude_estimate_equals_squared_euclidean((a, b) in vec_pair(8)) {
        let profile = builtin_profile("ideal").unwrap();
        let cfg = EstimatorConfig::analytic(Embedding::Amplitude);
        let pair = VectorPair::new(a.clone(), b.clone()).unwrap();
        let est = dist::estimate(&pair, &cfg, &profile, 0).unwrap();
        let oracle = common::euclid_sq(&a, &b);
        prop_assert!((est.sq_distance - oracle).abs() <= 1e-9 * (1.0 + oracle));
        prop_assert!((est.distance - est.sq_distance.sqrt()).abs() <= 1e-12);
        prop_assert!((est.p0 + est.p1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn angle_estimate_matches_the_closed_form((a, b) in vec_pair(8)) {
        let profile = builtin_profile("ideal").unwrap();
        let cfg = EstimatorConfig::analytic(Embedding::Angle);
        let pair = VectorPair::new(a.clone(), b.clone()).unwrap();
        let est = dist::estimate(&pair, &cfg, &profile, 0).unwrap();
        let oracle = common::angle_sq_distance_closed_form(&a, &b);
        prop_assert!(
            (est.sq_distance - oracle).abs() <= 1e-9 * (1.0 + oracle.abs()),
            "circuit {} vs closed form {}", est.sq_distance, oracle
        );
    }

    #[test]
    fn estimates_are_symmetric_nonnegative_and_zero_on_self((a, b) in vec_pair(8)) {
        let profile = builtin_profile("ideal").unwrap();
        for embedding in [Embedding::Amplitude, Embedding::Angle] {
            let cfg = EstimatorConfig::analytic(embedding);
            let ab = dist::estimate(
                &VectorPair::new(a.clone(), b.clone()).unwrap(), &cfg, &profile, 0,
            ).unwrap();
            let ba = dist::estimate(
                &VectorPair::new(b.clone(), a.clone()).unwrap(), &cfg, &profile, 0,
            ).unwrap();
            prop_assert!(ab.distance >= 0.0);
            prop_assert!((ab.distance - ba.distance).abs() <= 1e-10 * (1.0 + ab.distance));
            if norm(&a) > 1e-9 {
                let aa = dist::estimate(
                    &VectorPair::new(a.clone(), a.clone()).unwrap(), &cfg, &profile, 0,
                ).unwrap();
                let z = common::z_of(&a, &a);
                prop_assert!(
                    aa.sq_distance.abs() <= 1e-10 * (1.0 + z),
                    "d^2(a,a) = {} at z = {z}", aa.sq_distance
                );
            }
        }
    }

    #[test]
    fn zero_padding_does_not_move_amplitude_estimates((a, b) in vec_pair(6), pad in 1..4usize) {
        let profile = builtin_profile("ideal").unwrap();
        let cfg = EstimatorConfig::analytic(Embedding::Amplitude);
        let plain = dist::estimate(
            &VectorPair::new(a.clone(), b.clone()).unwrap(), &cfg, &profile, 0,
        ).unwrap();
        let mut ap = a.clone();
        let mut bp = b.clone();
        ap.extend(std::iter::repeat(0.0).take(pad));
        bp.extend(std::iter::repeat(0.0).take(pad));
        let padded = dist::estimate(
            &VectorPair::new(ap, bp).unwrap(), &cfg, &profile, 0,
        ).unwrap();
        prop_assert!((plain.sq_distance - padded.sq_distance).abs() <= 1e-9 * (1.0 + plain.sq_distance));
    }

    #[test]
    fn block_sums_dominate_the_full_distance((a, b) in vec_pair(8), half_block in 1..3usize) {
        let profile = builtin_profile("ideal").unwrap();
        let full = EstimatorConfig::analytic(Embedding::Amplitude);
        let mut blocked = full.clone();
        blocked.block = BlockSpec::Size(2 * half_block);
        let pair = VectorPair::new(a.clone(), b.clone()).unwrap();
        let whole = dist::estimate(&pair, &full, &profile, 0).unwrap().distance;
        let sub = dist::estimate(&pair, &blocked, &profile, 0).unwrap().distance;
        prop_assert!(sub >= whole - 1e-9 * (1.0 + whole));
        let oracle = common::blockwise_euclidean_sum(&a, &b, 2 * half_block);
        prop_assert!((sub - oracle).abs() <= 1e-9 * (1.0 + oracle));
    }

    #[test]
    fn readout_mitigation_inverts_the_channel(
        p in 0.0..1.0f64,
        p01 in 0.0..0.45f64,
        p10 in 0.0..0.45f64,
    ) {
        let observed = qsim::apply_readout(p, p01, p10);
        let back = qsim::mitigate_readout(observed, p01, p10).unwrap();
        prop_assert!((back - p).abs() <= 1e-10);
    }

    #[test]
    fn depolarizing_shrinks_toward_half(p in 0.0..1.0f64, lambda in 0.0..1.0f64) {
        let out = qsim::apply_depolarizing(p, lambda);
        prop_assert!((out - 0.5).abs() <= (p - 0.5).abs() + 1e-15);
        prop_assert!((0.0..=1.0).contains(&out));
    }

    #[test]
    fn assignment_is_invariant_under_monotone_transforms(
        rows in proptest::collection::vec(
            proptest::collection::vec(0.0..100.0f64, 3),
            1..12,
        )
    ) {
        let plain = cluster::assign(&rows);
        let squared: Vec<Vec<f64>> = rows.iter()
            .map(|r| r.iter().map(|&x| x * x).collect())
            .collect();
        let affine: Vec<Vec<f64>> = rows.iter()
            .map(|r| r.iter().map(|&x| 2.0 * x + 1.0).collect())
            .collect();
        prop_assert_eq!(&cluster::assign(&squared), &plain);
        prop_assert_eq!(&cluster::assign(&affine), &plain);
    }

    #[test]
    fn alignment_never_hurts_raw_accuracy(
        pairs in proptest::collection::vec((0..5usize, 0..5usize), 10..80)
    ) {
        let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let pred: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let before = metrics::raw_accuracy(&metrics::confusion(&truth, &pred).unwrap()).unwrap();
        let perm = metrics::align_labels(&truth, &pred).unwrap();
        let aligned = metrics::apply_alignment(&pred, &perm);
        let after = metrics::raw_accuracy(&metrics::confusion(&truth, &aligned).unwrap()).unwrap();
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn scores_stay_in_the_unit_interval(
        pairs in proptest::collection::vec((0..4usize, 0..4usize), 4..60)
    ) {
        let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let pred: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let cm = metrics::confusion(&truth, &pred).unwrap();
        for score in [metrics::balanced_accuracy(&cm), metrics::raw_accuracy(&cm)] {
            let s = score.unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        }
        if let Ok(wp) = metrics::weighted_precision(&cm) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&wp));
        }
    }
}

#[test]
fn sampled_frequencies_track_exact_probabilities() {
    let profile = builtin_profile("ideal").unwrap();
    let pair = VectorPair::new(vec![1.0, 0.0], vec![1.0, 1.0]).unwrap();
    let circuit = dist::build_swap_test(&pair, Embedding::Amplitude).unwrap();
    let exact = qsim::exact_prob1(&circuit, circuit.measured()[0]).unwrap();

    let shots = 1024u64;
    let trials = 200u64;
    let cfg = EstimatorConfig::sampled(Embedding::Amplitude, shots);
    let mut sum = 0.0;
    for t in 0..trials {
        sum += dist::estimate(&pair, &cfg, &profile, t).unwrap().p1;
    }
    let mean = sum / trials as f64;
    // Mean of 200 binomial frequencies: 5 sigma of the sampling error.
    let sigma = (exact * (1.0 - exact) / (shots * trials) as f64).sqrt();
    assert!(
        (mean - exact).abs() < 5.0 * sigma,
        "sampled mean {mean} strayed from exact {exact} (sigma {sigma:.2e})"
    );
}

#[test]
fn lloyd_never_worsens_the_initial_objective() {
    for t in 0..20u64 {
        let k = 2 + (t as usize % 3);
        let ds = data::gen_clusters(k, 8, 2, 1.0, 2.0, 300 + t).unwrap();
        let mut cfg = ClusterConfig::new(k);
        cfg.seed = t;
        let init = cluster::init_centroids(&ds.points, k, 0.0, t).unwrap();
        let first: Vec<Vec<f64>> = ds
            .points
            .iter()
            .map(|p| init.iter().map(|c| common::euclid_sq(p, c)).collect())
            .collect();
        let initial_labels = cluster::assign(&first);
        let initial = cluster::wcss(&ds.points, &initial_labels, &init);

        let run = cluster::kmeans_classical(&ds.points, &cfg).unwrap();
        let final_wcss = cluster::wcss(&ds.points, &run.labels, &run.centroids);
        assert!(
            final_wcss <= initial + 1e-9,
            "dataset {t}: Lloyd went uphill, {initial} -> {final_wcss}"
        );
    }
}

#[test]
fn cluster_labels_are_dense_and_every_centroid_has_members() {
    for t in 0..20u64 {
        let k = 2 + (t as usize % 4);
        let ds = data::gen_clusters(k, 5, 3, 2.0, 0.5, 900 + t).unwrap();
        let mut cfg = ClusterConfig::new(k);
        cfg.seed = t;
        let run = cluster::kmeans_classical(&ds.points, &cfg).unwrap();
        let m = run.centroids.len();
        assert!(m >= 1 && m <= k);
        assert!(run.labels.iter().all(|&l| l < m));
        for c in 0..m {
            assert!(run.labels.contains(&c), "dataset {t}: centroid {c} lost its members");
        }
    }
}

#[test]
fn clustering_is_bit_reproducible() {
    let ds = data::gen_clusters(3, 10, 2, 0.3, 2.0, 4).unwrap();
    let profile = builtin_profile("ideal").unwrap();
    let mut cfg = ClusterConfig::new(3);
    cfg.seed = 13;
    cfg.estimator = EstimatorConfig::sampled(Embedding::Amplitude, 2048);
    let a = cluster::kmeans_quantum(&ds.points, &cfg, &profile).unwrap();
    let b = cluster::kmeans_quantum(&ds.points, &cfg, &profile).unwrap();
    assert_eq!(a.labels, b.labels);
    assert_eq!(a.iterations, b.iterations);
    for (ca, cb) in a.centroids.iter().zip(&b.centroids) {
        for (xa, xb) in ca.iter().zip(cb) {
            assert_eq!(xa.to_bits(), xb.to_bits());
        }
    }
}

#[test]
fn elbow_objective_never_rises_with_k() {
    let ds = data::gen_clusters(4, 10, 2, 0.4, 2.0, 17).unwrap();
    let curve = data::elbow_curve(&ds.points, 8, 3).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-9, "curve rose: {curve:?}");
    }
}

#[test]
fn full_rank_pca_preserves_pairwise_distances() {
    let ds = data::gen_clusters(3, 10, 4, 1.0, 2.0, 23).unwrap();
    let model = data::pca_fit(&ds.points, 4).unwrap();
    let projected = data::pca_transform(&model, &ds.points).unwrap();
    for i in (0..ds.points.len()).step_by(7) {
        for j in (i + 1..ds.points.len()).step_by(5) {
            let before = common::euclid_sq(&ds.points[i], &ds.points[j]);
            let after = common::euclid_sq(&projected[i], &projected[j]);
            assert!(
                (before - after).abs() <= 1e-9 * (1.0 + before),
                "distance ({i},{j}) moved: {before} vs {after}"
            );
        }
    }
}

#[test]
fn tight_generated_clusters_sit_nearest_their_own_center() {
    // Separation dwarfs the spread, so every point must be closer to its
    // own cluster's mean than to any other.
    let ds = data::gen_clusters(4, 12, 3, 0.01, 4.0, 31).unwrap();
    let labels = ds.true_labels.unwrap();
    let mut means = vec![vec![0.0; 3]; 4];
    let mut counts = vec![0usize; 4];
    for (p, &l) in ds.points.iter().zip(&labels) {
        counts[l] += 1;
        for (m, x) in means[l].iter_mut().zip(p) {
            *m += x;
        }
    }
    for (mean, &count) in means.iter_mut().zip(&counts) {
        for m in mean.iter_mut() {
            *m /= count as f64;
        }
    }
    for (p, &l) in ds.points.iter().zip(&labels) {
        let own = common::euclid_sq(p, &means[l]);
        for (c, mean) in means.iter().enumerate() {
            if c != l {
                assert!(
                    own < common::euclid_sq(p, mean),
                    "point strayed from its generating cluster"
                );
            }
        }
    }
}

#[test]
fn balanced_accuracy_is_invariant_under_joint_relabeling() {
    let truth = vec![0, 0, 0, 1, 1, 2, 2, 2, 2];
    let pred = vec![0, 1, 0, 1, 2, 2, 2, 0, 2];
    let base = metrics::balanced_accuracy(&metrics::confusion(&truth, &pred).unwrap()).unwrap();
    for perm in common::permutations(3) {
        let t: Vec<usize> = truth.iter().map(|&l| perm[l]).collect();
        let p: Vec<usize> = pred.iter().map(|&l| perm[l]).collect();
        let score = metrics::balanced_accuracy(&metrics::confusion(&t, &p).unwrap()).unwrap();
        assert!((score - base).abs() < 1e-12, "perm {perm:?} moved the score");
    }
}

#[test]
fn batch_results_keep_submission_order_and_tags() {
    let profile = builtin_profile("ideal").unwrap();
    let circuits: Vec<_> = (0..10)
        .map(|i| {
            let pair = VectorPair::new(vec![1.0, i as f64], vec![2.0, 1.0]).unwrap();
            let mut c = dist::build_swap_test(&pair, Embedding::Amplitude).unwrap();
            c.tag(format!("case{i}"));
            c
        })
        .collect();
    let job = backend::submit_batch(&circuits, 256, &profile, 8).unwrap();
    assert_eq!(job.results.len(), 10);
    for (i, r) in job.results.iter().enumerate() {
        assert_eq!(r.tags, vec![format!("case{i}")]);
        assert_eq!(r.counts[0].shots(), 256);
    }
}
