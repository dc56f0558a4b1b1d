mod common;

use neighbor_lof::dataset::Dataset;
use neighbor_lof::method::{Methodology, SetKind};
use neighbor_lof::metrics::{auc, ranking, top_m_accuracy};
use neighbor_lof::neighbors::build_model;
use neighbor_lof::scoring::{lrd, outlier_factor, score_all, Forced, Verdict};
use neighbor_lof::{
    dataset::generate_synthetic, dataset::SyntheticSpec, dataset::SyntheticVariant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn knn_static_matches_classic_lof() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..8 {
        let n = rng.random_range(20..200);
        let dim = rng.random_range(1..8);
        let k = rng.random_range(1..n.min(25));
        let points = common::random_points(&mut rng, n, dim);
        let data = Dataset::from_rows(&points, None).unwrap();
        let model = build_model(&data, k, Methodology::StaticSorting).unwrap();
        let got = score_all(&model, SetKind::Knn, "FP-KNN-SS");
        let want = common::classic_lof(&points, k);
        for (g, w) in got.scores().iter().zip(&want) {
            assert!((g - w).abs() <= 1e-9, "n={n} dim={dim} k={k}: {g} vs {w}");
        }
    }
}

#[test]
fn knn_static_matches_classic_lof_on_synthetic() {
    let data = generate_synthetic(SyntheticSpec::new(SyntheticVariant::Data1, 3));
    let points = common::rows(&data);
    let model = build_model(&data, 12, Methodology::StaticSorting).unwrap();
    let got = score_all(&model, SetKind::Knn, "FP-KNN-SS");
    let want = common::classic_lof(&points, 12);
    let worst = got
        .scores()
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn isolated_point_scores_high_against_a_tight_cluster() {
    let mut rows: Vec<Vec<f64>> = (0..5)
        .flat_map(|i| (0..5).map(move |j| vec![i as f64 * 0.1, j as f64 * 0.1]))
        .collect();
    rows.push(vec![5.0, 5.0]);
    let data = Dataset::from_rows(&rows, None).unwrap();
    let model = build_model(&data, 3, Methodology::StaticSorting).unwrap();
    let scores = score_all(&model, SetKind::Knn, "FP-KNN-SS");
    let far = scores.scores()[25];
    assert!(far > 10.0, "{far}");
    let centre = scores.scores()[12];
    assert!((centre - 1.0).abs() < 0.05, "{centre}");
    let want = common::classic_lof(&rows, 3);
    for (g, w) in scores.scores().iter().zip(&want) {
        assert!((g - w).abs() <= 1e-9);
    }
}

#[test]
fn non_nan_of_seven_point_a_uses_d_context() {
    let data = common::seven_point_dataset();
    let model = build_model(&data, 3, Methodology::StaticSorting).unwrap();
    let (a, d) = (0, 3);
    let set_a = model.neighbor_set(a, SetKind::NonNan).unwrap();
    assert_eq!(set_a.members, vec![d]);
    let set_d = model.neighbor_set(d, SetKind::NonNan).unwrap();
    // reach-dist from A to D by hand: max(kd(D), |AD|).
    let p = common::SEVEN_POINTS;
    let kd = |x: usize| {
        let mut ds: Vec<f64> = (0..7)
            .filter(|&z| z != x)
            .map(|z| common::dist(&p[x], &p[z]))
            .collect();
        ds.sort_by(f64::total_cmp);
        ds[2]
    };
    let lrd_a = 1.0 / kd(d).max(common::dist(&p[a], &p[d]));
    assert!((lrd(&model, &set_a, a).unwrap() - lrd_a).abs() < 1e-12);
    let lrd_d = if set_d.is_empty() {
        lrd(&model, &model.neighbor_set(d, SetKind::Knn).unwrap(), d).unwrap()
    } else {
        lrd(&model, &set_d, d).unwrap()
    };
    match outlier_factor(&model, SetKind::NonNan, a).unwrap() {
        Verdict::Score(s) => {
            assert!(s.is_finite() && s > 0.0);
            assert!((s - lrd_d / lrd_a).abs() < 1e-12);
        }
        v => panic!("{v:?}"),
    }
}

fn ranks(keys: &[f64]) -> Vec<usize> {
    ranking(keys)
}

#[test]
fn rankings_are_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let points = common::random_points(&mut rng, 120, 3);
    let data = Dataset::from_rows(&points, None).unwrap();
    let scaled: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().map(|v| v * 8.0).collect())
        .collect();
    let scaled = Dataset::from_rows(&scaled, None).unwrap();
    for m in [Methodology::StaticSorting, Methodology::DynamicSelection] {
        let a = build_model(&data, 7, m).unwrap();
        let b = build_model(&scaled, 7, m).unwrap();
        for kind in SetKind::ALL {
            let sa = score_all(&a, kind, "a");
            let sb = score_all(&b, kind, "b");
            assert_eq!(ranks(sa.scores()), ranks(sb.scores()), "{kind:?} {m:?}");
            for (x, y) in sa.scores().iter().zip(sb.scores()) {
                assert!(x == y || (x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }
}

#[test]
fn non_forced_scores_are_positive_and_finite() {
    let data = generate_synthetic(SyntheticSpec::new(SyntheticVariant::Data3, 4));
    for m in [Methodology::StaticSorting, Methodology::DynamicSelection] {
        let model = build_model(&data, 9, m).unwrap();
        for kind in SetKind::ALL {
            let s = score_all(&model, kind, "t");
            for (v, f) in s.scores().iter().zip(s.forced()) {
                match f {
                    Forced::None => assert!(v.is_finite() && *v > 0.0),
                    Forced::ForcedOutlier => assert_eq!(*v, f64::INFINITY),
                    Forced::ForcedInlier => assert_eq!(*v, f64::NEG_INFINITY),
                }
            }
        }
    }
}

/// Two tight clusters plus one far point nobody lists: RKNN and NaN force
/// it to the top; a point whose only neighbors are mutual has an empty
/// NonNaN set and is forced to the bottom.
#[test]
fn forced_rules_drive_the_ranking() {
    let mut rows = vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![10.0, 10.0],
        vec![10.0, 11.0],
        vec![11.0, 10.0],
    ];
    rows.push(vec![40.0, 40.0]);
    let labels = vec![0, 0, 0, 0, 0, 0, 1];
    let data = Dataset::from_rows(&rows, Some(labels.clone())).unwrap();
    let model = build_model(&data, 2, Methodology::StaticSorting).unwrap();
    assert!(model.rknn(6).is_empty());
    for kind in [SetKind::Rknn, SetKind::Nan] {
        let s = score_all(&model, kind, "t");
        assert_eq!(s.forced()[6], Forced::ForcedOutlier);
        assert_eq!(ranking(s.scores())[0], 6);
        assert_eq!(top_m_accuracy(&s, &labels, 1).unwrap(), 1.0);
        assert_eq!(auc(&s, &labels).unwrap(), 1.0);
    }
    let non = score_all(&model, SetKind::NonNan, "t");
    // Inside each triangle everyone lists the other two: NonNaN is empty.
    for x in 0..6 {
        assert_eq!(non.forced()[x], Forced::ForcedInlier);
    }
    assert_eq!(non.forced()[6], Forced::None);
    assert_eq!(ranking(non.scores())[0], 6);
    assert_eq!(top_m_accuracy(&non, &labels, 1).unwrap(), 1.0);
}

#[test]
fn separable_instance_is_found_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut rows: Vec<Vec<f64>> = (0..60)
        .map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
        .collect();
    let mut labels = vec![0u8; 60];
    for i in 0..4 {
        rows.push(vec![50.0 + 30.0 * i as f64, -40.0 * i as f64]);
        labels.push(1);
    }
    let data = Dataset::from_rows(&rows, Some(labels.clone())).unwrap();
    let model = build_model(&data, 5, Methodology::StaticSorting).unwrap();
    let s = score_all(&model, SetKind::Knn, "FP-KNN-SS");
    assert_eq!(top_m_accuracy(&s, &labels, 4).unwrap(), 1.0);
    assert_eq!(auc(&s, &labels).unwrap(), 1.0);
}
