mod common;

use neighbor_lof::metrics::{auc_from_keys, auc_rank_statistic, top_m_accuracy_from_keys};
use proptest::prelude::*;

fn key() -> impl Strategy<Value = f64> {
    prop_oneof![
        6 => (0u8..12).prop_map(|v| v as f64 / 4.0),
        3 => 0.0f64..5.0,
        1 => Just(f64::INFINITY),
        1 => Just(f64::NEG_INFINITY),
    ]
}

fn scored() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
    (2usize..120)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(key(), n),
                prop::collection::vec(0u8..2, n),
            )
        })
        .prop_filter("both classes", |(_, l)| l.contains(&0) && l.contains(&1))
}

proptest! {
    #[test]
    fn trapezoid_equals_pairwise((keys, labels) in scored()) {
        let oracle = common::pairwise_auc(&keys, &labels);
        prop_assert!((auc_from_keys(&keys, &labels).unwrap() - oracle).abs() <= 1e-12);
        prop_assert!((auc_rank_statistic(&keys, &labels).unwrap() - oracle).abs() <= 1e-12);
    }

    #[test]
    fn top_m_counts_the_best_m((keys, labels) in scored(), frac in 0.0f64..1.0) {
        let m = 1 + ((keys.len() - 1) as f64 * frac) as usize;
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[b].partial_cmp(&keys[a]).unwrap().then(a.cmp(&b)));
        let hits = order[..m].iter().filter(|&&i| labels[i] == 1).count();
        let total = labels.iter().filter(|&&l| l == 1).count();
        prop_assert_eq!(top_m_accuracy_from_keys(&keys, &labels, m).unwrap(), hits as f64 / total as f64);
    }
}

#[test]
fn known_values() {
    assert_eq!(auc_from_keys(&[0.9, 0.1], &[1, 0]).unwrap(), 1.0);
    assert_eq!(auc_from_keys(&[0.1, 0.9], &[1, 0]).unwrap(), 0.0);
    assert_eq!(auc_from_keys(&[0.5, 0.5, 0.5], &[1, 0, 0]).unwrap(), 0.5);
    let inf = f64::INFINITY;
    assert_eq!(auc_from_keys(&[inf, inf, 1.0], &[1, 0, 0]).unwrap(), 0.75);
    assert!(auc_from_keys(&[1.0, 2.0], &[0, 0]).is_err());
    assert!(auc_from_keys(&[1.0], &[0, 1]).is_err());
}
