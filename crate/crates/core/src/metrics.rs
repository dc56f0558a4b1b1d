//! ROC AUC and top-n / top-2n detection accuracy.
//!
//! Points are ranked by descending score key, ties by ascending id for the
//! top-m cut. For AUC, tied (outlier, inlier) pairs count one half.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::ScoreVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method_tag: String,
    pub k: usize,
    pub auc: f64,
    pub acc_n: f64,
    pub acc_2n: f64,
    pub n_outliers: usize,
}

impl EvalReport {
    pub const CSV_HEADER: &'static str = "method_tag,k,auc,acc_n,acc_2n";

    /// `method_tag,k,auc,acc_n,acc_2n` at full round-trip precision.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:?},{:?},{:?}",
            self.method_tag, self.k, self.auc, self.acc_n, self.acc_2n
        )
    }
}

fn check_inputs(keys: &[f64], labels: &[u8]) -> Result<()> {
    if keys.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores but {} labels",
            keys.len(),
            labels.len()
        )));
    }
    if keys.iter().any(|k| k.is_nan()) {
        return Err(Error::InvalidArgument("scores contain NaN".into()));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidArgument("labels must be 0 or 1".into()));
    }
    Ok(())
}

#[inline]
fn cmp_keys(a: f64, b: f64) -> Ordering {
    // NaN was rejected up front; -0.0 and 0.0 compare equal here.
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

fn class_counts(labels: &[u8]) -> Result<(u64, u64)> {
    let pos = labels.iter().filter(|&&l| l == 1).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    Ok((pos, neg))
}

/// Area under the ROC curve, by a trapezoidal sweep over every distinct
/// score threshold.
pub fn auc(scores: &ScoreVector, labels: &[u8]) -> Result<f64> {
    auc_from_keys(scores.scores(), labels)
}

pub fn auc_from_keys(keys: &[f64], labels: &[u8]) -> Result<f64> {
    check_inputs(keys, labels)?;
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| cmp_keys(keys[b], keys[a]));

    // twice the area, in units of (1 inlier × 1 outlier), kept integral
    let (mut tp, mut fp, mut twice_area) = (0u64, 0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let (tp_before, fp_before) = (tp, fp);
        let key = keys[order[i]];
        while i < order.len() && cmp_keys(keys[order[i]], key) == Ordering::Equal {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        twice_area += (fp - fp_before) * (tp + tp_before);
    }
    Ok(twice_area as f64 / (2 * pos * neg) as f64)
}

/// Rank-statistic form: Mann–Whitney `U` over mid-ranks, divided by
/// `P · N`. Agrees with [`auc_from_keys`].
pub fn auc_rank_statistic(keys: &[f64], labels: &[u8]) -> Result<f64> {
    check_inputs(keys, labels)?;
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| cmp_keys(keys[a], keys[b]));
    // sum of doubled mid-ranks of the outliers
    let mut twice_rank_sum = 0u64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && cmp_keys(keys[order[j]], keys[order[i]]) == Ordering::Equal {
            j += 1;
        }
        // ranks i+1 ..= j share the mid-rank (i + 1 + j) / 2
        let twice_mid = (i + 1 + j) as u64;
        let outliers_here = order[i..j].iter().filter(|&&o| labels[o] == 1).count() as u64;
        twice_rank_sum += twice_mid * outliers_here;
        i = j;
    }
    let twice_u = twice_rank_sum - pos * (pos + 1);
    Ok(twice_u as f64 / (2 * pos * neg) as f64)
}

/// Indices ordered by descending key, ascending id on ties.
pub fn ranking(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| cmp_keys(keys[b], keys[a]).then(a.cmp(&b)));
    order
}

/// True outliers among the `m` highest-ranked points, over the total number
/// of true outliers.
pub fn top_m_accuracy(scores: &ScoreVector, labels: &[u8], m: usize) -> Result<f64> {
    top_m_accuracy_from_keys(scores.scores(), labels, m)
}

pub fn top_m_accuracy_from_keys(keys: &[f64], labels: &[u8], m: usize) -> Result<f64> {
    check_inputs(keys, labels)?;
    if m == 0 || m > keys.len() {
        return Err(Error::InvalidArgument(format!(
            "m = {m} must lie in 1..={}",
            keys.len()
        )));
    }
    let total = labels.iter().filter(|&&l| l == 1).count();
    if total == 0 {
        return Err(Error::NoOutliers);
    }
    let hits = ranking(keys)[..m]
        .iter()
        .filter(|&&i| labels[i] == 1)
        .count();
    Ok(hits as f64 / total as f64)
}

/// AUC plus top-n and top-min(2n, N) accuracy, `n` being the number of
/// labeled outliers.
pub fn evaluate(scores: &ScoreVector, labels: &[u8]) -> Result<EvalReport> {
    let n_outliers = labels.iter().filter(|&&l| l == 1).count();
    if n_outliers == 0 {
        return Err(Error::NoOutliers);
    }
    let keys = scores.scores();
    Ok(EvalReport {
        method_tag: scores.method_tag().to_string(),
        k: scores.k(),
        auc: auc_from_keys(keys, labels)?,
        acc_n: top_m_accuracy_from_keys(keys, labels, n_outliers)?,
        acc_2n: top_m_accuracy_from_keys(keys, labels, (2 * n_outliers).min(keys.len()))?,
        n_outliers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> ScoreVector {
        ScoreVector::from_scores(v.to_vec(), "t", 1)
    }

    #[test]
    fn perfect_and_tied() {
        assert_eq!(auc(&sv(&[3.0, 2.0, 1.0, 0.0]), &[1, 1, 0, 0]).unwrap(), 1.0);
        assert_eq!(auc(&sv(&[1.0; 4]), &[1, 0, 0, 1]).unwrap(), 0.5);
        assert_eq!(auc(&sv(&[0.0, 1.0, 2.0, 3.0]), &[1, 1, 0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn infinities_are_mutually_tied() {
        let keys = [f64::INFINITY, f64::INFINITY, 1.0, f64::NEG_INFINITY];
        let labels = [1, 0, 1, 0];
        // pairs: (0,1) tie 0.5, (0,3) 1, (2,1) 0, (2,3) 1
        assert_eq!(auc_from_keys(&keys, &labels).unwrap(), 2.5 / 4.0);
        assert_eq!(auc_rank_statistic(&keys, &labels).unwrap(), 2.5 / 4.0);
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            auc(&sv(&[1.0, 2.0]), &[1, 1]),
            Err(Error::SingleClass)
        ));
        assert!(matches!(
            auc(&sv(&[1.0, 2.0]), &[0, 0]),
            Err(Error::SingleClass)
        ));
        assert!(auc(&sv(&[f64::NAN, 2.0]), &[0, 1]).is_err());
    }

    #[test]
    fn top_m() {
        let s = sv(&[5.0, 4.0, 3.0, 2.0]);
        assert_eq!(top_m_accuracy(&s, &[1, 1, 0, 0], 2).unwrap(), 1.0);
        assert_eq!(top_m_accuracy(&s, &[0, 0, 1, 1], 2).unwrap(), 0.0);
        assert_eq!(top_m_accuracy(&s, &[0, 0, 1, 1], 3).unwrap(), 0.5);
        assert!(matches!(
            top_m_accuracy(&s, &[0, 0, 0, 0], 2),
            Err(Error::NoOutliers)
        ));
        assert!(top_m_accuracy(&s, &[0, 0, 0, 1], 5).is_err());
    }

    #[test]
    fn top_m_ties_by_id() {
        // all tied: the cut takes the lowest ids
        let s = sv(&[1.0; 4]);
        assert_eq!(top_m_accuracy(&s, &[0, 1, 0, 1], 2).unwrap(), 0.5);
        assert_eq!(top_m_accuracy(&s, &[1, 1, 0, 0], 2).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_bundles() {
        let r = evaluate(&sv(&[9.0, 1.0, 2.0, 8.0, 0.5]), &[1, 0, 0, 1, 0]).unwrap();
        assert_eq!((r.auc, r.acc_n, r.acc_2n, r.n_outliers), (1.0, 1.0, 1.0, 2));
        let r = evaluate(&sv(&[0.0, 1.0, 2.0, 3.0]), &[1, 1, 0, 0]).unwrap();
        assert_eq!(r.auc, 0.0);
        // 2n capped at N
        assert_eq!(r.acc_2n, 1.0);
        assert_eq!(r.csv_row(), "t,1,0.0,0.0,1.0");
    }
}
