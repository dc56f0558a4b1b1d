//! Generalized local outlier factor.
//!
//! The classic LOF density estimate is kept, but the set a point's density
//! is averaged over can be any of the five neighbor sets. The k-distance of
//! a point always comes from its KNN list. Points whose RKNN or NaN set is
//! empty are forced outliers; points with an empty Non-NaN set are forced
//! inliers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::method::SetKind;
use crate::neighbors::{NeighborModel, NeighborSet};

/// Density assigned when every reachability distance is zero (a point and
/// its context coincide).
pub const SENTINEL_DENSITY: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Forced {
    #[default]
    None,
    ForcedOutlier,
    ForcedInlier,
}

/// Outcome of scoring one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Score(f64),
    ForcedOutlier,
    ForcedInlier,
}

impl Verdict {
    /// Position in ranking space: forced outliers at `+∞`, forced inliers
    /// at `-∞`.
    pub fn ranking_key(self) -> f64 {
        match self {
            Self::Score(s) => s,
            Self::ForcedOutlier => f64::INFINITY,
            Self::ForcedInlier => f64::NEG_INFINITY,
        }
    }

    fn forced(self) -> Forced {
        match self {
            Self::Score(_) => Forced::None,
            Self::ForcedOutlier => Forced::ForcedOutlier,
            Self::ForcedInlier => Forced::ForcedInlier,
        }
    }
}

/// Per-point outlier factors for one method and `k`. Higher is more
/// anomalous.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    scores: Vec<f64>,
    forced: Vec<Forced>,
    method_tag: String,
    k: usize,
}

impl ScoreVector {
    pub fn new(verdicts: &[Verdict], method_tag: impl Into<String>, k: usize) -> Self {
        Self {
            scores: verdicts.iter().map(|v| v.ranking_key()).collect(),
            forced: verdicts.iter().map(|v| v.forced()).collect(),
            method_tag: method_tag.into(),
            k,
        }
    }

    /// Plain scores with no forced entries.
    pub fn from_scores(scores: Vec<f64>, method_tag: impl Into<String>, k: usize) -> Self {
        let forced = vec![Forced::None; scores.len()];
        Self {
            scores,
            forced,
            method_tag: method_tag.into(),
            k,
        }
    }

    /// Ranking keys: the outlier factor, or `±∞` for forced entries.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn forced(&self) -> &[Forced] {
        &self.forced
    }

    pub fn method_tag(&self) -> &str {
        &self.method_tag
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Distance from `x` to the last entry of its KNN list.
pub fn k_distance(model: &NeighborModel, x: usize) -> f64 {
    model.knn(x).last().expect("models have k >= 1").distance
}

#[inline]
fn reach_dist(model: &NeighborModel, k_dist: &[f64], x: usize, o: usize) -> f64 {
    k_dist[o].max(model.distance(x, o))
}

fn lrd_with(model: &NeighborModel, k_dist: &[f64], x: usize, members: &[usize]) -> f64 {
    debug_assert!(!members.is_empty());
    let total: f64 = members
        .iter()
        .map(|&o| reach_dist(model, k_dist, x, o))
        .sum();
    if total == 0.0 {
        SENTINEL_DENSITY
    } else {
        members.len() as f64 / total
    }
}

/// Local reachability density of `x` over `context`.
pub fn lrd(model: &NeighborModel, context: &NeighborSet, x: usize) -> Result<f64> {
    if x >= model.len() {
        return Err(Error::UnknownPoint(x));
    }
    if context.query != x {
        return Err(Error::InvalidArgument(format!(
            "context set belongs to point {}, not {x}",
            context.query
        )));
    }
    if context.is_empty() {
        return Err(Error::EmptyContext(x));
    }
    if let Some(&bad) = context.members.iter().find(|&&o| o >= model.len()) {
        return Err(Error::UnknownPoint(bad));
    }
    let k_dist: Vec<f64> = (0..model.len()).map(|o| k_distance(model, o)).collect();
    Ok(lrd_with(model, &k_dist, x, &context.members))
}

/// Precomputed k-distances, kind-specific sets and densities.
struct Densities {
    sets: Vec<Vec<usize>>,
    lrd: Vec<f64>,
}

fn densities(model: &NeighborModel, kind: SetKind) -> Densities {
    let n = model.len();
    let k_dist: Vec<f64> = (0..n).map(|o| k_distance(model, o)).collect();
    let sets: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|x| model.members(x, kind))
        .collect();
    let lrd = (0..n)
        .into_par_iter()
        .map(|o| {
            if sets[o].is_empty() {
                // fall back to the KNN context so o can still serve as a neighbor
                lrd_with(model, &k_dist, o, &model.members(o, SetKind::Knn))
            } else {
                lrd_with(model, &k_dist, o, &sets[o])
            }
        })
        .collect();
    Densities { sets, lrd }
}

fn verdict(kind: SetKind, dens: &Densities, x: usize) -> Verdict {
    let set = &dens.sets[x];
    if set.is_empty() {
        return match kind {
            SetKind::NonNan => Verdict::ForcedInlier,
            _ => Verdict::ForcedOutlier,
        };
    }
    let own = dens.lrd[x];
    let sum: f64 = set.iter().map(|&o| dens.lrd[o] / own).sum();
    Verdict::Score(sum / set.len() as f64)
}

/// Outlier factor of a single point.
pub fn outlier_factor(model: &NeighborModel, kind: SetKind, x: usize) -> Result<Verdict> {
    if x >= model.len() {
        return Err(Error::UnknownPoint(x));
    }
    Ok(verdict(kind, &densities(model, kind), x))
}

/// Scores every point of `model` with the `kind` context set.
pub fn score_all(model: &NeighborModel, kind: SetKind, tag: impl Into<String>) -> ScoreVector {
    let dens = densities(model, kind);
    let verdicts: Vec<Verdict> = (0..model.len())
        .into_par_iter()
        .map(|x| verdict(kind, &dens, x))
        .collect();
    ScoreVector::new(&verdicts, tag, model.k())
}
