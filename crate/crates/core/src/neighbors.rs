//! Methodology and neighbor levels: K-neighborhoods built by static sorting
//! or dynamic selection, and the five neighbor sets derived from them.
//!
//! Distances are Euclidean and every tie is broken by ascending point id,
//! so a model is a pure function of its inputs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::method::{Methodology, SetKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: usize,
    /// Distance to the query point.
    pub distance: f64,
}

#[inline]
fn by_distance_then_id(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance.total_cmp(&b.distance).then(a.id.cmp(&b.id))
}

/// Per-point neighbor lists up to some `k_max`, from which models for any
/// `k <= k_max` are cut.
///
/// Both methodologies are prefix-consistent: the first `k` entries of a
/// `k_max` list are exactly the list a direct `k` build would produce
/// (static sorting takes a prefix of one total order, dynamic selection is
/// a deterministic greedy sequence).
#[derive(Debug, Clone)]
pub struct NeighborOrdering {
    methodology: Methodology,
    k_max: usize,
    lists: Vec<Vec<Neighbor>>,
    data: Arc<Dataset>,
}

impl NeighborOrdering {
    pub fn compute(data: Arc<Dataset>, methodology: Methodology, k_max: usize) -> Result<Self> {
        check_k(k_max, data.len())?;
        let lists = (0..data.len())
            .into_par_iter()
            .map(|x| match methodology {
                Methodology::StaticSorting => static_sorting(&data, x, k_max),
                Methodology::DynamicSelection => dynamic_selection(&data, x, k_max),
            })
            .collect();
        Ok(Self {
            methodology,
            k_max,
            lists,
            data,
        })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn methodology(&self) -> Methodology {
        self.methodology
    }

    pub fn model(&self, k: usize) -> Result<NeighborModel> {
        if k == 0 || k > self.k_max {
            return Err(Error::KOutOfRange { k, max: self.k_max });
        }
        let knn: Vec<Vec<Neighbor>> = self.lists.iter().map(|l| l[..k].to_vec()).collect();
        Ok(NeighborModel::from_knn(
            Arc::clone(&self.data),
            k,
            self.methodology,
            knn,
        ))
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    Ok(())
}

fn static_sorting(data: &Dataset, x: usize, k: usize) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = (0..data.len())
        .filter(|&j| j != x)
        .map(|j| Neighbor {
            id: j,
            distance: data.distance(x, j),
        })
        .collect();
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, by_distance_then_id);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_id);
    all
}

/// Single-linkage growth from `x`: every round adds the outside point with
/// the smallest distance to any selected point (ties by id). Entries are in
/// selection order and carry their distance to `x`.
fn dynamic_selection(data: &Dataset, x: usize, k: usize) -> Vec<Neighbor> {
    let n = data.len();
    let mut selected = vec![false; n];
    selected[x] = true;
    let to_query: Vec<f64> = (0..n).map(|j| data.distance(x, j)).collect();
    let mut to_set = to_query.clone();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<usize> = None;
        for j in 0..n {
            if selected[j] {
                continue;
            }
            // strict `<` keeps the lowest id on ties
            if best.is_none_or(|b| to_set[j] < to_set[b]) {
                best = Some(j);
            }
        }
        let b = best.expect("k < n leaves a candidate every round");
        selected[b] = true;
        out.push(Neighbor {
            id: b,
            distance: to_query[b],
        });
        for j in 0..n {
            if !selected[j] {
                let d = data.distance(b, j);
                if d < to_set[j] {
                    to_set[j] = d;
                }
            }
        }
    }
    out
}

/// K-neighbor lists for one `(space, methodology, k)` configuration, with
/// the reverse relation precomputed.
#[derive(Debug, Clone)]
pub struct NeighborModel {
    k: usize,
    methodology: Methodology,
    knn: Vec<Vec<Neighbor>>,
    /// Sorted ascending.
    rknn: Vec<Vec<usize>>,
    data: Arc<Dataset>,
}

/// Builds the model for `k` on `dataset`; needs `1 <= k <= N - 1`.
pub fn build_model(dataset: &Dataset, k: usize, methodology: Methodology) -> Result<NeighborModel> {
    build_model_shared(Arc::new(dataset.clone()), k, methodology)
}

pub fn build_model_shared(
    dataset: Arc<Dataset>,
    k: usize,
    methodology: Methodology,
) -> Result<NeighborModel> {
    check_k(k, dataset.len())?;
    NeighborOrdering::compute(dataset, methodology, k)?.model(k)
}

impl NeighborModel {
    fn from_knn(
        data: Arc<Dataset>,
        k: usize,
        methodology: Methodology,
        knn: Vec<Vec<Neighbor>>,
    ) -> Self {
        let mut rknn = vec![Vec::new(); knn.len()];
        for (x, list) in knn.iter().enumerate() {
            for nb in list {
                rknn[nb.id].push(x);
            }
        }
        Self {
            k,
            methodology,
            knn,
            rknn,
            data,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn methodology(&self) -> Methodology {
        self.methodology
    }

    pub fn len(&self) -> usize {
        self.knn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knn.is_empty()
    }

    pub fn dataset(&self) -> &Dataset {
        &self.data
    }

    /// Neighbor list of `x` in stored order.
    pub fn knn(&self, x: usize) -> &[Neighbor] {
        &self.knn[x]
    }

    /// Points that list `x` among their neighbors, ascending.
    pub fn rknn(&self, x: usize) -> &[usize] {
        &self.rknn[x]
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.data.distance(a, b)
    }

    fn is_reverse_neighbor(&self, x: usize, z: usize) -> bool {
        self.rknn[x].binary_search(&z).is_ok()
    }

    /// Members of the `kind` set of `x`. KNN keeps stored order, the other
    /// kinds are ascending by id.
    pub(crate) fn members(&self, x: usize, kind: SetKind) -> Vec<usize> {
        let knn_ids = || self.knn[x].iter().map(|nb| nb.id);
        match kind {
            SetKind::Knn => knn_ids().collect(),
            SetKind::Rknn => self.rknn[x].clone(),
            SetKind::Hybrid => {
                let mut ids: Vec<usize> = knn_ids().chain(self.rknn[x].iter().copied()).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            }
            SetKind::Nan | SetKind::NonNan => {
                let want = kind == SetKind::Nan;
                let mut ids: Vec<usize> = knn_ids()
                    .filter(|&z| self.is_reverse_neighbor(x, z) == want)
                    .collect();
                ids.sort_unstable();
                ids
            }
        }
    }

    pub fn neighbor_set(&self, query: usize, kind: SetKind) -> Result<NeighborSet> {
        if query >= self.len() {
            return Err(Error::UnknownPoint(query));
        }
        Ok(NeighborSet {
            kind,
            query,
            members: self.members(query, kind),
        })
    }

    /// In-degree histogram: how many points are listed by exactly `d`
    /// others, for each `d` that occurs.
    pub fn reverse_count_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for r in &self.rknn {
            *hist.entry(r.len()).or_insert(0) += 1;
        }
        hist
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSet {
    pub kind: SetKind,
    pub query: usize,
    pub members: Vec<usize>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(&id)
    }
}
