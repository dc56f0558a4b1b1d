//! Pipeline composition (space → neighbors → scoring → metrics) and K sweeps
//! over method grids.

mod report;

pub use report::{emit_reports, format_summary_table, load_cells_csv, CellRow, OutputFormat};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::method::{MethodTag, Methodology, SpaceKind};
use crate::metrics::{evaluate, EvalReport};
use crate::neighbors::{build_model_shared, NeighborModel, NeighborOrdering};
use crate::scoring::score_all;
use crate::space::SpaceTransform;

/// Inclusive range of K values with a stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KRange {
    start: usize,
    end: usize,
    stride: usize,
}

impl KRange {
    pub fn new(start: usize, end: usize, stride: usize) -> Result<Self> {
        if start == 0 || end < start || stride == 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid k range {start}..{end}:{stride}"
            )));
        }
        Ok(Self { start, end, stride })
    }

    pub fn single(k: usize) -> Result<Self> {
        Self::new(k, k, 1)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn values(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.stride)
    }
}

impl Default for KRange {
    /// K = 5..=50 at step 1.
    fn default() -> Self {
        Self {
            start: 5,
            end: 50,
            stride: 1,
        }
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else if self.stride == 1 {
            write!(f, "{}..{}", self.start, self.end)
        } else {
            write!(f, "{}..{}:{}", self.start, self.end, self.stride)
        }
    }
}

impl FromStr for KRange {
    type Err = Error;

    /// `k`, `a..b` or `a..b:stride`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid k specification `{s}`"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s.split_once("..") {
            None => Self::single(num(s)?),
            Some((a, rest)) => {
                let (b, stride) = match rest.split_once(':') {
                    Some((b, st)) => (b, num(st)?),
                    None => (rest, 1),
                };
                Self::new(num(a)?, num(b)?, stride).map_err(|_| bad())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PipelineSpec {
    pub tag: MethodTag,
    pub k_range: KRange,
}

impl PipelineSpec {
    pub fn new(tag: MethodTag, k_range: KRange) -> Self {
        Self { tag, k_range }
    }

    /// One spec per tag of the 20-method grid, all over `k_range`.
    pub fn grid(k_range: KRange) -> Vec<Self> {
        MethodTag::all()
            .into_iter()
            .map(|tag| Self::new(tag, k_range))
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Min-max scale every feature to `[0, 1]` before anything else.
    pub normalize: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn labels_of(dataset: &Dataset) -> Result<&[u8]> {
    dataset
        .labels()
        .ok_or_else(|| Error::InvalidDataset("evaluation needs labels".into()))
}

fn prepare(dataset: &Dataset, options: &PipelineOptions) -> Dataset {
    if options.normalize {
        dataset.min_max_normalized()
    } else {
        dataset.clone()
    }
}

/// Runs one method at one `k` end to end on a labeled dataset.
pub fn run_pipeline(
    dataset: &Dataset,
    tag: MethodTag,
    k: usize,
    options: &PipelineOptions,
) -> Result<EvalReport> {
    let labels = labels_of(dataset)?;
    with_pool(options.threads, || {
        let base = prepare(dataset, options);
        let space = SpaceTransform::fit(tag.space, &base)?.apply(&base)?;
        let model = build_model_shared(Arc::new(space), k, tag.methodology)?;
        evaluate(&score_all(&model, tag.set_kind, tag.to_string()), labels)
    })?
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub method_tag: MethodTag,
    pub k: usize,
    pub outcome: std::result::Result<EvalReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method_tag: MethodTag,
    pub mean_auc: f64,
    pub mean_acc_n: f64,
    pub mean_acc_2n: f64,
    /// Cells that contributed to the means.
    pub cells: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// In spec order, then ascending k.
    pub cells: Vec<SweepCell>,
    /// One row per spec, in spec order.
    pub summaries: Vec<MethodSummary>,
    /// Distinct neighbor models constructed.
    pub models_built: usize,
}

impl SweepResult {
    pub fn reports(&self) -> impl Iterator<Item = &EvalReport> {
        self.cells.iter().filter_map(|c| c.outcome.as_ref().ok())
    }

    pub fn summary(&self, tag: MethodTag) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method_tag == tag)
    }
}

type ModelKey = (SpaceKind, Methodology, usize);

/// Neighbor models shared across set kinds, keyed by `(space, methodology, k)`.
struct ModelCache {
    orderings: HashMap<(SpaceKind, Methodology), std::result::Result<NeighborOrdering, String>>,
    models: Mutex<HashMap<ModelKey, Arc<NeighborModel>>>,
    built: AtomicUsize,
}

impl ModelCache {
    fn get(&self, key: ModelKey) -> std::result::Result<Arc<NeighborModel>, String> {
        let (space, methodology, k) = key;
        if let Some(m) = self.models.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(m));
        }
        let ordering = self
            .orderings
            .get(&(space, methodology))
            .expect("orderings cover every requested pair")
            .as_ref()
            .map_err(Clone::clone)?;
        let model = Arc::new(ordering.model(k).map_err(|e| e.to_string())?);
        let mut guard = self.models.lock().expect("cache lock");
        let entry = guard.entry(key).or_insert_with(|| {
            self.built.fetch_add(1, Ordering::Relaxed);
            model
        });
        Ok(Arc::clone(entry))
    }
}

/// Evaluates every `(spec, k)` cell. Neighbor models are built once per
/// `(space, methodology, k)` and shared by all set kinds; a failing cell is
/// recorded and the rest of the sweep continues.
pub fn run_sweep(
    dataset: &Dataset,
    specs: &[PipelineSpec],
    options: &PipelineOptions,
) -> Result<SweepResult> {
    let labels = labels_of(dataset)?;
    with_pool(options.threads, || {
        sweep_in_pool(dataset, labels, specs, options)
    })?
}

fn sweep_in_pool(
    dataset: &Dataset,
    labels: &[u8],
    specs: &[PipelineSpec],
    options: &PipelineOptions,
) -> Result<SweepResult> {
    let base = prepare(dataset, options);
    let n = base.len();

    let mut spaces: BTreeMap<SpaceKind, std::result::Result<Arc<Dataset>, String>> =
        BTreeMap::new();
    let mut k_max: BTreeMap<(SpaceKind, Methodology), usize> = BTreeMap::new();
    for spec in specs {
        spaces.entry(spec.tag.space).or_insert_with(|| {
            SpaceTransform::fit(spec.tag.space, &base)
                .and_then(|t| t.apply(&base))
                .map(Arc::new)
                .map_err(|e| e.to_string())
        });
        let valid_max = spec.k_range.values().filter(|&k| k < n).max().unwrap_or(1);
        let slot = k_max
            .entry((spec.tag.space, spec.tag.methodology))
            .or_insert(1);
        *slot = (*slot).max(valid_max.min(n - 1));
    }

    let orderings = k_max
        .into_par_iter()
        .map(|((space, methodology), k)| {
            let ordering = spaces[&space].clone().and_then(|data| {
                NeighborOrdering::compute(data, methodology, k).map_err(|e| e.to_string())
            });
            ((space, methodology), ordering)
        })
        .collect();
    let cache = ModelCache {
        orderings,
        models: Mutex::new(HashMap::new()),
        built: AtomicUsize::new(0),
    };

    // group cells by model so set kinds run back to back on a shared model
    let mut groups: BTreeMap<ModelKey, Vec<(usize, MethodTag)>> = BTreeMap::new();
    let mut slots: Vec<(MethodTag, usize)> = Vec::new();
    for spec in specs {
        for k in spec.k_range.values() {
            groups
                .entry((spec.tag.space, spec.tag.methodology, k))
                .or_default()
                .push((slots.len(), spec.tag));
            slots.push((spec.tag, k));
        }
    }

    let evaluated: Vec<(usize, std::result::Result<EvalReport, String>)> = groups
        .into_par_iter()
        .flat_map_iter(|(key, members)| {
            let model = if key.2 == 0 || key.2 >= n {
                Err(Error::KOutOfRange {
                    k: key.2,
                    max: n - 1,
                }
                .to_string())
            } else {
                cache.get(key)
            };
            members
                .into_iter()
                .map(|(slot, tag)| {
                    let outcome = model.clone().and_then(|m| {
                        evaluate(&score_all(&m, tag.set_kind, tag.to_string()), labels)
                            .map_err(|e| e.to_string())
                    });
                    (slot, outcome)
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut outcomes: Vec<Option<std::result::Result<EvalReport, String>>> =
        vec![None; slots.len()];
    for (slot, outcome) in evaluated {
        outcomes[slot] = Some(outcome);
    }
    let cells: Vec<SweepCell> = slots
        .into_iter()
        .zip(outcomes)
        .map(|((method_tag, k), outcome)| SweepCell {
            method_tag,
            k,
            outcome: outcome.expect("every slot evaluated"),
        })
        .collect();

    let mut summaries = Vec::with_capacity(specs.len());
    let mut offset = 0;
    for spec in specs {
        let count = spec.k_range.values().count();
        summaries.push(summarize(spec.tag, &cells[offset..offset + count]));
        offset += count;
    }

    Ok(SweepResult {
        cells,
        summaries,
        models_built: cache.built.load(Ordering::Relaxed),
    })
}

fn summarize(tag: MethodTag, cells: &[SweepCell]) -> MethodSummary {
    let ok: Vec<&EvalReport> = cells
        .iter()
        .filter_map(|c| c.outcome.as_ref().ok())
        .collect();
    let mean = |f: fn(&EvalReport) -> f64| {
        if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
        }
    };
    MethodSummary {
        method_tag: tag,
        mean_auc: mean(|r| r.auc),
        mean_acc_n: mean(|r| r.acc_n),
        mean_acc_2n: mean(|r| r.acc_2n),
        cells: ok.len(),
        failed: cells.len() - ok.len(),
    }
}
