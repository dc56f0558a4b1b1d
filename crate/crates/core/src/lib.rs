//! Neighbor-based local outlier detection.
//!
//! Detectors are assembled from three independent choices:
//!
//! * the **space** distances are measured in: the full feature space, or a
//!   PCA subspace at half the original dimension ([`space`]);
//! * the **methodology** that builds each point's K-neighborhood: static
//!   sorting or dynamic selection ([`neighbors`]);
//! * the **neighbor set** that feeds the density estimate: KNN, reverse KNN,
//!   their union (hybrid), their intersection (natural neighbors), or the
//!   KNN members that are not natural neighbors.
//!
//! Any combination is scored with a generalized local outlier factor
//! ([`scoring`]) and evaluated with ROC AUC and top-n / top-2n detection
//! accuracy ([`metrics`]). The [`harness`] runs whole method grids over
//! K-sweeps and writes table and curve files.
//!
//! ```
//! use neighbor_lof::prelude::*;
//!
//! let data = generate_synthetic(SyntheticSpec::new(SyntheticVariant::Data3, 7));
//! let tag: MethodTag = "fp-non-ss".parse().unwrap();
//! let report = run_pipeline(&data, tag, 10, &PipelineOptions::default()).unwrap();
//! assert!(report.auc > 0.5);
//! ```

pub mod dataset;
pub mod error;
pub mod harness;
pub mod method;
pub mod metrics;
pub mod neighbors;
pub mod scoring;
pub mod space;

mod eigen;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dataset::{
        generate_synthetic, load_csv, save_csv, CsvOptions, Dataset, LabelColumn, SyntheticSpec,
        SyntheticVariant,
    };
    pub use crate::error::{Error, Result};
    pub use crate::harness::{
        emit_reports, run_pipeline, run_sweep, KRange, OutputFormat, PipelineOptions, PipelineSpec,
        SweepResult,
    };
    pub use crate::method::{MethodTag, Methodology, SetKind, SpaceKind};
    pub use crate::metrics::{auc, evaluate, top_m_accuracy, EvalReport};
    pub use crate::neighbors::{build_model, NeighborModel, NeighborSet};
    pub use crate::scoring::{score_all, Forced, ScoreVector};
    pub use crate::space::SpaceTransform;
}
