//! Fixtures for the criterion benches.

use neighbor_lof::dataset::{generate_synthetic, Dataset, SyntheticSpec, SyntheticVariant};

/// The seeded synthetic datasets, smallest first.
pub fn synthetic_fixtures() -> Vec<(String, Dataset)> {
    SyntheticVariant::ALL
        .iter()
        .rev()
        .map(|&v| (v.to_string(), generate_synthetic(SyntheticSpec::new(v, 7))))
        .collect()
}
