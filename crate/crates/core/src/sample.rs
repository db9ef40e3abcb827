use std::hash::{Hash, Hasher};

use crate::{Error, Result};

/// A validated batch of observations, stored sorted ascending.
///
/// `Y_(1)` and `Y_(n)` are needed constantly by the support checks and the
/// profile solver, and sortedness keeps the order-statistic oracles cheap.
/// Construction fails for fewer than two points, non-finite values, or a
/// constant sequence (the cross-section maximizer does not exist then).
#[derive(Debug, Clone, PartialEq)]
pub struct DataSample {
    values: Vec<f64>,
}

impl DataSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::DegenerateData(format!(
                "need at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::DegenerateData(format!(
                "non-finite observation {bad}"
            )));
        }
        values.sort_unstable_by(f64::total_cmp);
        if values[0] == values[values.len() - 1] {
            return Err(Error::DegenerateData(
                "all observations are equal".to_string(),
            ));
        }
        Ok(Self { values })
    }

    /// Observations sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees n >= 2
    }

    /// `Y_(1)`, the sample minimum.
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// `Y_(n)`, the sample maximum.
    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `Y_(n) - Y_(1)`, strictly positive by construction.
    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Order-insensitive content hash of the observation bit patterns, used to
    /// fingerprint which data a profile curve was computed from.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for v in &self.values {
            v.to_bits().hash(&mut h);
        }
        h.finish()
    }
}
