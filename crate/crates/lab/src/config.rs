use gevfit_core::special::GammaDerivOrder;
use gevfit_core::{Error, GevParams, Result};
use serde::{Deserialize, Serialize};

/// Shared experiment configuration. Individual experiments validate the
/// fields they use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// True parameter the replicates are simulated from.
    pub theta0: GevParams,
    /// Sample sizes, strictly increasing.
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// Rate exponent for the support-boundary experiment.
    pub gamma: f64,
    /// `(m, M)` of the uniform-consistency power interval.
    pub alpha_interval: (f64, f64),
    /// Log-power order of the tracked sums.
    pub b: GammaDerivOrder,
}

impl ExperimentConfig {
    pub fn new(theta0: GevParams, n_grid: Vec<usize>, replicates: usize, seed: u64) -> Self {
        Self {
            theta0,
            n_grid,
            replicates,
            seed,
            gamma: 0.5,
            alpha_interval: (-1.0, 3.0),
            b: GammaDerivOrder::Zero,
        }
    }

    pub(crate) fn require_nonzero_shape(&self) -> Result<f64> {
        let xi0 = self.theta0.xi();
        if self.theta0.is_gumbel() {
            return Err(Error::PreconditionViolated(
                "experiment requires a nonzero true shape".into(),
            ));
        }
        Ok(xi0)
    }

    pub(crate) fn require_n_grid(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Domain("empty sample-size grid".into()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "sample-size grid must be strictly increasing".into(),
            ));
        }
        if self.n_grid[0] < 2 {
            return Err(Error::Domain("sample sizes must be >= 2".into()));
        }
        Ok(())
    }

    /// Rate and law-of-large-numbers experiments need enough replicates for
    /// stable medians.
    pub(crate) fn require_replicates(&self) -> Result<()> {
        if self.replicates < 50 {
            return Err(Error::Domain(format!(
                "rate/LLN experiments need >= 50 replicates, got {}",
                self.replicates
            )));
        }
        Ok(())
    }

    pub(crate) fn require_gamma(&self) -> Result<()> {
        if self.gamma.is_nan() || self.gamma <= 0.0 {
            return Err(Error::Domain(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `M > 0` and `m` in `(-1/|xi0|, 0)`.
    pub(crate) fn require_alpha_interval(&self) -> Result<()> {
        let xi0 = self.require_nonzero_shape()?;
        let (m, big_m) = self.alpha_interval;
        if big_m.is_nan() || big_m <= 0.0 {
            return Err(Error::Domain(format!("M must be > 0, got {big_m}")));
        }
        if !(-1.0 / xi0.abs() < m && m < 0.0) {
            return Err(Error::Domain(format!(
                "m must lie in (-1/|xi0|, 0) = ({}, 0), got {m}",
                -1.0 / xi0.abs()
            )));
        }
        Ok(())
    }

    pub(crate) fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
