//! Divergence of the profile-likelihood derivative at the ends of the shape
//! interval `(-1, n-1)`: probes march toward each bound by a factor of ten
//! per step and the derivative must keep growing in magnitude.
//!
//! The divergence is logarithmic in the distance to the bound (the boundary
//! gap of the slice maximizer shrinks linearly with that distance, and the
//! derivative picks up its logarithm), so successive probe values change by
//! about `ln 10 ~ 2.3` per step: a strict monotone trend, not a geometric
//! blow-up.

use gevfit_core::profile::profile_loglik;
use gevfit_core::{DataSample, Error, Result};

use crate::report::{CsvBuilder, ExperimentReport, PerNStats, Quartiles, Verdict};
use crate::ExperimentConfig;

const PROBE_KS: [i32; 4] = [2, 3, 4, 5];

/// Evaluates `PL'` along `xi = -1 + 10^-k` and `xi = (n-1) - 10^-k` for
/// `k = 2..5` on a small dataset; verdicts demand a strict decrease toward
/// the left bound and a strict increase toward the right one.
pub fn boundary_divergence_check(
    config: &ExperimentConfig,
    data: &DataSample,
) -> Result<ExperimentReport> {
    let n = data.len();
    if !(5..=20).contains(&n) {
        return Err(Error::Domain(format!(
            "boundary divergence check wants a small sample (5..=20), got n = {n}"
        )));
    }
    let upper = n as f64 - 1.0;
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut csv = CsvBuilder::new(&["side", "k", "xi", "pl_deriv"]);
    for &k in &PROBE_KS {
        let step = 10f64.powi(-k);
        let xi_l = -1.0 + step;
        let p = profile_loglik(xi_l, data, 1e-12)?;
        left.push(p.pl_deriv);
        csv.row(&[0, k as u64], &[xi_l, p.pl_deriv]);
        let xi_r = upper - step;
        let p = profile_loglik(xi_r, data, 1e-12)?;
        right.push(p.pl_deriv);
        csv.row(&[1, k as u64], &[xi_r, p.pl_deriv]);
    }

    let mut report = ExperimentReport::new("boundary_divergence", config.echo());
    let mut stats = std::collections::BTreeMap::new();
    for (i, &k) in PROBE_KS.iter().enumerate() {
        let point = |v: f64| Quartiles {
            q1: v,
            median: v,
            q3: v,
        };
        stats.insert(format!("left_k{k}"), point(left[i]));
        stats.insert(format!("right_k{k}"), point(right[i]));
    }
    report.per_n.push(PerNStats { n, stats });
    report.raw_csv_content = csv.finish();
    report.verdicts.push(Verdict {
        name: "left_derivative_decreases".into(),
        pass: left.windows(2).all(|w| w[1] < w[0]),
        detail: format!("{left:?}"),
    });
    report.verdicts.push(Verdict {
        name: "right_derivative_increases".into(),
        pass: right.windows(2).all(|w| w[1] > w[0]),
        detail: format!("{right:?}"),
    });
    Ok(report)
}
