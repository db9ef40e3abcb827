//! Uniform consistency: the sup over a closed power interval of
//! `|Phi_n(alpha) - Phi(alpha)|` shrinks with the sample size, where
//! `Phi_n(alpha) = (1/n) sum w_i^(-alpha) log^b w_i` at the fitted
//! parameters and `Phi(alpha) = (-xi0)^b Gamma^(b)(alpha xi0 + 1)`.

use gevfit_core::dist::sample_with;
use gevfit_core::special::{gamma_deriv, GammaDerivOrder};
use gevfit_core::{fit, standardize, Error, Result};
use rayon::prelude::*;

use crate::report::{quartiles, trend_verdict, CsvBuilder, ExperimentReport, PerNStats};
use crate::{lab_search_config, replicate_rng, ExperimentConfig};

pub(crate) const ALPHA_GRID: usize = 200;

/// The power interval: `[m, M]` for positive true shape, `[-M, -m]` mirrored
/// for negative.
fn interval(xi0: f64, m: f64, big_m: f64) -> (f64, f64) {
    if xi0 > 0.0 {
        (m, big_m)
    } else {
        (-big_m, -m)
    }
}

fn alpha_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64)
        .collect()
}

/// Sup-gap for each requested log order `b`, sharing one pass over the
/// standardized values per probe power.
pub(crate) fn sup_gaps(
    w: &[f64],
    alphas: &[f64],
    targets: &[Vec<f64>], // per b, per alpha
    bs: &[GammaDerivOrder],
) -> Vec<f64> {
    let n = w.len() as f64;
    let lws: Vec<f64> = w.iter().map(|&x| x.ln()).collect();
    let mut sups = vec![0.0f64; bs.len()];
    for (ai, &alpha) in alphas.iter().enumerate() {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &lw in &lws {
            let e = (-alpha * lw).exp();
            s0 += e;
            s1 += e * lw;
            s2 += e * lw * lw;
        }
        for (bi, b) in bs.iter().enumerate() {
            let phi_n = match b.order() {
                0 => s0,
                1 => s1,
                _ => s2,
            } / n;
            let gap = (phi_n - targets[bi][ai]).abs();
            if gap > sups[bi] {
                sups[bi] = gap;
            }
        }
    }
    sups
}

/// One report per requested `b`, sharing the per-replicate fits.
pub fn uniform_consistency_suite(
    config: &ExperimentConfig,
    bs: &[GammaDerivOrder],
) -> Result<Vec<ExperimentReport>> {
    let xi0 = config.require_nonzero_shape()?;
    config.require_n_grid()?;
    config.require_alpha_interval()?;
    if bs.is_empty() {
        return Err(Error::Domain("no log orders requested".into()));
    }
    if config.replicates == 0 {
        return Err(Error::Domain("need at least one replicate".into()));
    }
    let (m, big_m) = config.alpha_interval;
    let (lo, hi) = interval(xi0, m, big_m);
    let alphas = alpha_grid(lo, hi, ALPHA_GRID);
    let targets: Vec<Vec<f64>> = bs
        .iter()
        .map(|&b| {
            alphas
                .iter()
                .map(|&a| Ok((-xi0).powi(b.order() as i32) * gamma_deriv(b, a * xi0 + 1.0)?))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let theta0 = config.theta0;
    let n_grid = config.n_grid.clone();
    let search = lab_search_config();
    let bs_owned = bs.to_vec();

    // per replicate, per n: sup gap per b
    let rows: Vec<Result<Vec<Vec<f64>>>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(config.seed, r);
            let mut out = Vec::with_capacity(n_grid.len());
            for &n in &n_grid {
                let data = sample_with(&theta0, n, &mut rng)?;
                let fitted = fit(&data, &search)?;
                let std = standardize(&fitted.params, &data)?;
                out.push(sup_gaps(std.w(), &alphas, &targets, &bs_owned));
            }
            Ok(out)
        })
        .collect();
    let rows: Vec<Vec<Vec<f64>>> = rows.into_iter().collect::<Result<_>>()?;

    let mut reports = Vec::with_capacity(bs.len());
    for (bi, b) in bs.iter().enumerate() {
        let label = format!("sup_gap_b{}", b.order());
        let mut report = ExperimentReport::new(
            &format!("uniform_consistency_b{}", b.order()),
            config.echo(),
        );
        let mut csv = CsvBuilder::new(&["replicate", "n", "sup_gap"]);
        for (ni, &n) in n_grid.iter().enumerate() {
            let sups: Vec<f64> = rows.iter().map(|rep| rep[ni][bi]).collect();
            let mut stats = std::collections::BTreeMap::new();
            stats.insert(label.clone(), quartiles(&sups));
            report.per_n.push(PerNStats { n, stats });
        }
        for (r, rep) in rows.iter().enumerate() {
            for (ni, &n) in n_grid.iter().enumerate() {
                csv.row(&[r as u64, n as u64], &[rep[ni][bi]]);
            }
        }
        report.raw_csv_content = csv.finish();
        report.verdicts.push(trend_verdict(&report, &label, false));
        reports.push(report);
    }
    Ok(reports)
}

/// Single-order wrapper taking `b` from the configuration.
pub fn uniform_consistency_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    Ok(uniform_consistency_suite(config, &[config.b])?
        .pop()
        .expect("one order in, one out"))
}
