//! Pseudo-law-of-large-numbers: averages of `w_i^(-k - a/xi_hat) log^b w_i`
//! evaluated at the *fitted* parameters converge to
//! `(-xi0)^b Gamma^(b)(k xi0 + a + 1)`.

use gevfit_core::dist::sample_with;
use gevfit_core::special::{gamma_deriv, GammaDerivOrder};
use gevfit_core::{fit, standardize, Error, Result};
use rayon::prelude::*;

use crate::report::{quartiles, trend_verdict, CsvBuilder, ExperimentReport, PerNStats};
use crate::{lab_search_config, replicate_rng, ExperimentConfig};

/// One tracked sum: powers `k` (integer) and `a` (through `a/xi_hat`), log
/// order `b`.
#[derive(Debug, Clone, Copy)]
pub struct LlnCase {
    pub k: i32,
    pub a: i32,
    pub b: GammaDerivOrder,
}

impl LlnCase {
    fn label(&self) -> String {
        format!("gap_k{}_a{}_b{}", self.k, self.a, self.b.order())
    }

    /// `(-xi0)^b Gamma^(b)(k xi0 + a + 1)`.
    fn target(&self, xi0: f64) -> Result<f64> {
        let arg = self.k as f64 * xi0 + self.a as f64 + 1.0;
        if arg <= 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "k xi0 + a + 1 = {arg} must be positive (k={}, a={}, xi0={xi0})",
                self.k, self.a
            )));
        }
        Ok((-xi0).powi(self.b.order() as i32) * gamma_deriv(self.b, arg)?)
    }

    /// `(1/n) sum w_i^(-k - a/xi_hat) log^b w_i` at the fitted parameters.
    fn statistic(&self, w: &[f64], xi_hat: f64) -> f64 {
        let n = w.len() as f64;
        let power = -(self.k as f64) - self.a as f64 / xi_hat;
        let b = self.b.order();
        let mut acc = 0.0;
        for &wi in w {
            let lw = wi.ln();
            let mut term = (power * lw).exp();
            for _ in 0..b {
                term *= lw;
            }
            acc += term;
        }
        acc / n
    }
}

/// Runs several tracked sums over one set of fits (the fits dominate the
/// cost, so cases share them). One report per case, in input order.
pub fn pseudo_lln_suite(
    config: &ExperimentConfig,
    cases: &[LlnCase],
) -> Result<Vec<ExperimentReport>> {
    let xi0 = config.require_nonzero_shape()?;
    config.require_n_grid()?;
    config.require_replicates()?;
    if cases.is_empty() {
        return Err(Error::Domain("no cases requested".into()));
    }
    let targets: Vec<f64> = cases.iter().map(|c| c.target(xi0)).collect::<Result<_>>()?;

    let theta0 = config.theta0;
    let n_grid = config.n_grid.clone();
    let search = lab_search_config();

    // per replicate, per n, per case: |statistic - target| and the statistic
    type RepRows = Vec<Vec<(f64, f64)>>;
    let rows: Vec<Result<RepRows>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(config.seed, r);
            let mut out = Vec::with_capacity(n_grid.len());
            for &n in &n_grid {
                let data = sample_with(&theta0, n, &mut rng)?;
                let fitted = fit(&data, &search)?;
                let std = standardize(&fitted.params, &data)?;
                let xi_hat = fitted.params.xi();
                let mut per_case = Vec::with_capacity(cases.len());
                for (case, &target) in cases.iter().zip(&targets) {
                    let phi = case.statistic(std.w(), xi_hat);
                    per_case.push(((phi - target).abs(), phi));
                }
                out.push(per_case);
            }
            Ok(out)
        })
        .collect();
    let rows: RepRowsAll = rows.into_iter().collect::<Result<_>>()?;
    type RepRowsAll = Vec<RepRows>;

    let mut reports = Vec::with_capacity(cases.len());
    for (ci, case) in cases.iter().enumerate() {
        let label = case.label();
        let mut report = ExperimentReport::new(&format!("pseudo_lln_{label}"), config.echo());
        let mut csv = CsvBuilder::new(&["replicate", "n", "phi", "gap"]);
        for (ni, &n) in n_grid.iter().enumerate() {
            let gaps: Vec<f64> = rows.iter().map(|rep| rep[ni][ci].0).collect();
            let phis: Vec<f64> = rows.iter().map(|rep| rep[ni][ci].1).collect();
            let mut stats = std::collections::BTreeMap::new();
            stats.insert(label.clone(), quartiles(&gaps));
            stats.insert("phi".into(), quartiles(&phis));
            report.per_n.push(PerNStats { n, stats });
        }
        for (r, rep) in rows.iter().enumerate() {
            for (ni, &n) in n_grid.iter().enumerate() {
                csv.row(&[r as u64, n as u64], &[rep[ni][ci].1, rep[ni][ci].0]);
            }
        }
        report.raw_csv_content = csv.finish();
        report.verdicts.push(trend_verdict(&report, &label, false));
        reports.push(report);
    }
    Ok(reports)
}

/// Single-case wrapper, taking `b` from the configuration.
pub fn pseudo_lln_experiment(
    config: &ExperimentConfig,
    k: i32,
    a: i32,
) -> Result<ExperimentReport> {
    let case = LlnCase { k, a, b: config.b };
    Ok(pseudo_lln_suite(config, &[case])?
        .pop()
        .expect("one case in, one report out"))
}
