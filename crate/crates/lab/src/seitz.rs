//! The determinant-conditioned sum inequality used by the slice-uniqueness
//! argument, checked numerically on its order-statistic instantiation.

use gevfit_core::dist::sample_with;
use gevfit_core::{Error, Result};
use rand::Rng;
use rayon::prelude::*;

use crate::report::{CsvBuilder, ExperimentReport, Verdict};
use crate::{replicate_rng, ExperimentConfig};

/// Outcome of one inequality check. `precondition_holds` is established by
/// brute force over all pairs of index pairs; a failed precondition is
/// reported, not asserted.
#[derive(Debug, Clone, Copy)]
pub struct SeitzOutcome {
    pub precondition_holds: bool,
    pub inequality_holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `(x.z)(y.u) >= (y.z)(x.u)` together with its determinant
/// precondition: for every `i < j` and `r < s`,
/// `det[x_i x_j; y_i y_j] * det[z_r z_s; u_r u_s] >= 0`.
pub fn seitz_check(x: &[f64], y: &[f64], z: &[f64], u: &[f64]) -> Result<SeitzOutcome> {
    let n = x.len();
    if n == 0 || y.len() != n || z.len() != n || u.len() != n {
        return Err(Error::Domain(format!(
            "sequences must share a positive length, got {n}, {}, {}, {}",
            y.len(),
            z.len(),
            u.len()
        )));
    }
    // All pairwise 2x2 determinants of (x, y) and of (z, u), then the full
    // O(pairs^2) product scan.
    let mut d_xy = Vec::with_capacity(n * (n - 1) / 2);
    let mut d_zu = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            d_xy.push(x[i] * y[j] - x[j] * y[i]);
            d_zu.push(z[i] * u[j] - z[j] * u[i]);
        }
    }
    let mut precondition_holds = true;
    'scan: for &a in &d_xy {
        for &b in &d_zu {
            if a * b < 0.0 {
                precondition_holds = false;
                break 'scan;
            }
        }
    }

    let dot = |p: &[f64], q: &[f64]| -> f64 { p.iter().zip(q).map(|(a, b)| a * b).sum() };
    let lhs = dot(x, z) * dot(y, u);
    let rhs = dot(y, z) * dot(x, u);
    let slack = 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
    Ok(SeitzOutcome {
        precondition_holds,
        inequality_holds: lhs >= rhs - slack,
        lhs,
        rhs,
    })
}

/// Randomized instantiations of the inequality as the uniqueness proof uses
/// it: sorted data `Y`, an endpoint `beta < Y_(1)`, a positive shape, and
/// `x_i = (Y_(i)-beta)^(-1/xi)`, `y_i = 1`, `z_i = (Y_(i)-beta)^(-2)`,
/// `u_i = (Y_(i)-beta)^(-1)`. Verdict: no violation whenever the
/// precondition holds (and the precondition held every time).
pub fn seitz_experiment(
    config: &ExperimentConfig,
    instantiations: usize,
) -> Result<ExperimentReport> {
    if instantiations == 0 {
        return Err(Error::Domain("need at least one instantiation".into()));
    }
    let theta0 = config.theta0;
    let outcomes: Vec<Result<(u64, SeitzOutcome)>> = (0..instantiations)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(config.seed, i);
            let n = rng.random_range(5..=25usize);
            let data = sample_with(&theta0, n, &mut rng)?;
            let xi: f64 = rng.random_range(0.05..2.0);
            let beta = data.min() - rng.random_range(1e-3..3.0) * data.range();
            let (mut x, mut z, mut u) = (Vec::new(), Vec::new(), Vec::new());
            for &yv in data.values() {
                let t = yv - beta;
                x.push(t.powf(-1.0 / xi));
                z.push(t.powi(-2));
                u.push(t.recip());
            }
            let y = vec![1.0; n];
            Ok((i as u64, seitz_check(&x, &y, &z, &u)?))
        })
        .collect();
    let outcomes: Vec<(u64, SeitzOutcome)> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut csv = CsvBuilder::new(&[
        "instantiation",
        "precondition_holds",
        "inequality_holds",
        "lhs",
        "rhs",
    ]);
    let mut violations = 0usize;
    let mut precondition_failures = 0usize;
    for (i, o) in &outcomes {
        csv.row(
            &[
                *i,
                u64::from(o.precondition_holds),
                u64::from(o.inequality_holds),
            ],
            &[o.lhs, o.rhs],
        );
        if !o.precondition_holds {
            precondition_failures += 1;
        } else if !o.inequality_holds {
            violations += 1;
        }
    }
    let mut report = ExperimentReport::new("seitz", config.echo());
    report.raw_csv_content = csv.finish();
    report.verdicts.push(Verdict {
        name: "no_violation_under_precondition".into(),
        pass: violations == 0,
        detail: format!(
            "{violations} violations, {precondition_failures} precondition failures \
             over {instantiations} instantiations"
        ),
    });
    Ok(report)
}
