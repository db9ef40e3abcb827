//! Lab-level invariants: bit-for-bit reproducibility, verdicts re-derivable
//! from the raw CSV payloads, the exact score-identity case of the
//! pseudo-LLN, file emission, and the canonical reproduction outcome.

use gevfit_core::special::GammaDerivOrder;
use gevfit_core::{DataSample, GevParams};
use gevfit_lab::{
    boundary_divergence_check, figure2_reproduction, pseudo_lln_experiment, pseudo_lln_suite,
    rate_experiment, seitz_experiment, uniform_consistency_suite, ExperimentConfig, LlnCase,
};

fn theta(tau: f64, mu: f64, xi: f64) -> GevParams {
    GevParams::new(tau, mu, xi).unwrap()
}

fn small_rate_config(seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![500, 2000, 8000], 60, seed)
}

#[test]
fn reports_are_bit_for_bit_reproducible() {
    let a = rate_experiment(&small_rate_config(5)).unwrap();
    let b = rate_experiment(&small_rate_config(5)).unwrap();
    assert_eq!(a.raw_csv_content, b.raw_csv_content);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let c = rate_experiment(&small_rate_config(6)).unwrap();
    assert_ne!(a.raw_csv_content, c.raw_csv_content);
}

#[test]
fn rate_verdicts_rederive_from_the_csv_payload() {
    let report = rate_experiment(&small_rate_config(7)).unwrap();
    // parse the raw CSV and recompute the boundary medians per n
    let mut by_n: std::collections::BTreeMap<u64, (Vec<f64>, Vec<f64>)> = Default::default();
    for line in report.raw_csv_content.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let n: u64 = f[1].parse().unwrap();
        let e = by_n.entry(n).or_default();
        e.0.push(f[2].parse().unwrap());
        e.1.push(f[3].parse().unwrap());
    }
    let median = |v: &mut Vec<f64>| -> f64 {
        v.sort_unstable_by(f64::total_cmp);
        let k = v.len();
        if k % 2 == 1 {
            v[k / 2]
        } else {
            0.5 * (v[k / 2 - 1] + v[k / 2])
        }
    };
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (_, (mut amp, mut damp)) in by_n {
        up.push(median(&mut amp));
        down.push(median(&mut damp));
    }
    let up_pass = up.windows(2).all(|w| w[1] > w[0]);
    let down_pass = down.windows(2).all(|w| w[1] < w[0]);
    assert_eq!(up_pass, report.verdicts[0].pass);
    assert_eq!(down_pass, report.verdicts[1].pass);
    // and the recomputed medians agree with the recorded ones
    let recorded: Vec<f64> = report.medians("boundary_amplified");
    for (a, b) in up.iter().zip(&recorded) {
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn rate_rejects_bad_configs() {
    let mut c = small_rate_config(1);
    c.replicates = 10;
    assert!(rate_experiment(&c).is_err());
    let mut c = small_rate_config(1);
    c.gamma = 0.0;
    assert!(rate_experiment(&c).is_err());
    let mut c = small_rate_config(1);
    c.theta0 = theta(0.5, 20.0, 0.0);
    assert!(rate_experiment(&c).is_err());
    let mut c = small_rate_config(1);
    c.n_grid = vec![100, 100];
    assert!(rate_experiment(&c).is_err());
}

#[test]
fn pseudo_lln_score_identity_case_is_exact() {
    // k = 0, a = 1, b = 0 tracks (1/n) sum w^(-1/xi_hat), which the
    // stationarity identities pin to 1 exactly at every fitted replicate.
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![300], 50, 11);
    let report = pseudo_lln_experiment(&config, 0, 1).unwrap();
    for line in report.raw_csv_content.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let gap: f64 = f[3].parse().unwrap();
        assert!(gap < 1e-7, "replicate {} gap {gap}", f[0]);
    }
}

#[test]
fn pseudo_lln_gap_scale_at_ten_thousand() {
    // k = 1, a = 0, b = 0 targets Gamma(1.2); the median gap at n = 1e4 sits
    // well below 0.05.
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![10_000], 50, 13);
    let report = pseudo_lln_experiment(&config, 1, 0).unwrap();
    let med = report.per_n[0].stats["gap_k1_a0_b0"].median;
    assert!(med < 0.05, "median gap {med}");
}

#[test]
fn rate_trends_survive_an_enormous_gamma() {
    // gamma = 10 makes the damped statistic collapse extremely fast and the
    // amplified one explode; the verdicts still hold.
    let mut config = small_rate_config(15);
    config.gamma = 10.0;
    let report = rate_experiment(&config).unwrap();
    assert!(report.passed(), "{:?}", report.verdicts);
}

#[test]
fn pseudo_lln_rejects_invalid_power() {
    // k xi0 + a + 1 <= 0
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![200], 50, 1);
    assert!(pseudo_lln_experiment(&config, -6, 0).is_err());
    // and with a negative true shape where a positive k breaks it
    let config = ExperimentConfig::new(theta(0.5, 20.0, -0.4), vec![200], 50, 1);
    assert!(pseudo_lln_experiment(&config, 3, 0).is_err());
}

#[test]
fn pseudo_lln_suite_shares_fits_consistently() {
    // the suite and the single-case runner agree on identical cases
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![400], 50, 21);
    let single = pseudo_lln_experiment(&config, 1, 0).unwrap();
    let suite = pseudo_lln_suite(
        &config,
        &[
            LlnCase {
                k: 1,
                a: 0,
                b: GammaDerivOrder::Zero,
            },
            LlnCase {
                k: 2,
                a: 1,
                b: GammaDerivOrder::Zero,
            },
        ],
    )
    .unwrap();
    assert_eq!(single.raw_csv_content, suite[0].raw_csv_content);
}

#[test]
fn uniform_consistency_respects_interval_invariants() {
    let mut config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![300], 10, 31);
    config.alpha_interval = (-6.0, 3.0); // m <= -1/xi0 = -5
    assert!(uniform_consistency_suite(&config, &[GammaDerivOrder::Zero]).is_err());
    config.alpha_interval = (-1.0, -0.5); // M <= 0
    assert!(uniform_consistency_suite(&config, &[GammaDerivOrder::Zero]).is_err());
    config.alpha_interval = (-1.0, 3.0);
    assert!(uniform_consistency_suite(&config, &[GammaDerivOrder::Zero]).is_ok());
}

#[test]
fn uniform_sup_stable_under_grid_refinement() {
    // doubling the alpha grid changes the sup by < 1e-3 at n = 1e4
    use gevfit_core::special::gamma_deriv;
    use gevfit_core::{fit, standardize, SearchConfig};
    let data = gevfit_core::dist::sample(&theta(0.5, 20.0, 0.2), 10_000, 41).unwrap();
    let fitted = fit(
        &data,
        &SearchConfig {
            coarse_grid_size: 64,
            ..Default::default()
        },
    )
    .unwrap();
    let std = standardize(&fitted.params, &data).unwrap();
    let sup_on = |points: usize| -> f64 {
        let mut sup = 0.0f64;
        for j in 0..points {
            let alpha = -1.0 + 4.0 * j as f64 / (points - 1) as f64;
            let phi_n: f64 = std
                .w()
                .iter()
                .map(|&w| (-alpha * w.ln()).exp())
                .sum::<f64>()
                / data.len() as f64;
            let phi = gamma_deriv(GammaDerivOrder::Zero, alpha * 0.2 + 1.0).unwrap();
            sup = sup.max((phi_n - phi).abs());
        }
        sup
    };
    let (s200, s400) = (sup_on(200), sup_on(400));
    assert!((s200 - s400).abs() < 1e-3, "{s200} vs {s400}");
}

#[test]
fn uniform_gap_vanishes_at_alpha_zero_under_truth() {
    // at the true parameters the alpha = 0 statistic is exactly 1 = Gamma(1)
    let truth = theta(0.5, 20.0, 0.2);
    let data = gevfit_core::dist::sample(&truth, 500, 3).unwrap();
    let std = gevfit_core::standardize(&truth, &data).unwrap();
    let phi_n: f64 =
        std.w().iter().map(|&w| (-0.0 * w.ln()).exp()).sum::<f64>() / data.len() as f64;
    assert_eq!(phi_n, 1.0);
}

#[test]
fn seitz_experiment_clean_on_instantiations() {
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![100], 50, 77);
    let report = seitz_experiment(&config, 200).unwrap();
    assert!(report.passed(), "{:?}", report.verdicts);
    assert_eq!(report.raw_csv_content.lines().count(), 201);
}

#[test]
fn boundary_check_requires_small_samples() {
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![100], 50, 1);
    let big = gevfit_core::dist::sample(&theta(0.5, 20.0, 0.2), 200, 1).unwrap();
    assert!(boundary_divergence_check(&config, &big).is_err());
    let small = DataSample::new(vec![0.0, 1.0, 2.0, 3.0, 10.0]).unwrap();
    let report = boundary_divergence_check(&config, &small).unwrap();
    assert!(report.passed(), "{:?}", report.verdicts);
}

#[test]
fn figure2_outcomes_and_files() {
    let config = ExperimentConfig::new(theta(0.5, 20.0, 0.2), vec![1000], 50, 2024);
    let out = figure2_reproduction(&config.theta0, 1000, 2024).unwrap();
    assert!(out.single_dominant_interior);
    assert!(out.not_globally_concave);
    assert!((out.xi_hat - 0.2).abs() < 0.15);
    let report = out.report(&config);
    assert!(report.passed(), "{:?}", report.verdicts);

    let dir = std::env::temp_dir().join(format!("gevfit_lab_test_{}", std::process::id()));
    let (json_path, csv_path) = report.write(&dir).unwrap();
    assert!(json_path.ends_with("figure2_report.json"));
    assert!(csv_path.ends_with("figure2_raw.csv"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["raw_csv"], "figure2_raw.csv");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("xi,beta_n,tau_n,mu_n,pl,pl_deriv,iters\n"));
    std::fs::remove_dir_all(&dir).ok();
}

/// Consistency trend of the fitted shape: the median absolute error shrinks
/// as the sample doubles, for both signs of the truth (200 replicates per
/// size).
#[test]
fn mc_consistency_trend_of_the_fit() {
    use gevfit_core::dist::sample_with;
    use gevfit_core::fit;
    use rayon::prelude::*;
    for xi0 in [0.2, -0.2] {
        let truth = theta(0.5, 20.0, xi0);
        let mut medians = Vec::new();
        for (gi, &n) in [250usize, 500, 1000, 2000].iter().enumerate() {
            let mut errs: Vec<f64> = (0..200usize)
                .into_par_iter()
                .map(|r| {
                    let mut rng = gevfit_lab::replicate_rng(9000 + gi as u64, r);
                    let data = sample_with(&truth, n, &mut rng).unwrap();
                    let fitted = fit(&data, &gevfit_lab::lab_search_config()).unwrap();
                    (fitted.params.xi() - xi0).abs()
                })
                .collect();
            errs.sort_unstable_by(f64::total_cmp);
            medians.push(0.5 * (errs[99] + errs[100]));
        }
        assert!(
            medians.windows(2).all(|w| w[1] < w[0]),
            "xi0={xi0}: medians {medians:?} not decreasing"
        );
    }
}

/// Negative-definiteness of the observed information at the fit, across
/// replicates and both shape signs (n = 500).
#[test]
fn observed_information_negative_definite_across_replicates() {
    use gevfit_core::dist::sample_with;
    use gevfit_core::fit;
    use gevfit_core::inference::infer;
    use rayon::prelude::*;
    for xi0 in [0.2, -0.2] {
        let truth = theta(0.5, 20.0, xi0);
        let failures: usize = (0..200usize)
            .into_par_iter()
            .map(|r| {
                let mut rng = gevfit_lab::replicate_rng(9100, r);
                let data = sample_with(&truth, 500, &mut rng).unwrap();
                let fitted = fit(&data, &gevfit_lab::lab_search_config()).unwrap();
                let inf = infer(&fitted.params, &data).unwrap();
                usize::from(!inf.neg_definite)
            })
            .sum();
        assert_eq!(failures, 0, "xi0={xi0}");
    }
}

/// The per-observation observed information stabilizes in n: entrywise
/// relative change of the replicate-median matrices between n = 5000 and
/// n = 20000 stays below 10%.
#[test]
fn scaled_information_stabilizes_with_n() {
    use gevfit_core::dist::sample_with;
    use gevfit_core::fit;
    use gevfit_core::inference::infer;
    use rayon::prelude::*;
    let truth = theta(0.5, 20.0, 0.2);
    let median_info = |n: usize| -> [[f64; 3]; 3] {
        let mats: Vec<[[f64; 3]; 3]> = (0..30usize)
            .into_par_iter()
            .map(|r| {
                let mut rng = gevfit_lab::replicate_rng(9200, r);
                let data = sample_with(&truth, n, &mut rng).unwrap();
                let fitted = fit(&data, &gevfit_lab::lab_search_config()).unwrap();
                let inf = infer(&fitted.params, &data).unwrap();
                let mut m = inf.hessian.observed_information();
                for row in &mut m {
                    for v in row {
                        *v /= n as f64;
                    }
                }
                m
            })
            .collect();
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut col: Vec<f64> = mats.iter().map(|m| m[i][j]).collect();
                col.sort_unstable_by(f64::total_cmp);
                *v = 0.5 * (col[14] + col[15]);
            }
        }
        out
    };
    let a = median_info(5000);
    let b = median_info(20_000);
    for i in 0..3 {
        for j in 0..3 {
            let rel = (a[i][j] - b[i][j]).abs() / a[i][j].abs().max(1e-12);
            assert!(
                rel < 0.10,
                "entry ({i},{j}): {} vs {} rel {rel}",
                a[i][j],
                b[i][j]
            );
        }
    }
}
