//! Distribution-level properties checked against independent oracles:
//! term-by-term likelihood summation, quadrature of the density, quantile
//! round trips, and a Kolmogorov-Smirnov band for the sampler.

use gevfit_core::dist::{cdf, quantile, sample};
use gevfit_core::{log_likelihood, support_contains, DataSample, GevParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(tau: f64, mu: f64, xi: f64) -> GevParams {
    GevParams::new(tau, mu, xi).unwrap()
}

/// Naive term-by-term log-likelihood: direct powf per observation, no
/// log-space accumulation. Deliberately independent of the library path.
fn naive_loglik(tau: f64, mu: f64, xi: f64, values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if xi == 0.0 {
        let mut acc = -n * tau.ln();
        for &y in values {
            let z = (y - mu) / tau;
            acc -= z + (-z).exp();
        }
        return acc;
    }
    let mut sum_log = 0.0;
    let mut sum_pow = 0.0;
    for &y in values {
        let w = 1.0 + xi * (y - mu) / tau;
        if w <= 0.0 {
            return f64::NEG_INFINITY;
        }
        sum_log += w.ln();
        sum_pow += w.powf(-1.0 / xi);
    }
    -n * tau.ln() - (1.0 + 1.0 / xi) * sum_log - sum_pow
}

#[test]
fn loglik_matches_naive_summation_oracle() {
    let p = params(0.5, 20.0, 0.2);
    let data = sample(&p, 10, 42).unwrap();
    let got = log_likelihood(&p, &data);
    let oracle = naive_loglik(0.5, 20.0, 0.2, data.values());
    let rel = (got - oracle).abs() / oracle.abs().max(1.0);
    assert!(rel < 1e-12, "{got} vs {oracle}");

    // and on a spread of shapes/points
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let xi = rng.random_range(-0.8..1.5f64);
        let xi = if xi.abs() < 0.02 { 0.3 } else { xi };
        let tau = rng.random_range(0.1..3.0);
        let mu = rng.random_range(-5.0..5.0);
        let truth = params(tau, mu, xi);
        let data = sample(&truth, 40, rng.random()).unwrap();
        let got = log_likelihood(&truth, &data);
        let oracle = naive_loglik(tau, mu, xi, data.values());
        let rel = (got - oracle).abs() / oracle.abs().max(1.0);
        assert!(rel < 1e-12, "xi={xi}: {got} vs {oracle}");
    }
}

/// Density via the likelihood at a single point is awkward (n >= 2), so the
/// quadrature oracle integrates the closed-form density directly.
fn density(p: &GevParams, y: f64) -> f64 {
    let (tau, mu, xi) = (p.tau(), p.mu(), p.xi());
    if xi == 0.0 {
        let z = (y - mu) / tau;
        return ((-z) - (-z).exp()).exp() / tau;
    }
    let w = 1.0 + xi * (y - mu) / tau;
    if w <= 0.0 {
        return 0.0;
    }
    let t = w.powf(-1.0 / xi);
    (t / (w * tau)) * (-t).exp()
}

/// Composite Simpson integration of the density from the lower support end.
fn cdf_by_quadrature(p: &GevParams, y: f64) -> f64 {
    let (lower, _) = p.endpoints();
    // Integrate from a practical lower limit: the 1e-13 quantile or the
    // finite endpoint, whichever is larger.
    let lo = if lower.is_finite() {
        lower
    } else {
        quantile(p, 1e-13).unwrap()
    };
    let steps = 200_000usize;
    let h = (y - lo) / steps as f64;
    let mut acc = density(p, lo) + density(p, y);
    for i in 1..steps {
        let x = lo + h * i as f64;
        acc += density(p, x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn cdf_matches_quadrature_oracle() {
    let p = params(0.5, 20.0, 0.2);
    let got = cdf(&p, 21.0);
    let oracle = cdf_by_quadrature(&p, 21.0);
    assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");

    let p = params(1.3, -2.0, -0.4);
    let got = cdf(&p, -1.0);
    let oracle = cdf_by_quadrature(&p, -1.0);
    assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
}

#[test]
fn quantile_round_trips_through_cdf() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let xi = rng.random_range(-0.9..2.0f64);
        let tau = rng.random_range(0.1..4.0);
        let mu = rng.random_range(-10.0..10.0);
        let p = params(tau, mu, xi);
        let prob = rng.random_range(1e-6..1.0 - 1e-6f64);
        let y = quantile(&p, prob).unwrap();
        let back = cdf(&p, y);
        assert!((back - prob).abs() < 1e-10, "xi={xi} p={prob} back={back}");
    }
}

#[test]
fn sampler_passes_kolmogorov_smirnov_band() {
    let p = params(0.5, 20.0, 0.2);
    let n = 100_000usize;
    let data = sample(&p, n, 2024).unwrap();
    // values() is sorted, so the KS statistic is a single scan
    let mut d = 0.0f64;
    for (i, &y) in data.values().iter().enumerate() {
        let f = cdf(&p, y);
        let emp_hi = (i + 1) as f64 / n as f64;
        let emp_lo = i as f64 / n as f64;
        d = d.max((f - emp_lo).abs()).max((emp_hi - f).abs());
    }
    // 99% band: c(0.01) = sqrt(-ln(0.005)/2) = 1.6276
    let crit = 1.6276 / (n as f64).sqrt();
    assert!(d < crit, "KS statistic {d} outside 99% band {crit}");
}

#[test]
fn loglik_is_sum_of_log_densities() {
    // density obtained independently by differentiating the cdf numerically
    let p = params(0.8, 3.0, 0.4);
    let data = sample(&p, 60, 31).unwrap();
    let l = log_likelihood(&p, &data);
    let h = 1e-6;
    let numeric: f64 = data
        .values()
        .iter()
        .map(|&y| ((cdf(&p, y + h) - cdf(&p, y - h)) / (2.0 * h)).ln())
        .sum();
    assert!(
        (l - numeric).abs() / l.abs().max(1.0) < 1e-6,
        "{l} vs {numeric}"
    );

    // the closed-form density agrees to full precision
    let exact: f64 = data.values().iter().map(|&y| density(&p, y).ln()).sum();
    assert!((l - exact).abs() / l.abs().max(1.0) < 1e-12);
}

#[test]
fn loglik_continuous_in_shape_at_zero() {
    let data = sample(&params(1.0, 0.0, 0.0), 100, 55).unwrap();
    let at_zero = log_likelihood(&params(1.0, 0.0, 0.0), &data);
    let mut last_gap = f64::INFINITY;
    for xi in [1e-2, 1e-4, 1e-6] {
        let gap = (log_likelihood(&params(1.0, 0.0, xi), &data) - at_zero).abs();
        assert!(
            gap < last_gap,
            "gap {gap} did not shrink from {last_gap} at xi={xi}"
        );
        last_gap = gap;
    }
}

#[test]
fn location_scale_equivariance() {
    let p = params(0.5, 20.0, 0.2);
    let data = sample(&p, 80, 77).unwrap();
    let n = data.len() as f64;
    let base = log_likelihood(&p, &data);
    for (a, c) in [(2.0, 1.0), (0.25, -3.0), (10.0, 100.0)] {
        let shifted = DataSample::new(data.values().iter().map(|&y| a * y + c).collect()).unwrap();
        let q = params(a * 0.5, a * 20.0 + c, 0.2);
        let l = log_likelihood(&q, &shifted);
        let expect = base - n * a.ln();
        assert!(
            (l - expect).abs() < 1e-9 * l.abs().max(1.0),
            "a={a} c={c}: {l} vs {expect}"
        );
    }
}

#[test]
fn support_agrees_with_standardized_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let data = sample(&params(1.0, 0.0, 0.3), 30, 8).unwrap();
    for _ in 0..500 {
        let tau = rng.random_range(0.05..5.0);
        let mu = rng.random_range(-10.0..10.0);
        let xi = rng.random_range(-2.0..2.0f64);
        let p = params(tau, mu, xi);
        let by_extremes = support_contains(&p, &data);
        let by_w = data
            .values()
            .iter()
            .all(|&y| p.is_gumbel() || 1.0 + xi * (y - mu) / tau > 0.0);
        assert_eq!(by_extremes, by_w, "tau={tau} mu={mu} xi={xi}");
    }
}
