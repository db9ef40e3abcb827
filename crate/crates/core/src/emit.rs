//! Numeric and report emission helpers shared by the CSV/JSON interfaces.

use serde_json::{json, Value};

use crate::fit::FitResult;
use crate::inference::InferenceResult;

/// 17-significant-digit rendering, round-trip exact for `f64`. Non-finite
/// values render as `nan` / `inf` / `-inf`.
pub fn csv_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Fit report in the stable JSON schema:
/// `{"tau", "mu", "xi", "beta", "loglik", "se", "warnings", "stationary_points"}`.
/// `se` is null unless an inference result with standard errors is supplied.
pub fn fit_report_json(fit: &FitResult, inference: Option<&InferenceResult>) -> Value {
    let se = inference
        .and_then(|inf| inf.se.as_ref())
        .map(|se| json!({ "mu": se.mu, "tau": se.tau, "xi": se.xi }));
    json!({
        "tau": fit.params.tau(),
        "mu": fit.params.mu(),
        "xi": fit.params.xi(),
        "beta": fit.beta_hat.map(json_f64),
        "loglik": fit.loglik,
        "se": se,
        "warnings": fit.warnings,
        "stationary_points": fit
            .stationary_points
            .iter()
            .map(|s| json!({ "xi": s.xi, "pl": s.pl, "pl_deriv": json_f64(s.pl_deriv) }))
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_float_round_trips() {
        for x in [0.2, -1.0 / 3.0, 1.7e-300, -4.9e200, 0.0] {
            let s = csv_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(csv_float(f64::NAN), "nan");
        assert_eq!(csv_float(f64::INFINITY), "inf");
        assert_eq!(csv_float(f64::NEG_INFINITY), "-inf");
    }
}
