//! The joint log-likelihood, its support, and the standardized residuals
//! `w_i = 1 + xi (Y_i - mu)/tau = xi (Y_i - beta)/tau`.

use crate::{DataSample, Error, GevParams, Result};

/// Standardized observations `w_i(theta)`, all strictly positive, together
/// with the parameter point they were computed at.
#[derive(Debug, Clone)]
pub struct StandardizedValues {
    w: Vec<f64>,
    params: GevParams,
}

impl StandardizedValues {
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn params(&self) -> &GevParams {
        &self.params
    }
}

/// Whether `theta` lies in the support `Omega_n`, i.e. every observation has
/// positive density. Equivalent to `w_i > 0` for all `i`, and decidable from
/// the sample extremes alone: `beta < Y_(1)` for `xi > 0`, `beta > Y_(n)` for
/// `xi < 0`, always true for the Gumbel case.
pub fn support_contains(params: &GevParams, data: &DataSample) -> bool {
    match params.beta() {
        Err(_) => true,
        Ok(beta) => {
            if params.xi() > 0.0 {
                beta < data.min()
            } else {
                beta > data.max()
            }
        }
    }
}

/// Computes `w_i = xi (Y_i - beta)/tau` for every observation.
pub fn standardize(params: &GevParams, data: &DataSample) -> Result<StandardizedValues> {
    if params.is_gumbel() {
        return Err(Error::ZeroShape);
    }
    if !support_contains(params, data) {
        return Err(Error::OutOfSupport);
    }
    let (tau, mu, xi) = (params.tau(), params.mu(), params.xi());
    let w: Vec<f64> = data
        .values()
        .iter()
        .map(|&y| 1.0 + xi * (y - mu) / tau)
        .collect();
    if w.iter().any(|&wi| wi <= 0.0) {
        return Err(Error::OutOfSupport);
    }
    Ok(StandardizedValues { w, params: *params })
}

/// Joint log-likelihood `L_n(theta)`.
///
/// `-n log tau - (1 + 1/xi) sum log w_i - sum w_i^(-1/xi)` for `xi != 0`, the
/// Gumbel form for `xi = 0`, and `-inf` when `theta` is outside the support
/// (a sentinel, not an error, so generic optimizers can probe freely).
///
/// The power sum is accumulated in log space: near the support boundary its
/// terms span hundreds of orders of magnitude.
pub fn log_likelihood(params: &GevParams, data: &DataSample) -> f64 {
    let n = data.len() as f64;
    let (tau, mu, xi) = (params.tau(), params.mu(), params.xi());
    if params.is_gumbel() {
        let mut sum_z = 0.0;
        let mut sum_e = 0.0;
        for &y in data.values() {
            let z = (y - mu) / tau;
            sum_z += z;
            sum_e += (-z).exp();
        }
        return -n * tau.ln() - sum_z - sum_e;
    }
    // sum w^(-1/xi) = exp(m) * sum exp(a_i - m), a_i = -ln(w_i)/xi
    let mut sum_lw = 0.0;
    let mut max_a = f64::NEG_INFINITY;
    let mut lws = Vec::with_capacity(data.len());
    for &y in data.values() {
        let w = 1.0 + xi * (y - mu) / tau;
        if w <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let lw = w.ln();
        lws.push(lw);
        sum_lw += lw;
        let a = -lw / xi;
        if a > max_a {
            max_a = a;
        }
    }
    let sum_scaled: f64 = lws.iter().map(|&lw| (-lw / xi - max_a).exp()).sum();
    let power_sum = max_a.exp() * sum_scaled; // may overflow to +inf -> L = -inf
    -n * tau.ln() - (1.0 + 1.0 / xi) * sum_lw - power_sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(tau: f64, mu: f64, xi: f64) -> GevParams {
        GevParams::new(tau, mu, xi).unwrap()
    }

    #[test]
    fn support_from_extremes() {
        let data = DataSample::new(vec![18.0, 19.0, 23.0]).unwrap();
        // xi=0.2, beta=17.5 < 18 = Y_(1)
        assert!(support_contains(&params(0.5, 20.0, 0.2), &data));
        // xi=-0.2, beta=22.5, needs beta > Y_(n)=23
        assert!(!support_contains(&params(0.5, 20.0, -0.2), &data));
        // Gumbel always in support
        assert!(support_contains(&params(0.5, 20.0, 0.0), &data));
    }

    #[test]
    fn standardize_direct_substitution() {
        let data = DataSample::new(vec![1.0, 2.0]).unwrap();
        let s = standardize(&params(1.0, 0.0, 1.0), &data).unwrap();
        assert_eq!(s.w(), &[2.0, 3.0]);

        let data = DataSample::new(vec![1.0, 0.0]).unwrap();
        let s = standardize(&params(2.0, 0.0, -0.5), &data).unwrap();
        // w at y=1: 1 - 0.5*(1-0)/2 = 0.75
        assert!((s.w()[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn standardize_boundary_and_gumbel_errors() {
        let data = DataSample::new(vec![1.0, 2.0]).unwrap();
        // mu = 3.5, tau = 0.5, xi = 0.2 puts beta = 3.5 - 2.5 = 1.0 = Y_(1):
        // the boundary itself is excluded.
        let at_boundary = params(0.5, 3.5, 0.2);
        assert_eq!(at_boundary.beta().unwrap(), 1.0);
        assert!(matches!(
            standardize(&at_boundary, &data),
            Err(Error::OutOfSupport)
        ));
        assert!(matches!(
            standardize(&params(1.0, 0.0, 0.0), &data),
            Err(Error::ZeroShape)
        ));
    }

    #[test]
    fn gumbel_form_direct_value() {
        // tau=1, mu=0, xi=0, Y={0,1}: L = -(0+1) - (e^0 + e^-1)
        let data = DataSample::new(vec![0.0, 1.0]).unwrap();
        let l = log_likelihood(&params(1.0, 0.0, 0.0), &data);
        let direct = -1.0 - (1.0 + (-1.0f64).exp());
        assert!((l - direct).abs() < 1e-14, "{l} vs {direct}");
    }

    #[test]
    fn out_of_support_is_minus_infinity() {
        let data = DataSample::new(vec![18.0, 19.0, 23.0]).unwrap();
        let l = log_likelihood(&params(0.5, 20.0, -0.2), &data);
        assert_eq!(l, f64::NEG_INFINITY);
    }
}
