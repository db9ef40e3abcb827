use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shapes with `|xi|` below this threshold are treated as Gumbel (`xi = 0`).
/// The `xi != 0` formulas lose all precision below it.
pub const XI_ZERO_TOL: f64 = 1e-8;

/// A GEV parameter point `theta = (tau, mu, xi)` with `tau > 0`.
///
/// `beta() = mu - tau/xi` is the finite support endpoint: a lower bound for
/// `xi > 0`, an upper bound for `xi < 0`, undefined for the Gumbel case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevParams {
    tau: f64,
    mu: f64,
    xi: f64,
}

impl GevParams {
    pub fn new(tau: f64, mu: f64, xi: f64) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::Domain(format!(
                "scale tau must be finite and > 0, got {tau}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::Domain(format!(
                "location mu must be finite, got {mu}"
            )));
        }
        if !xi.is_finite() {
            return Err(Error::Domain(format!("shape xi must be finite, got {xi}")));
        }
        Ok(Self { tau, mu, xi })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// True when the shape is numerically zero and Gumbel formulas apply.
    pub fn is_gumbel(&self) -> bool {
        self.xi.abs() < XI_ZERO_TOL
    }

    /// The support endpoint `beta = mu - tau/xi`. Errors for the Gumbel case,
    /// where no finite endpoint exists; callers needing it must branch.
    pub fn beta(&self) -> Result<f64> {
        if self.is_gumbel() {
            return Err(Error::ZeroShape);
        }
        Ok(self.mu - self.tau / self.xi)
    }

    /// Support interval `(lower, upper)` of the distribution:
    /// `(beta, +inf)` for `xi > 0`, `(-inf, beta)` for `xi < 0`, the whole
    /// line for the Gumbel case.
    pub fn endpoints(&self) -> (f64, f64) {
        if self.is_gumbel() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else if self.xi > 0.0 {
            (self.mu - self.tau / self.xi, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, self.mu - self.tau / self.xi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_matches_hand_values() {
        let p = GevParams::new(0.5, 20.0, 0.2).unwrap();
        assert_eq!(p.beta().unwrap(), 17.5);
        let p = GevParams::new(1.0, 0.0, -1.0).unwrap();
        assert_eq!(p.beta().unwrap(), 1.0);
        let p = GevParams::new(0.5, 20.0, -0.2).unwrap();
        assert_eq!(p.beta().unwrap(), 22.5);
    }

    #[test]
    fn beta_undefined_for_gumbel() {
        let p = GevParams::new(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(p.beta(), Err(Error::ZeroShape)));
        let p = GevParams::new(1.0, 0.0, 1e-9).unwrap();
        assert!(matches!(p.beta(), Err(Error::ZeroShape)));
    }

    #[test]
    fn endpoints_by_shape_sign() {
        let p = GevParams::new(0.5, 20.0, 0.2).unwrap();
        assert_eq!(p.endpoints(), (17.5, f64::INFINITY));
        let p = GevParams::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.endpoints(), (f64::NEG_INFINITY, f64::INFINITY));
        let p = GevParams::new(0.5, 20.0, -0.2).unwrap();
        assert_eq!(p.endpoints(), (f64::NEG_INFINITY, 22.5));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GevParams::new(0.0, 0.0, 0.1).is_err());
        assert!(GevParams::new(-1.0, 0.0, 0.1).is_err());
        assert!(GevParams::new(f64::NAN, 0.0, 0.1).is_err());
        assert!(GevParams::new(1.0, f64::INFINITY, 0.1).is_err());
        assert!(GevParams::new(1.0, 0.0, f64::NAN).is_err());
    }
}
