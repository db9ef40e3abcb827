//! Gamma-family special functions for the pseudo-law-of-large-numbers limits:
//! `ln Gamma`, digamma, trigamma, and the gamma derivatives `Gamma^(b)` for
//! `b` up to 2.
//!
//! Only positive arguments are supported. Each function shifts its argument
//! up by the recurrence until the asymptotic (Stirling-type) series applies;
//! no reflection machinery is needed because every argument arising in the
//! limit formulas is `k xi_0 + a + 1 > 0`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Arguments below this are shifted up by recurrence before the asymptotic
/// series is applied.
const SHIFT_THRESHOLD: f64 = 10.0;

/// Derivative order of the gamma function, at most 2: the Hessian-level
/// theory never needs more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaDerivOrder {
    Zero,
    One,
    Two,
}

impl GammaDerivOrder {
    pub fn from_order(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::Domain(format!(
                "gamma derivative order must be 0, 1 or 2, got {b}"
            ))),
        }
    }

    pub fn order(&self) -> u8 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("{what} requires x > 0, got {x}")));
    }
    Ok(())
}

/// `log Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive(x, "ln_gamma")?;
    // ln Gamma(x) = ln Gamma(x + k) - sum ln(x + j)
    let mut z = x;
    let mut shift = 0.0;
    while z < SHIFT_THRESHOLD {
        shift -= z.ln();
        z += 1.0;
    }
    // Stirling: (z - 1/2) ln z - z + ln(2 pi)/2 + sum B_2k / (2k (2k-1) z^(2k-1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let inv2 = (1.0 / z) * (1.0 / z);
    let mut series = 0.0;
    let mut pw = 1.0 / z;
    for c in C {
        series += c * pw;
        pw *= inv2;
    }
    let half_ln_2pi = 0.918_938_533_204_672_7;
    Ok(shift + (z - 0.5) * z.ln() - z + half_ln_2pi + series)
}

/// Digamma `psi(x) = d/dx log Gamma(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    // psi(x) = psi(x + k) - sum 1/(x + j)
    let mut z = x;
    let mut shift = 0.0;
    while z < SHIFT_THRESHOLD {
        shift -= 1.0 / z;
        z += 1.0;
    }
    // psi(z) ~ ln z - 1/(2z) - sum B_2k / (2k z^2k)
    const C: [f64; 7] = [
        -1.0 / 12.0,
        1.0 / 120.0,
        -1.0 / 252.0,
        1.0 / 240.0,
        -1.0 / 132.0,
        691.0 / 32760.0,
        -1.0 / 12.0,
    ];
    let inv2 = (1.0 / z) * (1.0 / z);
    let mut series = 0.0;
    let mut pw = inv2;
    for c in C {
        series += c * pw;
        pw *= inv2;
    }
    Ok(shift + z.ln() - 0.5 / z + series)
}

/// Trigamma `psi'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma")?;
    // psi'(x) = psi'(x + k) + sum 1/(x + j)^2
    let mut z = x;
    let mut shift = 0.0;
    while z < SHIFT_THRESHOLD {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    // psi'(z) ~ 1/z + 1/(2 z^2) + sum B_2k / z^(2k+1)
    const C: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pw = inv * inv2;
    for c in C {
        series += c * pw;
        pw *= inv2;
    }
    Ok(shift + inv + 0.5 * inv2 + series)
}

/// `Gamma^(b)(x)`, the `b`-th derivative of the gamma function:
/// `Gamma`, `Gamma psi`, and `Gamma (psi^2 + psi')` for `b = 0, 1, 2`.
pub fn gamma_deriv(b: GammaDerivOrder, x: f64) -> Result<f64> {
    let g = ln_gamma(x)?.exp();
    Ok(match b {
        GammaDerivOrder::Zero => g,
        GammaDerivOrder::One => g * digamma(x)?,
        GammaDerivOrder::Two => {
            let psi = digamma(x)?;
            g * (psi * psi + trigamma(x)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    const PI_SQ_OVER_6: f64 = 1.644_934_066_848_226_4;

    #[test]
    fn ln_gamma_integer_points() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        // Gamma(5) = 24
        assert!((ln_gamma(5.0).unwrap() - 24.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_half() {
        let expect = std::f64::consts::PI.sqrt().ln();
        assert!((ln_gamma(0.5).unwrap() - expect).abs() < 1e-13 * expect.abs().max(1.0));
    }

    #[test]
    fn digamma_and_trigamma_at_one() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((trigamma(1.0).unwrap() - PI_SQ_OVER_6).abs() < 1e-12);
    }

    #[test]
    fn gamma_deriv_at_one() {
        assert!((gamma_deriv(GammaDerivOrder::Zero, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_deriv(GammaDerivOrder::One, 1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        // Gamma''(1) = gamma^2 + pi^2/6
        let expect = EULER_GAMMA * EULER_GAMMA + PI_SQ_OVER_6;
        assert!((gamma_deriv(GammaDerivOrder::Two, 1.0).unwrap() - expect).abs() < 1e-11);
    }

    #[test]
    fn rejects_nonpositive() {
        for f in [ln_gamma, digamma, trigamma] {
            assert!(f(0.0).is_err());
            assert!(f(-1.0).is_err());
            assert!(f(f64::NAN).is_err());
        }
        assert!(gamma_deriv(GammaDerivOrder::One, -2.0).is_err());
    }

    #[test]
    fn order_construction() {
        assert_eq!(
            GammaDerivOrder::from_order(2).unwrap(),
            GammaDerivOrder::Two
        );
        assert!(GammaDerivOrder::from_order(3).is_err());
        assert_eq!(GammaDerivOrder::One.order(), 1);
    }
}
