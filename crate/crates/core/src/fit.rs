//! Global maximization of the GEV log-likelihood over `{xi < n-1}`.
//!
//! The profile likelihood `PL(xi)` is evaluated on a coarse grid, every sign
//! change of its derivative is bracketed and refined, the Gumbel slice is
//! added as a candidate when the search interval covers zero, and the
//! candidate with the largest profile value wins. `PL'` diverges to `-inf` at
//! `xi = -1`, so the grid is spaced uniformly in an atanh transform, which
//! concentrates points near the interval ends where the derivative moves
//! fastest.

use serde::{Deserialize, Serialize};

use crate::profile::{curve, profile_loglik_hinted, ProfileCurve, ProfilePoint};
use crate::{DataSample, Error, GevParams, Result, XI_ZERO_TOL};

/// Search interval, grid resolution and solver tolerances for [`fit`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Lower end of the shape search interval (must be > -1).
    pub xi_lower: f64,
    /// Upper end; clamped to `n - 1 - 1e-6` for the sample at hand.
    pub xi_upper: f64,
    /// Number of coarse grid points (>= 16).
    pub coarse_grid_size: usize,
    /// Relative width tolerance for the stationary-point refinement in `xi`.
    pub refine_tol: f64,
    /// Relative tolerance for the slice root solve in `beta`.
    pub beta_tol: f64,
    /// Emit a warning when the fitted shape is at or below this value
    /// (asymptotic normality needs `xi > -1/2`).
    pub warn_below: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            xi_lower: -0.99,
            xi_upper: 5.0,
            coarse_grid_size: 256,
            refine_tol: 1e-10,
            beta_tol: 1e-12,
            warn_below: -0.5,
        }
    }
}

/// A refined zero of `PL'` (or the Gumbel candidate at `xi = 0`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub xi: f64,
    pub pl: f64,
    pub pl_deriv: f64,
}

/// The fitted global maximizer with its search diagnostics.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: GevParams,
    /// `mu - tau/xi` at the maximizer; `None` for a Gumbel fit.
    pub beta_hat: Option<f64>,
    /// `PL(xi_hat)`, the maximum log-likelihood.
    pub loglik: f64,
    /// The coarse profile curve the search scanned.
    pub curve: ProfileCurve,
    /// All candidates examined, sorted by profile value descending.
    pub stationary_points: Vec<StationaryPoint>,
    pub warnings: Vec<String>,
    pub config: SearchConfig,
}

/// Grid of `g` points covering `[lo, hi]` exactly, spaced uniformly in an
/// atanh transform so that spacing tightens toward both interval ends.
pub fn atanh_spaced_grid(lo: f64, hi: f64, g: usize) -> Vec<f64> {
    assert!(g >= 2 && hi > lo);
    let edge = 1.0 - 1.0 / (4.0 * g as f64);
    let umax = edge.atanh();
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..g)
        .map(|j| {
            let u = -umax + 2.0 * umax * j as f64 / (g - 1) as f64;
            let s = (u.tanh() / edge).clamp(-1.0, 1.0);
            mid + half * s
        })
        .collect()
}

fn validate(config: &SearchConfig, data: &DataSample) -> Result<(f64, f64)> {
    let hi = config.xi_upper.min(data.len() as f64 - 1.0 - 1e-6);
    let lo = config.xi_lower;
    if !(-1.0 < lo && lo < hi) {
        return Err(Error::Domain(format!(
            "search interval [{lo}, {hi}] must satisfy -1 < lower < upper < n-1"
        )));
    }
    if config.coarse_grid_size < 16 {
        return Err(Error::Domain(format!(
            "coarse grid size must be >= 16, got {}",
            config.coarse_grid_size
        )));
    }
    if config.refine_tol.is_nan()
        || config.refine_tol <= 0.0
        || config.beta_tol.is_nan()
        || config.beta_tol <= 0.0
    {
        return Err(Error::Domain("tolerances must be positive".into()));
    }
    Ok((lo, hi))
}

/// Root of `PL'` inside a sign-change bracket from the coarse grid, by the
/// Illinois variant of regula falsi (bracket-safe, superlinear).
fn refine_bracket(
    data: &DataSample,
    mut lo: f64,
    mut hi: f64,
    mut d_lo: f64,
    mut d_hi: f64,
    config: &SearchConfig,
) -> Result<ProfilePoint> {
    let mut hint = None;
    let mut last_side = 0i8;
    for _ in 0..100 {
        let x = if (d_hi - d_lo).abs() > 0.0 {
            let secant = hi - d_hi * (hi - lo) / (d_hi - d_lo);
            if secant > lo && secant < hi {
                secant
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        let p = profile_loglik_hinted(x, data, config.beta_tol, hint)?;
        hint = gap_of(&p, data);
        if p.pl_deriv == 0.0 {
            return Ok(p);
        }
        if p.pl_deriv.signum() == d_lo.signum() {
            lo = x;
            d_lo = p.pl_deriv;
            if last_side == -1 {
                d_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            d_hi = p.pl_deriv;
            if last_side == 1 {
                d_lo *= 0.5;
            }
            last_side = 1;
        }
        if hi - lo < config.refine_tol * x.abs().max(1.0) {
            break;
        }
    }
    profile_loglik_hinted(0.5 * (lo + hi), data, config.beta_tol, hint)
}

fn gap_of(p: &ProfilePoint, data: &DataSample) -> Option<f64> {
    if p.xi.abs() < XI_ZERO_TOL || !p.beta_n.is_finite() {
        return None;
    }
    let eps = if p.xi > 0.0 {
        data.min() - p.beta_n
    } else {
        p.beta_n - data.max()
    };
    (eps > 0.0).then_some(eps)
}

/// Locates the global maximizer of the log-likelihood over the search
/// interval. See the module docs for the strategy.
pub fn fit(data: &DataSample, config: &SearchConfig) -> Result<FitResult> {
    let (lo, hi) = validate(config, data)?;
    let grid = atanh_spaced_grid(lo, hi, config.coarse_grid_size);
    let coarse = curve(data, &grid, config.beta_tol)?;

    let mut warnings = Vec::new();
    let mut candidates: Vec<ProfilePoint> = Vec::new();

    // Bracket every sign change of PL' between adjacent evaluated points.
    for pair in coarse.points.windows(2) {
        let (p0, p1) = (&pair[0], &pair[1]);
        if !p0.pl_deriv.is_finite() || !p1.pl_deriv.is_finite() {
            continue;
        }
        if p0.pl_deriv == 0.0 {
            candidates.push(p0.clone());
        } else if p0.pl_deriv.signum() != p1.pl_deriv.signum() {
            match refine_bracket(data, p0.xi, p1.xi, p0.pl_deriv, p1.pl_deriv, config) {
                Ok(p) => candidates.push(p),
                Err(e) => warnings.push(format!(
                    "stationary-point refinement failed in [{}, {}]: {e}",
                    p0.xi, p1.xi
                )),
            }
        }
    }
    if let Some(last) = coarse.points.last() {
        if last.pl_deriv == 0.0 {
            candidates.push(last.clone());
        }
    }

    // The Gumbel slice competes whenever the interval covers xi = 0.
    if lo < 0.0 && 0.0 < hi {
        match crate::profile::gumbel_cross_section(data, config.beta_tol) {
            Ok(p) => candidates.push(p),
            Err(e) => warnings.push(format!("gumbel candidate failed: {e}")),
        }
    }

    // Boundary diagnostics from the coarse scan.
    let grid_argmax = coarse
        .points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.pl.total_cmp(&b.1.pl))
        .map(|(i, _)| i);
    if let Some(i) = grid_argmax {
        if i == 0 || i + 1 == coarse.points.len() {
            warnings.push(format!(
                "maximum at search bound (coarse-grid argmax at xi = {}); \
                 the returned fit is the best interior candidate",
                coarse.points[i].xi
            ));
        }
    }

    if candidates.is_empty() {
        // No stationary point inside the interval: fall back to the best
        // grid point so callers still get a usable (warned) fit.
        match grid_argmax {
            Some(i) => {
                warnings.push("no interior stationary point; returning best grid point".into());
                candidates.push(coarse.points[i].clone());
            }
            None => return Err(Error::NoCandidate),
        }
    }

    // Sort by profile value descending; deterministic tie-break toward
    // smaller |xi| when the ridge is flat at desk precision.
    let n = data.len() as f64;
    candidates.sort_by(|a, b| b.pl.total_cmp(&a.pl));
    let mut best = candidates[0].clone();
    for c in candidates.iter().skip(1) {
        if (best.pl - c.pl) < 1e-9 * n && c.xi.abs() < best.xi.abs() {
            warnings.push(format!(
                "profile likelihood nearly flat between xi = {} and xi = {}; \
                 picking the smaller |xi|",
                best.xi, c.xi
            ));
            best = c.clone();
        }
    }

    if best.xi <= config.warn_below {
        warnings.push(format!(
            "xi_hat = {} <= {}: asymptotic normality unavailable",
            best.xi, config.warn_below
        ));
    }

    let params = GevParams::new(best.tau_n, best.mu_n, best.xi)?;
    let stationary_points = candidates
        .iter()
        .map(|p| StationaryPoint {
            xi: p.xi,
            pl: p.pl,
            pl_deriv: p.pl_deriv,
        })
        .collect();
    Ok(FitResult {
        params,
        beta_hat: best.beta_n.is_finite().then_some(best.beta_n),
        loglik: best.pl,
        curve: coarse,
        stationary_points,
        warnings,
        config: *config,
    })
}

/// All stationary-point candidates for a dataset, sorted by profile value
/// descending — the raw material behind [`fit`]'s selection.
pub fn candidate_report(data: &DataSample, config: &SearchConfig) -> Result<Vec<StationaryPoint>> {
    Ok(fit(data, config)?.stationary_points)
}
