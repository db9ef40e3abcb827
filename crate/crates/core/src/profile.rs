//! Cross-section maximization of the GEV log-likelihood at fixed shape.
//!
//! On each slice of the support at a fixed `xi != 0`, the log-likelihood has a
//! unique global maximizer `(tau_n(xi), mu_n(xi))`. In the endpoint
//! parametrization `beta = mu - tau/xi` the maximizer is characterized by the
//! scalar equation `H_n(beta) = 0`, where
//!
//! ```text
//! H_n(beta) = sum d_i^(-1-1/xi) / (sum d_i^(-1/xi) * sum d_i^(-1)) - (xi+1)/n,
//! d_i = xi (Y_i - beta),
//! ```
//!
//! and `H_n` is strictly increasing in `beta` on its domain (`beta < Y_(1)`
//! for `xi > 0`, `beta > Y_(n)` for `xi < 0`), so bisection is globally
//! convergent. The scale recovers in closed form and the profile value and its
//! shape derivative come from the same power sums.
//!
//! Everything is computed from the boundary gap `eps = |beta - Y_extreme|`
//! rather than `beta` itself: near the bounds of `(-1, n-1)` the root sits
//! at gaps as small as 1e-20 * range, far below what `Y_(1) - beta` can
//! resolve in double precision. Bisection runs on `log eps`, which keeps the
//! root representable at any scale.

use crate::emit::csv_float;
use crate::{log_likelihood, DataSample, Error, GevParams, Result, XI_ZERO_TOL};

/// Below this |xi| the analytic shape-derivative formula cancels
/// catastrophically (1/xi^2 factors); a central finite difference of the
/// profile value is used instead.
pub const ANALYTIC_DERIV_MIN_XI: f64 = 1e-4;

/// The slice maximizer at one shape value.
#[derive(Debug, Clone)]
pub struct ProfilePoint {
    pub xi: f64,
    /// Endpoint of the maximizing slice parameters; NaN at the Gumbel slice.
    pub beta_n: f64,
    pub tau_n: f64,
    pub mu_n: f64,
    /// `PL_n(xi)`, the slice maximum of the log-likelihood.
    pub pl: f64,
    /// `PL_n'(xi)`; finite-differenced for `|xi| < 1e-4` and at the Gumbel slice.
    pub pl_deriv: f64,
    pub solver_iterations: u32,
}

/// Profile likelihood evaluated along a strictly increasing shape grid.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    pub points: Vec<ProfilePoint>,
    /// Grid values whose slice evaluation failed, with the failure message.
    pub failures: Vec<(f64, String)>,
    pub n: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub data_fingerprint: u64,
}

impl ProfileCurve {
    /// CSV with header `xi,beta_n,tau_n,mu_n,pl,pl_deriv,iters`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi,beta_n,tau_n,mu_n,pl,pl_deriv,iters\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_float(p.xi),
                csv_float(p.beta_n),
                csv_float(p.tau_n),
                csv_float(p.mu_n),
                csv_float(p.pl),
                csv_float(p.pl_deriv),
                p.solver_iterations
            ));
        }
        out
    }
}

/// Power sums over `d_i = xi (Y_i - beta)`, shared by `H_n`, its derivative,
/// the profile value and the profile derivative. One pass over `log d_i`.
///
/// Sums involving `d^(-1/xi)` are stored scaled by `exp(-m)` with
/// `m = max_i (-log d_i / xi)`, so every scaled term is at most 1.
struct SliceSums {
    m: f64,
    /// `exp(-m) sum d^(-1/xi)`
    b: f64,
    /// `exp(-m) sum d^(-1-1/xi)`
    a: f64,
    /// `exp(-m) sum d^(-2-1/xi)`
    a2: f64,
    /// `sum 1/d`
    c: f64,
    /// `sum 1/d^2`
    c2: f64,
    /// `sum log d`
    u: f64,
    /// `exp(-m) sum d^(-1/xi) log d`
    bu: f64,
}

impl SliceSums {
    /// `eps` is the gap from the relevant sample extreme: `Y_(1) - beta` for
    /// `xi > 0`, `beta - Y_(n)` for `xi < 0`. Must be positive.
    fn compute(xi: f64, data: &DataSample, eps: f64) -> Self {
        let values = data.values();
        let n = values.len();
        let ax = xi.abs();
        // The max of a_i = -log(d_i)/xi is at the smallest d for xi > 0
        // (the element at Y_(1), gap 0) and at the largest d for xi < 0
        // (also the element at Y_(1), gap = range).
        let extreme_gap = if xi > 0.0 { 0.0 } else { data.range() };
        let m = -(ax * (extreme_gap + eps)).ln() / xi;
        let (mut b, mut a, mut a2, mut c, mut c2, mut u, mut bu) =
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            let gap = if xi > 0.0 {
                values[i] - values[0]
            } else {
                values[n - 1] - values[i]
            };
            let d = ax * (gap + eps);
            let ld = d.ln();
            let e = (-ld / xi - m).exp();
            let inv = 1.0 / d;
            b += e;
            a += e * inv;
            a2 += e * inv * inv;
            c += inv;
            c2 += inv * inv;
            u += ld;
            bu += e * ld;
        }
        Self {
            m,
            b,
            a,
            a2,
            c,
            c2,
            u,
            bu,
        }
    }

    fn h(&self, xi: f64, n: f64) -> f64 {
        self.a / (self.b * self.c) - (xi + 1.0) / n
    }

    /// `dH/dbeta`, strictly positive on the domain.
    fn h_beta_deriv(&self, xi: f64) -> f64 {
        (xi + 1.0) * self.a2 / (self.b * self.c)
            - self.a * self.a / (self.b * self.b * self.c)
            - xi * self.a * self.c2 / (self.b * self.c * self.c)
    }

    /// `log((1/n) sum d^(-1/xi))`
    fn log_mean_power(&self, n: f64) -> f64 {
        self.m + (self.b / n).ln()
    }

    fn pl(&self, xi: f64, n: f64) -> f64 {
        -n * self.log_mean_power(n) - (xi + 1.0) / xi * self.u - n
    }

    fn pl_deriv(&self, xi: f64, n: f64) -> f64 {
        -n / xi - n * (self.bu / self.b) / (xi * xi) + self.u / (xi * xi)
    }

    fn tau(&self, xi: f64, n: f64) -> f64 {
        (-xi * self.log_mean_power(n)).exp()
    }
}

fn check_xi_range(xi: f64, data: &DataSample) -> Result<()> {
    if xi.abs() < XI_ZERO_TOL {
        return Err(Error::ZeroShape);
    }
    let n1 = data.len() as f64 - 1.0;
    if !(-1.0 < xi && xi < n1) {
        return Err(Error::Domain(format!(
            "xi must lie in (-1, n-1) = (-1, {n1}), got {xi}"
        )));
    }
    Ok(())
}

fn eps_of_beta(beta: f64, xi: f64, data: &DataSample) -> Result<f64> {
    let eps = if xi > 0.0 {
        data.min() - beta
    } else {
        beta - data.max()
    };
    if eps <= 0.0 {
        return Err(Error::Domain(format!(
            "beta = {beta} is outside the xi-dependent domain ({} Y extreme)",
            if xi > 0.0 { "below" } else { "above" }
        )));
    }
    Ok(eps)
}

/// The monotone root function `H_n(beta)` at fixed `xi`.
pub fn h_n(beta: f64, xi: f64, data: &DataSample) -> Result<f64> {
    check_xi_range(xi, data)?;
    let eps = eps_of_beta(beta, xi, data)?;
    let sums = SliceSums::compute(xi, data, eps);
    Ok(sums.h(xi, data.len() as f64))
}

/// The closed-form slice scale at a given endpoint:
/// `tau = {(1/n) sum [xi (Y_i - beta)]^(-1/xi)}^(-xi)`.
pub fn tau_of(xi: f64, beta: f64, data: &DataSample) -> Result<f64> {
    check_xi_range(xi, data)?;
    let eps = eps_of_beta(beta, xi, data)?;
    let sums = SliceSums::compute(xi, data, eps);
    Ok(sums.tau(xi, data.len() as f64))
}

/// Outcome of the root solve, in gap coordinates.
struct SolvedSlice {
    eps: f64,
    sums: SliceSums,
    iterations: u32,
}

/// Solves `H_n = 0` for the boundary gap. `hint` (a previous solution's gap)
/// warm-starts the bracket.
fn solve_eps(xi: f64, data: &DataSample, tol: f64, hint: Option<f64>) -> Result<SolvedSlice> {
    let n = data.len() as f64;
    let range = data.range();
    // Sign of H at the near end (eps -> 0): for xi > 0 the limit is
    // 1 - (xi+1)/n > 0; for xi < 0 it is -(xi+1)/n < 0. At the far end the
    // limit is -xi/n with the opposite sign. H is monotone in beta, hence
    // monotone in eps (decreasing for xi > 0, increasing for xi < 0).
    let near_positive = xi > 0.0;
    let mut iterations = 0u32;
    let h_at = |t: f64| -> f64 { SliceSums::compute(xi, data, t.exp()).h(xi, n) };
    let near_side = |h: f64| -> bool {
        if near_positive {
            h > 0.0
        } else {
            h < 0.0
        }
    };

    let mut t_lo;
    let mut t_hi;
    'found: {
        if let Some(eps0) = hint {
            if eps0 > 0.0 && eps0.is_finite() {
                let half = 3.0 * std::f64::consts::LN_2;
                let (ta, tb) = (eps0.ln() - half, eps0.ln() + half);
                iterations += 2;
                if near_side(h_at(ta)) && !near_side(h_at(tb)) {
                    t_lo = ta;
                    t_hi = tb;
                    break 'found;
                }
            }
        }
        // Near endpoint: offset range * 1e-9, shrinking geometrically while
        // the root is still closer to the boundary.
        let mut t_near = (range * 1e-9).ln();
        loop {
            iterations += 1;
            let h = h_at(t_near);
            if h.is_nan() {
                return Err(Error::BracketFailure { xi });
            }
            if near_side(h) {
                break;
            }
            t_near += (1e-3f64).ln();
            if t_near < range.ln() - 700.0 {
                return Err(Error::BracketFailure { xi });
            }
        }
        // Far endpoint: offset range * 2^k, doubling until the sign flips.
        let mut k = 1u32;
        let t_far = loop {
            let t = range.ln() + f64::from(k) * std::f64::consts::LN_2;
            iterations += 1;
            let h = h_at(t);
            if !h.is_nan() && !near_side(h) {
                break t;
            }
            k += 1;
            if k > 600 {
                return Err(Error::BracketFailure { xi });
            }
        };
        t_lo = t_near;
        t_hi = t_far;
    }

    // Bisection on log eps. Terminate on the beta-space tolerance or when the
    // log-space bracket hits machine resolution.
    let boundary = if xi > 0.0 { data.min() } else { data.max() };
    for _ in 0..300 {
        let t_mid = 0.5 * (t_lo + t_hi);
        iterations += 1;
        let h = h_at(t_mid);
        if near_side(h) {
            t_lo = t_mid;
        } else {
            t_hi = t_mid;
        }
        let eps_mid = t_mid.exp();
        let beta_mid = if xi > 0.0 {
            boundary - eps_mid
        } else {
            boundary + eps_mid
        };
        let width = (t_hi.exp() - t_lo.exp()).abs();
        if width < tol * beta_mid.abs().max(1.0) || (t_hi - t_lo) < 4e-16 {
            break;
        }
    }

    // Safeguarded Newton polish using the analytic dH/dbeta.
    let mut t = 0.5 * (t_lo + t_hi);
    for _ in 0..3 {
        let eps = t.exp();
        let sums = SliceSums::compute(xi, data, eps);
        iterations += 1;
        let h = sums.h(xi, n);
        let dbeta_dt = if xi > 0.0 { -eps } else { eps };
        let dh_dt = sums.h_beta_deriv(xi) * dbeta_dt;
        if !dh_dt.is_finite() || dh_dt == 0.0 {
            break;
        }
        let t_new = t - h / dh_dt;
        if t_new > t_lo && t_new < t_hi {
            t = t_new;
        } else {
            break;
        }
    }

    let eps = t.exp();
    let sums = SliceSums::compute(xi, data, eps);
    Ok(SolvedSlice {
        eps,
        sums,
        iterations,
    })
}

/// Unique root of `H_n` in the `xi`-dependent domain, as an endpoint value.
/// `tol` is relative on `beta` (1e-12 is the library default).
pub fn solve_beta(xi: f64, data: &DataSample, tol: f64) -> Result<f64> {
    check_xi_range(xi, data)?;
    let solved = solve_eps(xi, data, tol, None)?;
    Ok(beta_from_eps(xi, data, solved.eps))
}

fn beta_from_eps(xi: f64, data: &DataSample, eps: f64) -> f64 {
    if xi > 0.0 {
        data.min() - eps
    } else {
        data.max() + eps
    }
}

fn point_from_solved(xi: f64, data: &DataSample, solved: &SolvedSlice) -> ProfilePoint {
    let n = data.len() as f64;
    let tau_n = solved.sums.tau(xi, n);
    let beta_n = beta_from_eps(xi, data, solved.eps);
    // mu from the gap representation: mu = boundary -/+ eps + tau/xi.
    let mu_n = beta_n + tau_n / xi;
    ProfilePoint {
        xi,
        beta_n,
        tau_n,
        mu_n,
        pl: solved.sums.pl(xi, n),
        pl_deriv: f64::NAN, // filled by the caller
        solver_iterations: solved.iterations,
    }
}

/// Profile value `PL_n(xi)` alone (no derivative); used for the finite
/// differences near `xi = 0`.
fn pl_value(xi: f64, data: &DataSample, tol: f64, hint: Option<f64>) -> Result<f64> {
    if xi.abs() < XI_ZERO_TOL {
        return Ok(gumbel_slice_solution(data, tol)?.2);
    }
    let solved = solve_eps(xi, data, tol, hint)?;
    Ok(solved.sums.pl(xi, data.len() as f64))
}

/// The slice maximizer, profile value and profile derivative at one shape.
///
/// Delegates to [`gumbel_cross_section`] for `|xi| < 1e-8`. For
/// `1e-8 <= |xi| < 1e-4` the derivative comes from a central finite
/// difference of the profile value.
pub fn profile_loglik(xi: f64, data: &DataSample, tol: f64) -> Result<ProfilePoint> {
    profile_loglik_hinted(xi, data, tol, None)
}

pub(crate) fn profile_loglik_hinted(
    xi: f64,
    data: &DataSample,
    tol: f64,
    hint: Option<f64>,
) -> Result<ProfilePoint> {
    if xi.abs() < XI_ZERO_TOL {
        return gumbel_cross_section(data, tol);
    }
    check_xi_range(xi, data)?;
    let n = data.len() as f64;
    let solved = solve_eps(xi, data, tol, hint)?;
    let mut point = point_from_solved(xi, data, &solved);
    point.pl_deriv = if xi.abs() >= ANALYTIC_DERIV_MIN_XI {
        solved.sums.pl_deriv(xi, n)
    } else {
        let h = 1e-5;
        let up = pl_value(xi + h, data, tol, Some(solved.eps))?;
        let dn = pl_value(xi - h, data, tol, Some(solved.eps))?;
        (up - dn) / (2.0 * h)
    };
    Ok(point)
}

/// `PL_n'(xi)` recomputed from an already-solved point via the analytic
/// formula with `d_i = xi (Y_i - beta_n)`.
pub fn profile_deriv(xi: f64, data: &DataSample, point: &ProfilePoint) -> Result<f64> {
    check_xi_range(xi, data)?;
    let eps = eps_of_beta(point.beta_n, xi, data)?;
    let sums = SliceSums::compute(xi, data, eps);
    Ok(sums.pl_deriv(xi, data.len() as f64))
}

/// Solves the Gumbel slice system; returns `(tau, mu, pl, iterations)`.
///
/// The stationarity system
/// `n tau = sum [1 - exp(-(Y_i - mu)/tau)] Y_i`, `n = sum exp(-(Y_i - mu)/tau)`
/// reduces to the scalar equation
/// `g(tau) = tau - mean(Y) + sum Y_i e^(-Y_i/tau) / sum e^(-Y_i/tau) = 0`
/// with `mu = -tau log((1/n) sum e^(-Y_i/tau))` recovered afterwards; `g` is
/// strictly increasing. Exponentials are shifted by `Y_(1)` so all weights
/// stay in `(0, 1]`.
fn gumbel_slice_solution(data: &DataSample, tol: f64) -> Result<(f64, f64, f64, u32)> {
    let values = data.values();
    let n = values.len() as f64;
    let y1 = data.min();
    let ybar = data.mean();
    let mut iterations = 0u32;
    // g and the weighted variance (for Newton): g'(tau) = 1 + var_w(Y)/tau^2.
    let mut eval = |tau: f64| -> (f64, f64) {
        iterations += 1;
        let mut sw = 0.0;
        let mut swy = 0.0;
        let mut swyy = 0.0;
        for &y in values {
            let w = (-(y - y1) / tau).exp();
            sw += w;
            swy += w * y;
            swyy += w * y * y;
        }
        let mean_w = swy / sw;
        let var_w = (swyy / sw - mean_w * mean_w).max(0.0);
        (tau - ybar + mean_w, 1.0 + var_w / (tau * tau))
    };

    let sd = {
        let mut s = 0.0;
        for &y in values {
            s += (y - ybar) * (y - ybar);
        }
        (s / n).sqrt()
    };
    // Moment start; g(0+) = Y_(1) - mean < 0 and g(inf) = +inf.
    let start = (sd * 6.0f64.sqrt() / std::f64::consts::PI).max(data.range() * 1e-12);
    let mut lo = start;
    let mut hi = start;
    let mut guard = 0;
    while eval(lo).0 > 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 400 {
            return Err(Error::ConvergenceFailure(
                "gumbel scale lower bracket".into(),
            ));
        }
    }
    guard = 0;
    while eval(hi).0 < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 400 {
            return Err(Error::ConvergenceFailure(
                "gumbel scale upper bracket".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid).0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < tol.max(1e-15) * mid.abs().max(1.0) {
            break;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..3 {
        let (g, gp) = eval(tau);
        let t_new = tau - g / gp;
        if t_new > lo && t_new < hi {
            tau = t_new;
        } else {
            break;
        }
    }

    let log_mean_weight = {
        let mut s = 0.0;
        for &y in values {
            s += (-(y - y1) / tau).exp();
        }
        (s / n).ln()
    };
    let mu = y1 - tau * log_mean_weight;
    let params = GevParams::new(tau, mu, 0.0)?;
    let pl = log_likelihood(&params, data);
    Ok((tau, mu, pl, iterations))
}

/// The `xi = 0` cross-section maximizer. `pl_deriv` is a central finite
/// difference of the profile value at `xi = +-1e-3` (the analytic limit
/// involves derivatives of the slice maximizers that have no computable
/// closed form here).
pub fn gumbel_cross_section(data: &DataSample, tol: f64) -> Result<ProfilePoint> {
    let (tau, mu, pl, iterations) = gumbel_slice_solution(data, tol)?;
    let h = 1e-3;
    let deriv = match (pl_value(h, data, tol, None), pl_value(-h, data, tol, None)) {
        (Ok(up), Ok(dn)) => (up - dn) / (2.0 * h),
        _ => f64::NAN,
    };
    Ok(ProfilePoint {
        xi: 0.0,
        beta_n: f64::NAN,
        tau_n: tau,
        mu_n: mu,
        pl,
        pl_deriv: deriv,
        solver_iterations: iterations,
    })
}

/// Evaluates the profile likelihood along a strictly increasing grid inside
/// `(-1, n-1)`. Points are solved sequentially, warm-starting each bracket
/// from the previous gap (the parallel cold-start alternative is not used);
/// per-point failures are recorded and the rest of the curve is returned.
pub fn curve(data: &DataSample, xi_grid: &[f64], tol: f64) -> Result<ProfileCurve> {
    if xi_grid.is_empty() {
        return Err(Error::Domain("empty xi grid".into()));
    }
    let n1 = data.len() as f64 - 1.0;
    for pair in xi_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Domain(format!(
                "xi grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if xi_grid[0] <= -1.0 || xi_grid[xi_grid.len() - 1] >= n1 {
        return Err(Error::Domain(format!("xi grid must lie inside (-1, {n1})")));
    }

    let mut points = Vec::with_capacity(xi_grid.len());
    let mut failures = Vec::new();
    let mut hint: Option<(f64, f64)> = None; // (xi, eps)
    for &xi in xi_grid {
        let carried = hint.and_then(|(hx, he)| {
            // A gap hint only transfers within one sign region.
            if hx.signum() == xi.signum() {
                Some(he)
            } else {
                None
            }
        });
        match profile_loglik_hinted(xi, data, tol, carried) {
            Ok(p) => {
                if xi.abs() >= XI_ZERO_TOL {
                    let eps = if xi > 0.0 {
                        data.min() - p.beta_n
                    } else {
                        p.beta_n - data.max()
                    };
                    if eps > 0.0 {
                        hint = Some((xi, eps));
                    }
                }
                points.push(p);
            }
            Err(e) => {
                failures.push((xi, e.to_string()));
                hint = None;
            }
        }
    }
    Ok(ProfileCurve {
        points,
        failures,
        n: data.len(),
        y_min: data.min(),
        y_max: data.max(),
        data_fingerprint: data.fingerprint(),
    })
}
