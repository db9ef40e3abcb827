//! Observed-information inference: the closed-form Hessian of the
//! log-likelihood, standard errors from its inverse, the stationarity
//! (score) identities, and a local curvature scan.
//!
//! Parameter order is `(mu, tau, xi)` throughout, matching the order in which
//! the mixed partials are assembled.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::emit::csv_float;
use crate::{log_likelihood, standardize, DataSample, Error, GevParams, Result, XI_ZERO_TOL};

/// Below this |xi| the closed forms (with their `1/xi^4` factors) cancel
/// catastrophically and a central finite difference of the log-likelihood is
/// used instead. The shape-shape entry combines terms of size `n/xi^3`, so
/// its cancellation error is roughly `1e-16 * n * 3/xi^3`; the switch point
/// keeps that below 1e-6 of the entry itself.
pub const ANALYTIC_HESSIAN_MIN_XI: f64 = 1e-3;

/// Relative finite-difference step for the small-shape fallback.
const FD_STEP: f64 = 1e-5;

/// Condition numbers beyond this are reported as singular information.
const MAX_CONDITION: f64 = 1e12;

/// Second-derivative matrix of `L_n` at a parameter point, order `(mu, tau, xi)`.
#[derive(Debug, Clone)]
pub struct HessianMatrix {
    pub entries: [[f64; 3]; 3],
    pub at: GevParams,
}

impl HessianMatrix {
    /// `-H`, the observed information.
    pub fn observed_information(&self) -> [[f64; 3]; 3] {
        let mut o = self.entries;
        for row in &mut o {
            for v in row {
                *v = -*v;
            }
        }
        o
    }
}

/// Wald standard errors, square roots of the diagonal of the inverse
/// observed information.
#[derive(Debug, Clone, Copy)]
pub struct StandardErrors {
    pub mu: f64,
    pub tau: f64,
    pub xi: f64,
}

/// Hessian plus the derived curvature/uncertainty summary.
#[derive(Debug, Clone)]
pub struct InferenceResult {
    pub hessian: HessianMatrix,
    pub neg_definite: bool,
    pub condition_number: f64,
    /// Present only when the Hessian is negative definite and the fitted
    /// shape is above -1/2 (the asymptotic-normality regime).
    pub se: Option<StandardErrors>,
}

/// Closed-form Hessian for `|xi| >= 1e-4`; finite differences otherwise.
pub fn hessian(params: &GevParams, data: &DataSample) -> Result<HessianMatrix> {
    if !crate::support_contains(params, data) {
        return Err(Error::OutOfSupport);
    }
    if params.xi().abs() < ANALYTIC_HESSIAN_MIN_XI {
        return finite_difference_hessian(params, data);
    }
    let (tau, xi) = (params.tau(), params.xi());
    let n = data.len() as f64;
    let std = standardize(params, data)?;

    // Power/log sums over w_i: s1 = sum w^-1, s2 = sum w^-2,
    // t_k = sum w^(-k-1/xi), u = sum log w, v_k = sum w^(-k-1/xi) log w,
    // x2 = sum w^(-1/xi) log^2 w.
    let (mut s1, mut s2) = (0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    let mut u = 0.0;
    let (mut v0, mut v1) = (0.0, 0.0);
    let mut x2 = 0.0;
    for &w in std.w() {
        let lw = w.ln();
        let inv = 1.0 / w;
        let p = (-lw / xi).exp(); // w^(-1/xi)
        s1 += inv;
        s2 += inv * inv;
        t0 += p;
        t1 += p * inv;
        t2 += p * inv * inv;
        u += lw;
        v0 += p * lw;
        v1 += p * inv * lw;
        x2 += p * lw * lw;
    }

    let t2_ = tau * tau;
    let x2_ = xi * xi;
    let x3_ = x2_ * xi;
    let x4_ = x2_ * x2_;

    let h_mm = (1.0 + xi) * xi / t2_ * s2 - (1.0 + xi) / t2_ * t2;
    let h_mt = -t1 / (t2_ * xi) - (xi + 1.0) / t2_ * s2 + (xi + 1.0) / (t2_ * xi) * t2;
    let h_mx = -s1 / (xi * tau) + (xi + 1.0) / (tau * x2_) * t1 + (xi + 1.0) / (tau * xi) * s2
        - (1.0 / (tau * x2_) + 1.0 / (tau * xi)) * t2
        - v1 / (x2_ * tau);
    let h_tt = (-n * xi + (xi - 1.0) * t0 + 2.0 * t1 + xi * (xi + 1.0) * s2 - (xi + 1.0) * t2)
        / (x2_ * t2_);
    let h_tx = (-n + (xi + 1.0) / xi * t0 + (2.0 + xi) * s1
        - 2.0 * (xi + 1.0) / xi * t1
        - (xi + 1.0) * s2
        + (xi + 1.0) / xi * t2
        - v0 / xi
        + v1 / xi)
        / (tau * x2_);
    let h_xx = n * (xi + 3.0) / x3_ - (3.0 * xi + 1.0) / x4_ * t0 - 2.0 * (xi + 2.0) / x3_ * s1
        + 2.0 * (2.0 * xi + 1.0) / x4_ * t1
        + (xi + 1.0) / x3_ * s2
        - (xi + 1.0) / x4_ * t2
        - 2.0 / x3_ * u
        + 2.0 * (xi + 1.0) / x4_ * v0
        - 2.0 / x4_ * v1
        - x2 / x4_;

    Ok(HessianMatrix {
        entries: [[h_mm, h_mt, h_mx], [h_mt, h_tt, h_tx], [h_mx, h_tx, h_xx]],
        at: *params,
    })
}

/// Central-difference Hessian of the log-likelihood, step `1e-5 * scale`
/// per parameter (`tau` sets the scale for `mu` and `tau`).
#[allow(clippy::needless_range_loop)]
fn finite_difference_hessian(params: &GevParams, data: &DataSample) -> Result<HessianMatrix> {
    let at = [params.mu(), params.tau(), params.xi()];
    let scale = [params.tau(), params.tau(), 1.0];
    let f = |p: &[f64; 3]| -> f64 {
        match GevParams::new(p[1], p[0], p[2]) {
            Ok(g) => log_likelihood(&g, data),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let f0 = f(&at);
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        let hi = FD_STEP * scale[i];
        for j in i..3 {
            let hj = FD_STEP * scale[j];
            let v = if i == j {
                let mut up = at;
                up[i] += hi;
                let mut dn = at;
                dn[i] -= hi;
                (f(&up) - 2.0 * f0 + f(&dn)) / (hi * hi)
            } else {
                let mut pp = at;
                pp[i] += hi;
                pp[j] += hj;
                let mut pm = at;
                pm[i] += hi;
                pm[j] -= hj;
                let mut mp = at;
                mp[i] -= hi;
                mp[j] += hj;
                let mut mm = at;
                mm[i] -= hi;
                mm[j] -= hj;
                (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * hi * hj)
            };
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    Ok(HessianMatrix {
        entries,
        at: *params,
    })
}

fn eigen_of(m: &[[f64; 3]; 3]) -> SymmetricEigen<f64, nalgebra::Const<3>> {
    SymmetricEigen::new(Matrix3::from_fn(|i, j| m[i][j]))
}

/// Standard errors from the inverse observed information, via the symmetric
/// eigendecomposition (negative-definiteness and the condition number come
/// with it).
///
/// Returns `Ok(None)` when the Hessian is not negative definite or the
/// evaluation point has `xi <= -1/2`; errors when the information matrix is
/// numerically singular.
pub fn standard_errors(h: &HessianMatrix) -> Result<Option<StandardErrors>> {
    let info = h.observed_information();
    if info.iter().flatten().any(|v| !v.is_finite()) {
        return Ok(None);
    }
    let eig = eigen_of(&info);
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Ok(None);
    }
    let max = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let cond = max / min;
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::SingularInformation { cond });
    }
    if h.at.xi() <= -0.5 {
        return Ok(None);
    }
    // diag of V diag(1/lambda) V^T
    let mut diag = [0.0f64; 3];
    for (i, d) in diag.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..3 {
            let v = eig.eigenvectors[(i, k)];
            acc += v * v / eig.eigenvalues[k];
        }
        *d = acc;
    }
    Ok(Some(StandardErrors {
        mu: diag[0].sqrt(),
        tau: diag[1].sqrt(),
        xi: diag[2].sqrt(),
    }))
}

/// Hessian plus curvature summary and (when available) standard errors.
pub fn infer(params: &GevParams, data: &DataSample) -> Result<InferenceResult> {
    let h = hessian(params, data)?;
    let info = h.observed_information();
    let finite = info.iter().flatten().all(|v| v.is_finite());
    let (neg_definite, condition_number) = if finite {
        let eig = eigen_of(&info);
        let min = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let max_abs = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min_abs = eig
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        (
            min > 0.0,
            if min_abs > 0.0 {
                max_abs / min_abs
            } else {
                f64::INFINITY
            },
        )
    } else {
        (false, f64::INFINITY)
    };
    let se = match standard_errors(&h) {
        Ok(se) => se,
        Err(Error::SingularInformation { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(InferenceResult {
        hessian: h,
        neg_definite,
        condition_number,
        se,
    })
}

/// Normalized residuals of the three stationarity identities satisfied by any
/// interior maximizer:
///
/// ```text
/// (i)   sum (1+xi) w_i^-1        = sum w_i^(-1-1/xi)
/// (ii)  sum w_i^(-1/xi)          = n
/// (iii) sum log w_i - n xi       = sum w_i^(-1/xi) log w_i
/// ```
///
/// Each residual is the absolute defect divided by `n`.
pub fn score_identities(theta_hat: &GevParams, data: &DataSample) -> Result<(f64, f64, f64)> {
    if theta_hat.is_gumbel() {
        return Err(Error::ZeroShape);
    }
    let xi = theta_hat.xi();
    let n = data.len() as f64;
    let std = standardize(theta_hat, data)?;
    let (mut lhs1, mut rhs1) = (0.0, 0.0);
    let mut t0 = 0.0;
    let (mut u, mut v0) = (0.0, 0.0);
    for &w in std.w() {
        let lw = w.ln();
        let p = (-lw / xi).exp();
        lhs1 += (1.0 + xi) / w;
        rhs1 += p / w;
        t0 += p;
        u += lw;
        v0 += p * lw;
    }
    Ok((
        (lhs1 - rhs1).abs() / n,
        (t0 - n).abs() / n,
        (u - n * xi - v0).abs() / n,
    ))
}

/// One curvature probe from [`local_concavity_scan`].
#[derive(Debug, Clone, Copy)]
pub struct ConcavityProbe {
    pub tau: f64,
    pub beta: f64,
    pub xi: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Outcome of a curvature scan around a fitted point.
#[derive(Debug, Clone)]
pub struct ConcavityScan {
    pub all_negative_definite: bool,
    /// Largest (least negative) eigenvalue seen across the probes.
    pub worst_eigenvalue: f64,
    pub probes: Vec<ConcavityProbe>,
    /// Probes skipped because they fell outside the support (or had an
    /// invalid scale/shape).
    pub skipped: usize,
}

impl ConcavityScan {
    /// CSV of probe points and their extreme Hessian eigenvalues.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,beta,xi,min_eigenvalue,max_eigenvalue\n");
        for p in &self.probes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_float(p.tau),
                csv_float(p.beta),
                csv_float(p.xi),
                csv_float(p.min_eigenvalue),
                csv_float(p.max_eigenvalue)
            ));
        }
        out
    }
}

/// Evaluates the Hessian at up to `m` lattice points of the box
/// `{|tau - tau_hat| <= r, |beta - beta_hat| <= r, |xi - xi_hat| <= r}`
/// intersected with the support, and reports whether every probe is negative
/// definite. `r = 0` degenerates to the single-point check.
pub fn local_concavity_scan(
    theta_hat: &GevParams,
    data: &DataSample,
    radius: f64,
    probes: usize,
) -> Result<ConcavityScan> {
    if theta_hat.is_gumbel() {
        return Err(Error::ZeroShape);
    }
    if radius < 0.0 || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be >= 0, got {radius}")));
    }
    if probes == 0 {
        return Err(Error::Domain("need at least one probe".into()));
    }
    let beta_hat = theta_hat.beta()?;
    let offsets: Vec<f64> = if radius == 0.0 {
        vec![0.0]
    } else {
        let side = (probes as f64).cbrt().ceil().max(2.0) as usize;
        (0..side)
            .map(|i| -radius + 2.0 * radius * i as f64 / (side - 1) as f64)
            .collect()
    };

    let mut records = Vec::new();
    let mut skipped = 0usize;
    let mut worst = f64::NEG_INFINITY;
    let mut all_nd = true;
    'outer: for &dt in &offsets {
        for &db in &offsets {
            for &dx in &offsets {
                if records.len() + skipped >= probes {
                    break 'outer;
                }
                let tau = theta_hat.tau() + dt;
                let beta = beta_hat + db;
                let xi = theta_hat.xi() + dx;
                if tau <= 0.0 || xi.abs() < XI_ZERO_TOL {
                    skipped += 1;
                    continue;
                }
                let mu = beta + tau / xi;
                let params = match GevParams::new(tau, mu, xi) {
                    Ok(p) => p,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                if !crate::support_contains(&params, data) {
                    skipped += 1;
                    continue;
                }
                let h = hessian(&params, data)?;
                if h.entries.iter().flatten().any(|v| !v.is_finite()) {
                    skipped += 1;
                    continue;
                }
                let eig = eigen_of(&h.entries);
                let min = eig
                    .eigenvalues
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                let max = eig
                    .eigenvalues
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max);
                if max >= 0.0 {
                    all_nd = false;
                }
                worst = worst.max(max);
                records.push(ConcavityProbe {
                    tau,
                    beta,
                    xi,
                    min_eigenvalue: min,
                    max_eigenvalue: max,
                });
            }
        }
    }
    Ok(ConcavityScan {
        all_negative_definite: all_nd && !records.is_empty(),
        worst_eigenvalue: worst,
        probes: records,
        skipped,
    })
}
