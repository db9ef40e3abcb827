//! Maximum-likelihood fitting of the three-parameter generalized extreme value
//! (GEV) distribution via profile-likelihood decomposition.
//!
//! The GEV family `P(y) = exp{-[1 + xi (y - mu)/tau]^(-1/xi)}` (Gumbel form for
//! `xi = 0`) has a parameter-dependent support, which makes its likelihood
//! surface non-convex and direct 3-d maximization unreliable. This crate
//! instead works slice by slice in the shape parameter:
//!
//! - for each fixed `xi`, the slice maximum of the log-likelihood is unique and
//!   is found by solving a strictly monotone scalar root equation in the
//!   support-endpoint parameter `beta = mu - tau/xi` ([`profile`]);
//! - the global maximizer is located by scanning the profile likelihood
//!   `PL(xi)` over a shape grid and refining the stationary points of its
//!   analytic derivative ([`fit`]);
//! - observed-information standard errors and curvature diagnostics come from
//!   the closed-form Hessian ([`inference`]).
//!
//! [`dist`] holds the distribution primitives (CDF, quantile, seeded
//! sampling), [`special`] the gamma-family special functions used by the
//! verification experiments in the companion `gevfit-lab` crate.

pub mod dist;
pub mod emit;
mod error;
pub mod fit;
pub mod inference;
pub mod loglik;
pub mod params;
pub mod profile;
pub mod sample;
pub mod special;

pub use error::{Error, Result};
pub use fit::{candidate_report, fit, FitResult, SearchConfig, StationaryPoint};
pub use inference::{hessian, score_identities, standard_errors, HessianMatrix, InferenceResult};
pub use loglik::{log_likelihood, standardize, support_contains, StandardizedValues};
pub use params::{GevParams, XI_ZERO_TOL};
pub use profile::{profile_loglik, ProfileCurve, ProfilePoint};
pub use sample::DataSample;
