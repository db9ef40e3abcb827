//! Seeded Monte-Carlo experiments that probe the asymptotic behavior of the
//! GEV maximum-likelihood machinery at desk scale.
//!
//! The limits being probed are almost-sure statements, which no finite run
//! can verify; every experiment instead reports medians of the relevant
//! statistics over seeded replicates across a grid of sample sizes, and a
//! verdict asking whether the medians trend strictly in the predicted
//! direction. Reports serialize to `<name>_report.json` plus a
//! `<name>_raw.csv` payload from which every verdict can be re-derived.
//!
//! Replicate streams come from one splittable generator: replicate `r` of a
//! run seeded with `s` always sees the same draws, regardless of how many
//! worker threads execute it.

mod boundary;
mod config;
mod figure2;
mod pseudo_lln;
mod rate;
mod report;
mod seitz;
mod uniform;

pub use boundary::boundary_divergence_check;
pub use config::ExperimentConfig;
pub use figure2::{figure2_report, figure2_reproduction, Figure2Outcome};
pub use pseudo_lln::{pseudo_lln_experiment, pseudo_lln_suite, LlnCase};
pub use rate::rate_experiment;
pub use report::{quartiles, ExperimentReport, PerNStats, Quartiles, Verdict};
pub use seitz::{seitz_check, seitz_experiment, SeitzOutcome};
pub use uniform::{uniform_consistency_experiment, uniform_consistency_suite};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for one replicate: stream `r + 1` of the experiment seed.
pub fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64 + 1);
    rng
}

/// Search settings used for fits inside experiments: a lighter grid than the
/// interactive default, same tolerances.
pub fn lab_search_config() -> gevfit_core::SearchConfig {
    gevfit_core::SearchConfig {
        coarse_grid_size: 64,
        ..Default::default()
    }
}
