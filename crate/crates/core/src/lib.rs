//! # epb
//!
//! Equivariant Passing–Bablok regression: the slope is the median of the
//! absolute pairwise slopes, found in expected `O(n log n)` time by
//! randomized selection over the dual line arrangement instead of
//! enumerating all `n (n - 1) / 2` pairs.
//!
//! ```
//! use epb::{epb_fit, Dataset, SelectionParams};
//!
//! let d = Dataset::from_pairs(&[(0.5, 2.0), (1.0, 3.0), (2.0, 1.0)])?;
//! let fit = epb_fit(&d, &SelectionParams::default())?;
//! assert_eq!((fit.slope, fit.intercept), (2.0, 1.0));
//! # Ok::<(), epb::Error>(())
//! ```
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── quickstart.rs                 # fit a line, read slope and intercept
//! ├── ties_and_degeneracies.rs      # tie census, zero and vertical slopes, errors
//! ├── slope_selection_internals.rs  # counting, sampling and the contraction trace
//! ├── influence_diagnostics.rs      # per-point influence, leave-one-out, SVG plots
//! ├── confidence_intervals.rs       # analytic (null / Daniels) and bootstrap intervals
//! ├── grouped_report.rs             # per-group report from a CSV file
//! └── scaling_benchmark.rs          # fast vs naive timings
//! ```
//!
//! ```bash
//! cargo run --release --example quickstart
//! ```
//!
//! The `epb` binary exposes the same workflow as `fit`, `influence`,
//! `simulate` and `bench` subcommands.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod estimator;
mod exact;
pub mod inference;
pub mod influence;
pub mod inversion;
pub mod oracle;
pub mod select;
pub mod sim;

pub use dataset::{build_dataset, tie_census, transform, Dataset, Observation, TieCensus};
pub use error::{Error, Result};
pub use estimator::{epb_fit, epb_intercept, epb_slope, Fit, Warning};
pub use inference::{
    analytic_ci, bootstrap_ci, bootstrap_intercept_ci, daniels_variance, kendall_tau, null_variance, CiResult,
    VarianceMode,
};
pub use influence::{influence_scores, loo_quantile_shift, InfluenceScores};
pub use inversion::{Slope, SlopeValue};
pub use select::{select_kth_abs_slope, target_rank, SelectionParams};
