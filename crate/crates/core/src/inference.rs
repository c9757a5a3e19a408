//! Kendall's tau, its variance, and confidence intervals for the slope.
//!
//! The analytic interval inverts the step function `m -> tau(m)` of the
//! transformed data. `tau(m)` drops by `2 / K` each time `m` passes an
//! absolute slope, so inverting at `+-z * sigma` is a rank shift of
//! `K * z * sigma / 2` around the point estimate's rank, and both bounds are
//! order statistics of the absolute slopes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::{tie_census, transform, Dataset};
use crate::error::{Error, Result};
use crate::estimator::{epb_intercept, epb_slope, Warning};
use crate::influence::{dense_ranks, influence_scores};
use crate::inversion::merge_sort_inversions;
use crate::select::{select_kth_abs_slope, target_rank, SelectionParams};

fn tied_pairs<T: PartialEq>(sorted: impl Iterator<Item = T>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for v in sorted {
        if prev.as_ref() == Some(&v) {
            run += 1;
        } else {
            total += run * run.saturating_sub(1) / 2;
            run = 1;
        }
        prev = Some(v);
    }
    total + run * run.saturating_sub(1) / 2
}

/// Concordant minus discordant pairs, in `O(n log n)`.
pub fn kendall_numerator(a: &[f64], b: &[f64]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { x: a.len(), y: b.len() });
    }
    let n = a.len() as u64;
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_unstable_by(|&i, &j| a[i].total_cmp(&a[j]).then(b[i].total_cmp(&b[j])));
    let rank = dense_ranks(b);

    let tied_a = tied_pairs(idx.iter().map(|&i| a[i]));
    let tied_ab = tied_pairs(idx.iter().map(|&i| (a[i], b[i])));
    let mut by_b: Vec<f64> = b.to_vec();
    by_b.sort_unstable_by(f64::total_cmp);
    let tied_b = tied_pairs(by_b.into_iter());

    let mut seq: Vec<u32> = idx.iter().map(|&i| rank[i] as u32).collect();
    let discordant = merge_sort_inversions(&mut seq, |_, _, _| {});
    let untied = n * n.saturating_sub(1) / 2 + tied_ab - tied_a - tied_b;
    Ok(untied as i64 - 2 * discordant as i64)
}

/// Kendall's tau-a: the numerator over all `n (n - 1) / 2` pairs.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: a.len() });
    }
    let n = a.len() as f64;
    Ok(kendall_numerator(a, b)? as f64 / (n * (n - 1.0) / 2.0))
}

/// Kendall's tau between the transformed coordinates at slope `m`.
pub fn tau_at(d: &Dataset, m: f64) -> Result<f64> {
    let t = transform(d, m)?;
    kendall_tau(&t.x_dd, &t.y_dd)
}

/// Variance of tau under independence, `2 (2n + 5) / (9 n (n - 1))`.
pub fn null_variance(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let n = n as f64;
    Ok(2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceEstimate {
    /// Floored at zero.
    pub value: f64,
    /// The formula's value before flooring.
    pub raw: f64,
}

impl VarianceEstimate {
    pub fn warning(&self) -> Option<Warning> {
        (self.raw <= 0.0).then_some(Warning::DegenerateVariance)
    }
}

/// Daniels' variance estimate from the per-point influence scores at `beta`:
/// `(n (n - 1) sum tau_i^2 - 2) / ((n - 2) (n - 3))`.
pub fn daniels_variance(d: &Dataset, beta: f64) -> Result<VarianceEstimate> {
    if d.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: d.len() });
    }
    let n = d.len() as f64;
    let scores = influence_scores(d, beta)?;
    let sum_sq: f64 = scores.tau.iter().map(|t| t * t).sum();
    let raw = (n * (n - 1.0) * sum_sq - 2.0) / ((n - 2.0) * (n - 3.0));
    Ok(VarianceEstimate {
        value: raw.max(0.0),
        raw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    Null,
    Daniels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    AnalyticNull,
    AnalyticDaniels,
    Bootstrap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticDetails {
    pub sigma_tau: f64,
    pub k: u64,
    pub k_adjusted: u64,
    pub lo_rank: u64,
    pub hi_rank: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapDetails {
    pub replicates: Vec<f64>,
    pub redraws: usize,
    pub quantile_rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CiResult {
    pub method: CiMethod,
    pub level: f64,
    pub lo: f64,
    /// `+inf` if the upper rank lands on a vertical pair.
    pub hi: f64,
    pub warnings: Vec<Warning>,
    pub analytic: Option<AnalyticDetails>,
    pub bootstrap: Option<BootstrapDetails>,
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level must be in (0, 1), got {level}")));
    }
    Ok(())
}

/// Two-sided standard normal critical value for `level`.
pub fn normal_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Ranks of the interval bounds: `k -+ round(K z sigma / 2)`, clamped to `1..=K`.
pub fn ci_ranks(k: u64, k_adjusted: u64, z: f64, sigma: f64) -> Result<(u64, u64)> {
    let shift = (k_adjusted as f64 * z * sigma / 2.0).round() as u64;
    let lo = k.saturating_sub(shift).max(1);
    let hi = k.saturating_add(shift).min(k_adjusted);
    if lo == hi && shift > 0 {
        return Err(Error::RankCollapse { rank: lo, max: k_adjusted });
    }
    Ok((lo, hi))
}

/// Analytic interval by inverting Kendall's tau of the transformed data.
/// In Daniels mode the variance is evaluated once, at `beta`.
pub fn analytic_ci(
    d: &Dataset,
    beta: f64,
    level: f64,
    mode: VarianceMode,
    params: &SelectionParams,
) -> Result<CiResult> {
    check_level(level)?;
    let mut warnings = Vec::new();
    let variance = match mode {
        VarianceMode::Null => null_variance(d.len())?,
        VarianceMode::Daniels => {
            let v = daniels_variance(d, beta)?;
            warnings.extend(v.warning());
            v.value
        }
    };
    let sigma = variance.sqrt();
    let census = tie_census(d);
    let k = target_rank(census.k_adjusted)?;
    let (lo_rank, hi_rank) = ci_ranks(k, census.k_adjusted, normal_quantile(level), sigma)?;
    let lo = select_kth_abs_slope(d, lo_rank, params)?.value.to_f64();
    let hi = select_kth_abs_slope(d, hi_rank, params)?.value.to_f64();
    Ok(CiResult {
        method: match mode {
            VarianceMode::Null => CiMethod::AnalyticNull,
            VarianceMode::Daniels => CiMethod::AnalyticDaniels,
        },
        level,
        lo,
        hi,
        warnings,
        analytic: Some(AnalyticDetails {
            sigma_tau: sigma,
            k,
            k_adjusted: census.k_adjusted,
            lo_rank,
            hi_rank,
        }),
        bootstrap: None,
    })
}

/// Quantile with linear interpolation between order statistics
/// (`h = (len - 1) p`). `sorted` must be ascending and nonempty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let i = h.floor() as usize;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    let frac = h - i as f64;
    if frac == 0.0 {
        return sorted[i];
    }
    sorted[i] + frac * (sorted[i + 1] - sorted[i])
}

/// Bootstrap replicates of `statistic`, one per index, in index order.
///
/// Replicate `b` draws from its own ChaCha stream `b` under `seed`, so the
/// result does not depend on scheduling. Resamples on which the statistic
/// reports a degenerate slope are redrawn; the total number of redraws is
/// returned alongside.
pub fn bootstrap_replicates<F>(d: &Dataset, replicates: usize, seed: u64, statistic: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(&Dataset, &SelectionParams) -> Result<f64> + Sync,
{
    if replicates < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 bootstrap replicates, got {replicates}"
        )));
    }
    let limit = 10 * replicates;
    let n = d.len();
    let runs: Vec<Result<(f64, usize)>> = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let params = SelectionParams::with_seed(rng.random());
            let mut redraws = 0;
            let mut idx = vec![0usize; n];
            loop {
                for slot in idx.iter_mut() {
                    *slot = rng.random_range(0..n);
                }
                let sample = d.select(&idx)?;
                match statistic(&sample, &params) {
                    Ok(v) => return Ok((v, redraws)),
                    Err(Error::NoValidPairs | Error::DegenerateSlope) if redraws < limit => redraws += 1,
                    Err(Error::NoValidPairs | Error::DegenerateSlope) => {
                        return Err(Error::TooManyRedraws { limit })
                    }
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();

    let mut values = Vec::with_capacity(replicates);
    let mut redraws = 0;
    for r in runs {
        let (v, extra) = r?;
        values.push(v);
        redraws += extra;
    }
    if redraws > limit {
        return Err(Error::TooManyRedraws { limit });
    }
    Ok((values, redraws))
}

fn quantile_ci(level: f64, replicates: Vec<f64>, redraws: usize) -> CiResult {
    let mut sorted = replicates.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    let alpha = 1.0 - level;
    CiResult {
        method: CiMethod::Bootstrap,
        level,
        lo: quantile_sorted(&sorted, alpha / 2.0),
        hi: quantile_sorted(&sorted, 1.0 - alpha / 2.0),
        warnings: Vec::new(),
        analytic: None,
        bootstrap: Some(BootstrapDetails {
            replicates,
            redraws,
            quantile_rule: "linear interpolation between order statistics",
        }),
    }
}

/// Percentile bootstrap interval for the slope.
pub fn bootstrap_ci(d: &Dataset, replicates: usize, level: f64, seed: u64) -> Result<CiResult> {
    check_level(level)?;
    let (values, redraws) = bootstrap_replicates(d, replicates, seed, epb_slope)?;
    Ok(quantile_ci(level, values, redraws))
}

/// Percentile bootstrap interval for the intercept.
pub fn bootstrap_intercept_ci(d: &Dataset, replicates: usize, level: f64, seed: u64) -> Result<CiResult> {
    check_level(level)?;
    let (values, redraws) = bootstrap_replicates(d, replicates, seed, |s, p| {
        epb_slope(s, p).map(|b| epb_intercept(s, b))
    })?;
    Ok(quantile_ci(level, values, redraws))
}
