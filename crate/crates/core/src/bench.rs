//! Timing harness for the fast and naive slope estimators.

use std::time::Instant;

use serde::Serialize;

use crate::dataset::{tie_census, Dataset};
use crate::error::{Error, Result};
use crate::estimator::epb_slope;
use crate::inversion::{Arrangement, Slope};
use crate::select::{target_rank, SelectionParams};
use crate::sim::simulate;

/// Largest size the naive path accepts.
pub const NAIVE_LIMIT: usize = 10_000;

/// Median absolute slope by materializing and partially sorting all pairs.
pub fn naive_epb_slope(d: &Dataset) -> Result<f64> {
    if d.len() > NAIVE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "naive estimator limited to n <= {NAIVE_LIMIT}, got {}",
            d.len()
        )));
    }
    let arr = Arrangement::new(d);
    let (xs, ys) = (d.xs(), d.ys());
    let n = d.len();
    let mut slopes = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            if xs[i] == xs[j] && ys[i] == ys[j] {
                continue;
            }
            slopes.push(arr.abs_slope(i, j).value);
        }
    }
    let k = target_rank(tie_census(d).k_adjusted)? as usize;
    let (_, m, _) = slopes.select_nth_unstable(k - 1);
    match *m {
        Slope::Finite(v) => Ok(v),
        Slope::Infinite => Err(Error::DegenerateSlope),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    /// Naive timings are taken for sizes up to this bound (capped at [`NAIVE_LIMIT`]).
    pub naive_max: usize,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            sizes: vec![1_000, 10_000, 100_000, 1_000_000],
            replicates: 5,
            seed: 1,
            naive_max: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub mean_us: f64,
    pub min_us: f64,
    pub max_us: f64,
}

impl Timing {
    fn from_samples(us: &[f64]) -> Self {
        Timing {
            mean_us: us.iter().sum::<f64>() / us.len() as f64,
            min_us: us.iter().copied().fold(f64::INFINITY, f64::min),
            max_us: us.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub slope: f64,
    pub fast: Timing,
    pub naive: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Least-squares `c` in `time_us ~ c n ln n` over the larger half of the sizes.
    pub c_hat: f64,
}

fn time_us<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64() * 1e6))
}

/// Times `f` once to warm up, then `replicates` times. All runs must agree.
fn time_runs(replicates: usize, mut f: impl FnMut(usize) -> Result<f64>) -> Result<(f64, Timing)> {
    let first = f(0)?;
    let mut samples = Vec::with_capacity(replicates);
    for r in 0..replicates {
        let (v, us) = time_us(|| f(r + 1))?;
        if v.to_bits() != first.to_bits() {
            return Err(Error::Internal(format!("replicate {r} returned {v}, expected {first}")));
        }
        samples.push(us);
    }
    Ok((first, Timing::from_samples(&samples)))
}

pub fn run_scaling(cfg: &ScalingConfig) -> Result<ScalingTable> {
    if cfg.replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }
    if cfg.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("sizes must be ascending".into()));
    }
    let naive_max = cfg.naive_max.min(NAIVE_LIMIT);
    let mut rows = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let d = simulate(n, cfg.seed)?;
        let (slope, fast) = time_runs(cfg.replicates, |r| {
            epb_slope(&d, &SelectionParams::with_seed(cfg.seed.wrapping_add(r as u64)))
        })?;
        let naive = if n <= naive_max {
            let (v, t) = time_runs(cfg.replicates, |_| naive_epb_slope(&d))?;
            if v.to_bits() != slope.to_bits() {
                return Err(Error::Internal(format!("naive slope {v} differs from fast slope {slope}")));
            }
            Some(t)
        } else {
            None
        };
        rows.push(ScalingRow { n, slope, fast, naive });
    }

    let big = &rows[rows.len() / 2..];
    let (num, den) = big.iter().fold((0.0, 0.0), |(num, den), r| {
        let f = r.n as f64 * (r.n as f64).ln();
        (num + r.fast.mean_us * f, den + f * f)
    });
    let c_hat = if den > 0.0 { num / den } else { 0.0 };
    Ok(ScalingTable { rows, c_hat })
}

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,slope,mean_us,min_us,max_us,naive_mean_us,naive_min_us,naive_max_us\n");
        for r in &self.rows {
            let naive = match r.naive {
                Some(t) => format!("{:.1},{:.1},{:.1}", t.mean_us, t.min_us, t.max_us),
                None => ",,".to_string(),
            };
            out.push_str(&format!(
                "{},{:e},{:.1},{:.1},{:.1},{}\n",
                r.n, r.slope, r.fast.mean_us, r.fast.min_us, r.fast.max_us, naive
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let cfg = ScalingConfig {
            sizes: vec![10],
            replicates: 1,
            seed: 3,
            naive_max: 10,
        };
        let t = run_scaling(&cfg).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(t.rows[0].naive.is_some());
        assert_eq!(t.to_csv().lines().count(), 2);
    }

    #[test]
    fn naive_agrees_with_fast() {
        let d = simulate(300, 8).unwrap();
        assert_eq!(naive_epb_slope(&d), epb_slope(&d, &SelectionParams::default()));
        let big = simulate(NAIVE_LIMIT + 1, 8).unwrap();
        assert!(naive_epb_slope(&big).is_err());
    }

    #[test]
    fn unsorted_sizes_rejected() {
        let cfg = ScalingConfig {
            sizes: vec![20, 10],
            ..Default::default()
        };
        assert!(run_scaling(&cfg).is_err());
    }
}
