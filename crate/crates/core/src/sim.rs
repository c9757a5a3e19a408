//! Synthetic data from a linear model with normal design and noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::Dataset;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearModel {
    pub slope: f64,
    pub intercept: f64,
    pub x_sd: f64,
    pub noise_sd: f64,
}

impl Default for LinearModel {
    /// `Y = X + e`, `X ~ N(0, 1)`, `e ~ N(0, 0.1^2)`.
    fn default() -> Self {
        LinearModel {
            slope: 1.0,
            intercept: 0.0,
            x_sd: 1.0,
            noise_sd: 0.1,
        }
    }
}

impl LinearModel {
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x_dist = Normal::new(0.0, self.x_sd).expect("finite sd");
        let e_dist = Normal::new(0.0, self.noise_sd).expect("finite sd");
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            let x: f64 = x_dist.sample(&mut rng);
            let e: f64 = e_dist.sample(&mut rng);
            xs.push(x);
            ys.push(self.intercept + self.slope * x + e);
        }
        Dataset::new(xs, ys)
    }
}

/// `n` draws from the default model.
pub fn simulate(n: usize, seed: u64) -> Result<Dataset> {
    LinearModel::default().sample(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        assert_eq!(simulate(10, 4).unwrap(), simulate(10, 4).unwrap());
        assert_ne!(simulate(10, 4).unwrap(), simulate(10, 5).unwrap());
        assert!(simulate(1, 0).is_err());
    }

    #[test]
    fn moments() {
        let d = simulate(100_000, 1).unwrap();
        let n = d.len() as f64;
        let mean_x = d.xs().iter().sum::<f64>() / n;
        assert!(mean_x.abs() < 0.02);
        let resid: Vec<f64> = d.iter().map(|p| p.y - p.x).collect();
        let mean_r = resid.iter().sum::<f64>() / n;
        let sd = (resid.iter().map(|r| (r - mean_r).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((sd - 0.1).abs() < 0.002);
    }
}
