use std::fmt;

use crate::dataset::{tie_census, Dataset, TieCensus};
use crate::error::{Error, Result};
use crate::inference::kendall_tau;
use crate::inversion::Slope;
use crate::select::{select_kth_abs_slope, target_rank, SelectionParams};

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// Kendall's tau of `(x, y)` is negative; the estimate is the magnitude
    /// of a decreasing relationship.
    NegativeAssociation,
    /// The variance estimate came out non-positive and was floored.
    DegenerateVariance,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warning::NegativeAssociation => "negative_association",
            Warning::DegenerateVariance => "degenerate_variance",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
    /// Rank of the selected absolute slope.
    pub k: u64,
    pub census: TieCensus,
    pub kendall_tau: f64,
    pub warnings: Vec<Warning>,
}

/// The ePB slope: upper median of the absolute pairwise slopes, with fully
/// duplicated observations discounted.
pub fn epb_slope(d: &Dataset, params: &SelectionParams) -> Result<f64> {
    let census = tie_census(d);
    slope_with_census(d, &census, params).map(|(s, _)| s)
}

fn slope_with_census(d: &Dataset, census: &TieCensus, params: &SelectionParams) -> Result<(f64, u64)> {
    let k = target_rank(census.k_adjusted)?;
    match select_kth_abs_slope(d, k, params)?.value {
        Slope::Finite(v) => Ok((v, k)),
        Slope::Infinite => Err(Error::DegenerateSlope),
    }
}

/// Lower median of the residuals `y - slope * x`.
pub fn epb_intercept(d: &Dataset, slope: f64) -> f64 {
    let mut r: Vec<f64> = d.iter().map(|p| (-slope).mul_add(p.x, p.y)).collect();
    let mid = (r.len() - 1) / 2;
    let (_, m, _) = r.select_nth_unstable_by(mid, f64::total_cmp);
    *m
}

pub fn epb_fit(d: &Dataset, params: &SelectionParams) -> Result<Fit> {
    let census = tie_census(d);
    let (slope, k) = slope_with_census(d, &census, params)?;
    let tau = kendall_tau(d.xs(), d.ys())?;
    let mut warnings = Vec::new();
    if tau < 0.0 {
        warnings.push(Warning::NegativeAssociation);
    }
    Ok(Fit {
        slope,
        intercept: epb_intercept(d, slope),
        n: d.len(),
        k,
        census,
        kendall_tau: tau,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn fig1_fit() {
        let d = Dataset::from_pairs(&[(0.5, 2.0), (1.0, 3.0), (2.0, 1.0)]).unwrap();
        let fit = epb_fit(&d, &SelectionParams::default()).unwrap();
        assert_eq!(fit.slope, 2.0);
        assert_eq!(fit.intercept, 1.0);
        assert_eq!(fit.k, 2);
        assert_eq!(fit.warnings, vec![Warning::NegativeAssociation]);
    }

    #[test]
    fn intercept_is_lower_median() {
        let d = Dataset::from_pairs(&[(0.0, 4.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        // Residuals at slope 1: 4, 0, 0, 0.
        assert_eq!(epb_intercept(&d, 1.0), 0.0);
        let d = Dataset::from_pairs(&[(0.0, 1.0), (0.0, 3.0)]).unwrap();
        assert_eq!(epb_intercept(&d, 5.0), 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        let p = SelectionParams::default();
        let same = Dataset::from_pairs(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(epb_slope(&same, &p), Err(Error::NoValidPairs));
        let vertical = Dataset::from_pairs(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).unwrap();
        assert_eq!(epb_slope(&vertical, &p), Err(Error::DegenerateSlope));
        let flat = Dataset::from_pairs(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).unwrap();
        assert_eq!(epb_slope(&flat, &p), Ok(0.0));
    }

    #[test]
    fn equivariance() {
        let d = Dataset::from_pairs(&[(0.0, 0.1), (1.0, 2.3), (2.0, 3.9), (3.0, 6.2), (5.0, 9.7)]).unwrap();
        let p = SelectionParams::default();
        let b = epb_slope(&d, &p).unwrap();
        let flipped = Dataset::new(d.xs().iter().map(|x| -2.0 * x).collect(), d.ys().to_vec()).unwrap();
        assert_eq!(epb_slope(&flipped, &p).unwrap(), b / 2.0);
        let scaled = Dataset::new(d.xs().to_vec(), d.ys().iter().map(|y| -4.0 * y).collect()).unwrap();
        assert_eq!(epb_slope(&scaled, &p).unwrap(), 4.0 * b);
    }

    proptest! {
        #[test]
        fn slope_matches_enumeration(
            pts in prop::collection::vec((-20i32..20, -20i32..20), 2..120),
            seed in any::<u64>(),
        ) {
            let pairs: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (f64::from(x) / 4.0, f64::from(y) / 3.0)).collect();
            let d = Dataset::from_pairs(&pairs).unwrap();
            let fast = epb_slope(&d, &SelectionParams::with_seed(seed));
            let slow = oracle::oracle_epb_slope(&d);
            prop_assert_eq!(fast, slow);
        }
    }
}
