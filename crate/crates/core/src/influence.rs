//! Per-observation influence on the slope estimate.
//!
//! After transforming with the fitted slope, each observation's Kendall
//! contribution `tau_i` measures how strongly it pulls the estimate: the
//! slope is the value at which the transformed coordinates are
//! uncorrelated, so points with large `|tau_i|` are the ones holding it in
//! place.

use crate::dataset::{tie_census, transform, Dataset};
use crate::error::{Error, Result};
use crate::oracle;
use crate::select::target_rank;

/// Per-point sums `sum_j sgn(x''_i - x''_j) sgn(y''_i - y''_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concordance {
    pub sums: Vec<i64>,
}

impl Concordance {
    pub fn from_sums(sums: Vec<i64>) -> Self {
        Concordance { sums }
    }

    /// `tau_i = sum_i / (n (n - 1) / 2)`.
    pub fn tau(&self) -> Vec<f64> {
        let n = self.sums.len() as f64;
        let pairs = n * (n - 1.0) / 2.0;
        self.sums.iter().map(|&s| s as f64 / pairs).collect()
    }

    /// `n * tau_i / 2`, whose mean is the overall Kendall tau.
    pub fn tau_scaled(&self) -> Vec<f64> {
        let n = self.sums.len() as f64;
        self.tau().into_iter().map(|t| n * t / 2.0).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceScores {
    pub beta: f64,
    pub concordance: Concordance,
    pub tau: Vec<f64>,
    pub tau_scaled: Vec<f64>,
}

struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { tree: vec![0; n + 1] }
    }

    fn add(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of inserted ranks `< r`.
    fn below(&self, r: usize) -> i64 {
        let mut i = r;
        let mut s = 0i64;
        while i > 0 {
            s += i64::from(self.tree[i]);
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Dense ranks of `v` (equal values share a rank).
pub(crate) fn dense_ranks(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_unstable_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0; v.len()];
    let mut r = 0;
    for w in 0..idx.len() {
        if w > 0 && v[idx[w]] != v[idx[w - 1]] {
            r += 1;
        }
        ranks[idx[w]] = r;
    }
    ranks
}

/// Concordance sums of two coordinate vectors in `O(n log n)`.
///
/// Sweeps the points in order of `a`, once upward and once downward, and
/// counts with a Fenwick tree over the ranks of `b` how many earlier points
/// lie above or below each point. Points tied in `a` are inserted as a group
/// so they never count against each other.
pub fn concordance(a: &[f64], b: &[f64]) -> Result<Concordance> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { x: a.len(), y: b.len() });
    }
    let n = a.len();
    let rank = dense_ranks(b);
    let levels = rank.iter().max().map_or(0, |r| r + 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| a[i].total_cmp(&a[j]));

    let mut sums = vec![0i64; n];
    let groups: Vec<&[usize]> = order.chunk_by(|&i, &j| a[i] == a[j]).collect();
    for upward in [true, false] {
        let mut tree = Fenwick::new(levels);
        let mut inserted = 0i64;
        let iter: Box<dyn Iterator<Item = &&[usize]>> = if upward {
            Box::new(groups.iter())
        } else {
            Box::new(groups.iter().rev())
        };
        for group in iter {
            for &i in group.iter() {
                let lower = tree.below(rank[i]);
                let higher = inserted - tree.below(rank[i] + 1);
                // Earlier points have smaller a on the way up, larger on the way down.
                sums[i] += if upward { lower - higher } else { higher - lower };
            }
            for &i in group.iter() {
                tree.add(rank[i]);
            }
            inserted += group.len() as i64;
        }
    }
    Ok(Concordance { sums })
}

/// Influence of each observation at slope `beta`.
pub fn influence_scores(d: &Dataset, beta: f64) -> Result<InfluenceScores> {
    let t = transform(d, beta)?;
    let concordance = concordance(&t.x_dd, &t.y_dd)?;
    Ok(InfluenceScores {
        beta,
        tau: concordance.tau(),
        tau_scaled: concordance.tau_scaled(),
        concordance,
    })
}

/// Empirical quantile level of the leave-one-out slope among the full
/// sample's absolute slopes: the fraction of non-duplicate pairs whose
/// absolute slope is at most the estimate computed without point `i`.
///
/// Values near 0.5 mean removing the point barely moves the estimate.
/// Quadratic in `n`; intended for small samples and spot checks.
pub fn loo_quantile_shift(d: &Dataset, i: usize) -> Result<f64> {
    if i >= d.len() {
        return Err(Error::IndexOutOfRange { index: i, len: d.len() });
    }
    let reduced = d.without(i)?;
    let census = tie_census(&reduced);
    let k = target_rank(census.k_adjusted)?;
    let beta = oracle::oracle_kth(&reduced, k)?.value;
    let all = oracle::oracle_abs_slopes(d)?;
    let at_most = all.iter().filter(|s| s.value <= beta).count();
    Ok(at_most as f64 / all.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> Dataset {
        Dataset::from_pairs(&[(0.5, 2.0), (1.0, 3.0), (2.0, 1.0)]).unwrap()
    }

    #[test]
    fn fig1_scores() {
        let s = influence_scores(&fig1(), 2.0).unwrap();
        assert_eq!(s.concordance.sums, vec![-1, 0, -1]);
        assert_eq!(s.tau_scaled, vec![-0.5, 0.0, -0.5]);
        assert_eq!(s.tau, vec![-1.0 / 3.0, 0.0, -1.0 / 3.0]);
    }

    #[test]
    fn scaled_scores_average_to_kendall_tau() {
        let d = Dataset::from_pairs(&[(0.0, 0.3), (1.0, 0.9), (2.0, 2.5), (3.0, 2.7), (4.0, 4.4)]).unwrap();
        let s = influence_scores(&d, 0.0).unwrap();
        let mean: f64 = s.tau_scaled.iter().sum::<f64>() / 5.0;
        let pairs = 10.0;
        let numer = crate::oracle::oracle_kendall_numerator(d.xs(), d.ys()) as f64;
        assert!((mean - numer / pairs).abs() < 1e-12);
    }

    #[test]
    fn ties_contribute_nothing() {
        let c = concordance(&[1.0, 1.0, 1.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(c.sums, vec![0, 0, 0]);
        let c = concordance(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(c.sums, vec![0, 0, 0]);
        let c = concordance(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 0.0]).unwrap();
        assert_eq!(c.sums, vec![1, 0, 0, -3]);
    }

    #[test]
    fn loo_quantiles() {
        let d = Dataset::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 30.0)]).unwrap();
        let q = loo_quantile_shift(&d, 3).unwrap();
        assert!(q > 0.0 && q <= 1.0);
        assert!(loo_quantile_shift(&d, 9).is_err());
        let two = Dataset::from_pairs(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(loo_quantile_shift(&two, 0).is_err());
    }

    proptest! {
        #[test]
        fn matches_pairwise_sums(pts in prop::collection::vec((0i8..6, 0i8..6), 2..40), m in 0u8..8) {
            let pairs: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (f64::from(x), f64::from(y))).collect();
            let d = Dataset::from_pairs(&pairs).unwrap();
            let beta = f64::from(m) / 2.0;
            let fast = influence_scores(&d, beta).unwrap();
            let slow = crate::oracle::oracle_influence(&d, beta).unwrap();
            prop_assert_eq!(fast.concordance, slow);
        }
    }
}
