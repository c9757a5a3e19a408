//! Validated paired measurements, tie bookkeeping and the rotated/scaled
//! coordinates shared by the influence and inference code.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// One paired measurement: `x` from the reference method, `y` from the
/// method under comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub x: f64,
    pub y: f64,
}

/// An immutable sample of at least two finite observations, kept in input
/// order. Indices into a `Dataset` are the indices reported in influence
/// tables and plots.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                x: xs.len(),
                y: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: xs.len(),
            });
        }
        if let Some(index) = xs
            .iter()
            .zip(&ys)
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFiniteValue { index });
        }
        // -0.0 and 0.0 are the same measurement; normalizing keeps bitwise
        // comparisons in tie detection consistent with numeric equality.
        let norm = |v: f64| if v == 0.0 { 0.0 } else { v };
        Ok(Dataset {
            xs: xs.into_iter().map(norm).collect(),
            ys: ys.into_iter().map(norm).collect(),
        })
    }

    pub fn from_pairs(points: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Dataset::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a `Dataset` holds at least two points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn get(&self, i: usize) -> Observation {
        Observation {
            x: self.xs[i],
            y: self.ys[i],
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Observation> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, &y)| Observation { x, y })
    }

    /// Number of unordered pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> u64 {
        let n = self.len() as u64;
        n * (n - 1) / 2
    }

    /// Subset by index, in the order given. Indices may repeat (bootstrap).
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let xs = indices.iter().map(|&i| self.xs[i]).collect();
        let ys = indices.iter().map(|&i| self.ys[i]).collect();
        Dataset::new(xs, ys)
    }

    /// The dataset with observation `i` removed.
    pub fn without(&self, i: usize) -> Result<Self> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.select(&keep)
    }
}

pub fn build_dataset(xs: &[f64], ys: &[f64]) -> Result<Dataset> {
    Dataset::new(xs.to_vec(), ys.to_vec())
}

/// Pair counts by tie type.
///
/// `k_adjusted` is the number of pairs left once fully duplicated
/// observations are discounted; it is the pair count the median rank is
/// computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TieCensus {
    pub n_xy_pairs: u64,
    pub n_x_only_pairs: u64,
    pub n_y_only_pairs: u64,
    pub k_adjusted: u64,
}

fn pairs_in_runs<T, F>(sorted: &[T], same: F) -> u64
where
    F: Fn(&T, &T) -> bool,
{
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if same(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

pub fn tie_census(d: &Dataset) -> TieCensus {
    let mut pts: Vec<(f64, f64)> = d.xs().iter().copied().zip(d.ys().iter().copied()).collect();

    pts.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let same_x = pairs_in_runs(&pts, |a, b| a.0 == b.0);
    let n_xy_pairs = pairs_in_runs(&pts, |a, b| a == b);

    pts.sort_unstable_by(|a, b| a.1.total_cmp(&b.1));
    let same_y = pairs_in_runs(&pts, |a, b| a.1 == b.1);

    TieCensus {
        n_xy_pairs,
        n_x_only_pairs: same_x - n_xy_pairs,
        n_y_only_pairs: same_y - n_xy_pairs,
        k_adjusted: d.pair_count() - n_xy_pairs,
    }
}

/// Coordinates `x'' = y + m x`, `y'' = y - m x`.
///
/// Pairwise sign products on these coordinates classify each pair by
/// whether its absolute slope lies above or below `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedPair {
    pub x_dd: Vec<f64>,
    pub y_dd: Vec<f64>,
    pub m: f64,
}

pub fn transform(d: &Dataset, m: f64) -> Result<TransformedPair> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "transform slope must be finite and nonnegative, got {m}"
        )));
    }
    let mut x_dd = Vec::with_capacity(d.len());
    let mut y_dd = Vec::with_capacity(d.len());
    for (i, p) in d.iter().enumerate() {
        // Fused multiply-add rounds once, so the order of the transformed
        // values never contradicts the exact order.
        let a = m.mul_add(p.x, p.y);
        let b = (-m).mul_add(p.x, p.y);
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFiniteValue { index: i });
        }
        x_dd.push(a);
        y_dd.push(b);
    }
    Ok(TransformedPair { x_dd, y_dd, m })
}

pub(crate) fn sign(a: f64, b: f64) -> i64 {
    match a.partial_cmp(&b) {
        Some(Ordering::Greater) => 1,
        Some(Ordering::Less) => -1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> Dataset {
        build_dataset(&[0.5, 1.0, 2.0], &[2.0, 3.0, 1.0]).unwrap()
    }

    #[test]
    fn build_accepts_and_rejects() {
        assert_eq!(fig1().len(), 3);
        assert_eq!(build_dataset(&[0.0, 1.0], &[0.0, 1.0]).unwrap().len(), 2);
        assert_eq!(
            build_dataset(&[1.0], &[1.0]),
            Err(Error::TooFewPoints { needed: 2, got: 1 })
        );
        assert_eq!(
            build_dataset(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { x: 2, y: 1 })
        );
        assert_eq!(
            build_dataset(&[1.0, f64::NAN], &[1.0, 2.0]),
            Err(Error::NonFiniteValue { index: 1 })
        );
        assert_eq!(
            build_dataset(&[1.0, 2.0], &[1.0, f64::INFINITY]),
            Err(Error::NonFiniteValue { index: 1 })
        );
    }

    #[test]
    fn input_order_is_preserved() {
        let d = fig1();
        assert_eq!(d.get(2), Observation { x: 2.0, y: 1.0 });
    }

    #[test]
    fn census_with_one_duplicate() {
        // A, A, B, C
        let d = Dataset::from_pairs(&[(1.0, 5.0), (1.0, 5.0), (2.0, 7.0), (3.0, 4.0)]).unwrap();
        let c = tie_census(&d);
        assert_eq!(c.n_xy_pairs, 1);
        assert_eq!(c.n_x_only_pairs, 0);
        assert_eq!(c.n_y_only_pairs, 0);
        assert_eq!(c.k_adjusted, 5);
    }

    #[test]
    fn census_distinct_and_y_ties() {
        assert_eq!(
            tie_census(&fig1()),
            TieCensus {
                n_xy_pairs: 0,
                n_x_only_pairs: 0,
                n_y_only_pairs: 0,
                k_adjusted: 3
            }
        );
        let d = Dataset::from_pairs(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        let c = tie_census(&d);
        assert_eq!(c.n_y_only_pairs, 3);
        assert_eq!(c.n_xy_pairs, 0);
        assert_eq!(c.k_adjusted, 3);
    }

    #[test]
    fn census_mixed_groups() {
        // x=1 group of 3 with two identical points, y=0 shared across x.
        let d = Dataset::from_pairs(&[(1.0, 0.0), (1.0, 0.0), (1.0, 2.0), (3.0, 0.0)]).unwrap();
        let c = tie_census(&d);
        assert_eq!(c.n_xy_pairs, 1);
        assert_eq!(c.n_x_only_pairs, 2);
        assert_eq!(c.n_y_only_pairs, 2);
        assert_eq!(c.k_adjusted, 5);
    }

    #[test]
    fn transform_examples() {
        let t = transform(&fig1(), 2.0).unwrap();
        assert_eq!(t.x_dd, vec![3.0, 5.0, 5.0]);
        assert_eq!(t.y_dd, vec![1.0, 1.0, -3.0]);

        let t0 = transform(&fig1(), 0.0).unwrap();
        assert_eq!(t0.x_dd, fig1().ys());
        assert_eq!(t0.y_dd, fig1().ys());

        let d = Dataset::from_pairs(&[(1.0, 1.0); 4]).unwrap();
        let t = transform(&d, 3.7).unwrap();
        assert!(t.x_dd.iter().all(|v| *v == t.x_dd[0]));
        assert!(t.y_dd.iter().all(|v| *v == t.y_dd[0]));

        let big = Dataset::from_pairs(&[(1e308, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(transform(&big, 10.0), Err(Error::NonFiniteValue { index: 0 }));
        assert!(transform(&fig1(), -1.0).is_err());
    }

    fn tied_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0i32..6, 0i32..6), 2..40)
            .prop_map(|v| v.into_iter().map(|(a, b)| (a as f64, b as f64 * 0.5)).collect())
    }

    proptest! {
        #[test]
        fn census_is_permutation_invariant(pts in tied_points(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let d = Dataset::from_pairs(&pts).unwrap();
            let mut shuffled = pts.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let e = Dataset::from_pairs(&shuffled).unwrap();
            prop_assert_eq!(tie_census(&d), tie_census(&e));
        }

        #[test]
        fn census_matches_pair_enumeration(pts in tied_points()) {
            let d = Dataset::from_pairs(&pts).unwrap();
            let (mut xy, mut xo, mut yo) = (0u64, 0u64, 0u64);
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let (a, b) = (pts[i], pts[j]);
                    match (a.0 == b.0, a.1 == b.1) {
                        (true, true) => xy += 1,
                        (true, false) => xo += 1,
                        (false, true) => yo += 1,
                        _ => {}
                    }
                }
            }
            let c = tie_census(&d);
            prop_assert_eq!((c.n_xy_pairs, c.n_x_only_pairs, c.n_y_only_pairs), (xy, xo, yo));
            prop_assert!(xy + xo + yo <= d.pair_count());
            prop_assert_eq!(c.k_adjusted, d.pair_count() - xy);
        }

        #[test]
        fn sign_product_identity(pts in tied_points(), m in (0u32..16).prop_map(|k| k as f64 / 4.0)) {
            let d = Dataset::from_pairs(&pts).unwrap();
            let t = transform(&d, m).unwrap();
            for i in 0..d.len() {
                for j in 0..d.len() {
                    let dx = d.xs()[j] - d.xs()[i];
                    let dy = d.ys()[j] - d.ys()[i];
                    let lhs = sign(t.x_dd[i], t.x_dd[j]) * sign(t.y_dd[i], t.y_dd[j]);
                    let rhs = sign(dy + m * dx, 0.0) * sign(dy - m * dx, 0.0);
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
