//! Brute-force reference implementations.
//!
//! Everything here enumerates all pairs in exact rational arithmetic and is
//! meant for checking the fast paths on small inputs.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::dataset::{sign, transform, Dataset};
use crate::error::{Error, Result};
use crate::influence::Concordance;
use crate::inversion::{Abscissa, Interval, Slope, SlopeValue};

/// Largest input the oracles accept.
pub const ORACLE_MAX_N: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSlope {
    pub value: SlopeValue,
    /// Exact signed slope; `None` when the pair shares x.
    pub exact: Option<BigRational>,
    /// Both coordinates coincide.
    pub duplicate: bool,
}

impl OracleSlope {
    fn abs_exact(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|s| s.abs())
    }
}

fn check_size(d: &Dataset) -> Result<()> {
    if d.len() > ORACLE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "oracle limited to {ORACLE_MAX_N} observations, got {}",
            d.len()
        )));
    }
    Ok(())
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

fn to_f64(r: &BigRational) -> f64 {
    let v = r.to_f64().expect("representable");
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Every pair with its exact slope, in `(i, j)` order.
pub fn oracle_slopes(d: &Dataset) -> Result<Vec<OracleSlope>> {
    check_size(d)?;
    let xs: Vec<BigRational> = d.xs().iter().map(|&v| rat(v)).collect();
    let ys: Vec<BigRational> = d.ys().iter().map(|&v| rat(v)).collect();
    let n = d.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let dx = &xs[j] - &xs[i];
            let dy = &ys[j] - &ys[i];
            let (exact, value) = if dx.is_zero() {
                (None, Slope::Infinite)
            } else {
                let s = dy.clone() / dx;
                let v = Slope::finite(to_f64(&s.abs()));
                (Some(s), v)
            };
            out.push(OracleSlope {
                value: SlopeValue { value, pair: (i, j) },
                exact,
                duplicate: same_point(&xs, &ys, i, j),
            });
        }
    }
    Ok(out)
}

fn same_point(xs: &[BigRational], ys: &[BigRational], i: usize, j: usize) -> bool {
    xs[i] == xs[j] && ys[i] == ys[j]
}

/// Absolute slopes of all non-duplicate pairs, ascending in exact order.
pub fn oracle_abs_slopes(d: &Dataset) -> Result<Vec<SlopeValue>> {
    let mut all: Vec<(Option<BigRational>, SlopeValue)> = oracle_slopes(d)?
        .into_iter()
        .filter(|s| !s.duplicate)
        .map(|s| (s.abs_exact(), s.value))
        .collect();
    all.sort_by(|a, b| match (&a.0, &b.0) {
        (Some(p), Some(q)) => p.cmp(q),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(all.into_iter().map(|(_, v)| v).collect())
}

/// The k-th smallest absolute slope among non-duplicate pairs.
pub fn oracle_kth(d: &Dataset, k: u64) -> Result<SlopeValue> {
    let all = oracle_abs_slopes(d)?;
    if k == 0 || k > all.len() as u64 {
        return Err(Error::RankOutOfRange {
            k,
            max: all.len() as u64,
        });
    }
    Ok(all[(k - 1) as usize])
}

/// Passing–Bablok slope by full enumeration.
pub fn oracle_epb_slope(d: &Dataset) -> Result<f64> {
    let all = oracle_abs_slopes(d)?;
    let k = crate::select::target_rank(all.len() as u64)?;
    match all[(k - 1) as usize].value {
        Slope::Finite(v) => Ok(v),
        Slope::Infinite => Err(Error::DegenerateSlope),
    }
}

enum Bound {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl From<Abscissa> for Bound {
    fn from(a: Abscissa) -> Self {
        match a {
            Abscissa::NegInf => Bound::NegInf,
            Abscissa::Finite(v) => Bound::Finite(rat(v)),
            Abscissa::PosInf => Bound::PosInf,
        }
    }
}

/// Where a value sits relative to a bound: -1 below, 0 equal, 1 above.
/// `None` stands for `+inf`.
fn side(v: Option<&BigRational>, b: &Bound) -> i8 {
    match (v, b) {
        (None, Bound::PosInf) => 0,
        (None, _) => 1,
        (Some(_), Bound::NegInf) => 1,
        (Some(_), Bound::PosInf) => -1,
        (Some(v), Bound::Finite(b)) => match v.cmp(b) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        },
    }
}

fn contains(iv: &Interval, lo: &Bound, hi: &Bound, v: Option<&BigRational>) -> bool {
    let l = side(v, lo);
    let h = side(v, hi);
    let above_lo = l > 0 || (l == 0 && !iv.lo_open);
    let below_hi = h < 0 || (h == 0 && !iv.hi_open);
    above_lo && below_hi
}

/// Signed slopes in `iv`. Pairs sharing x count as `+inf`, duplicates
/// included when `include_duplicates` is set; y-only ties are `0`.
pub fn oracle_count_in(d: &Dataset, iv: Interval, include_duplicates: bool) -> Result<u64> {
    let (lo, hi) = (Bound::from(iv.lo), Bound::from(iv.hi));
    Ok(oracle_slopes(d)?
        .iter()
        .filter(|s| include_duplicates || !s.duplicate)
        .filter(|s| contains(&iv, &lo, &hi, s.exact.as_ref()))
        .count() as u64)
}

/// Absolute slopes in `iv`, with the same tie conventions as [`oracle_count_in`].
pub fn oracle_count_abs_in(d: &Dataset, iv: Interval, include_duplicates: bool) -> Result<u64> {
    let (lo, hi) = (Bound::from(iv.lo), Bound::from(iv.hi));
    Ok(oracle_slopes(d)?
        .iter()
        .filter(|s| include_duplicates || !s.duplicate)
        .filter(|s| contains(&iv, &lo, &hi, s.abs_exact().as_ref()))
        .count() as u64)
}

/// Per-point concordance sums after transforming with slope `beta`.
pub fn oracle_influence(d: &Dataset, beta: f64) -> Result<Concordance> {
    check_size(d)?;
    let t = transform(d, beta)?;
    let n = d.len();
    let mut sums = vec![0i64; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = sign(t.x_dd[i], t.x_dd[j]) * sign(t.y_dd[i], t.y_dd[j]);
            sums[i] += s;
            sums[j] += s;
        }
    }
    Ok(Concordance::from_sums(sums))
}

/// Kendall numerator (concordant minus discordant pairs) by enumeration.
pub fn oracle_kendall_numerator(a: &[f64], b: &[f64]) -> i64 {
    let mut s = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s += sign(a[i], a[j]) * sign(b[i], b[j]);
        }
    }
    s
}
