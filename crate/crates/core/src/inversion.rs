//! Dual-space slope counting.
//!
//! Each observation `(x_i, y_i)` is the line `v = y_i - x_i u`. Two lines
//! cross at `u = s_ij`, the slope of the pair, so the number of slopes in
//! `(a, b]` equals the number of pairs whose relative order differs between
//! the line orders at `u = a` and `u = b`: an inversion count, done here with
//! a merge sort. The same merge passes enumerate or sample the inverted pairs.
//!
//! Positions carry a side (`Below`/`Above`) so that tie-breaking at an
//! abscissa reproduces the order just before or just after it. This makes
//! every interval's openness explicit and lets a single value be isolated as
//! the band between `Below(v)` and `Above(v)`.
//!
//! Ties: pairs sharing `x` are parallel lines and are made to cross at `+inf`
//! (identical points included); pairs sharing only `y` cross at `0`.

use std::cmp::Ordering;

use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::exact;

/// A pairwise slope on the extended line `(-inf, +inf]`.
///
/// Slopes of pairs with equal `x` are `Infinite`; `-inf` never occurs.
#[derive(Debug, Clone, Copy)]
pub enum Slope {
    Finite(f64),
    Infinite,
}

impl Slope {
    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite());
        Slope::Finite(if v == 0.0 { 0.0 } else { v })
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Slope::Finite(v) => v,
            Slope::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Slope::Finite(_))
    }
}

impl PartialEq for Slope {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Slope {}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            (Slope::Finite(_), Slope::Infinite) => Ordering::Less,
            (Slope::Infinite, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
        }
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slope::Finite(v) => write!(f, "{v}"),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// A materialized slope together with the pair `(i, j)`, `i < j`, it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeValue {
    pub value: Slope,
    pub pair: (usize, usize),
}

/// The dual line `v = intercept - neg_slope * u` of one observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualLine {
    pub intercept: f64,
    pub neg_slope: f64,
    pub source_index: usize,
}

/// A point on the extended abscissa axis of dual space.
#[derive(Debug, Clone, Copy)]
pub enum Abscissa {
    NegInf,
    Finite(f64),
    PosInf,
}

impl From<Slope> for Abscissa {
    fn from(s: Slope) -> Self {
        match s {
            Slope::Finite(v) => Abscissa::Finite(v),
            Slope::Infinite => Abscissa::PosInf,
        }
    }
}

impl From<f64> for Abscissa {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Abscissa::PosInf
        } else if v == f64::NEG_INFINITY {
            Abscissa::NegInf
        } else {
            Abscissa::Finite(if v == 0.0 { 0.0 } else { v })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Below,
    Above,
}

/// An abscissa approached from one side. The line order at `Below(a)` is the
/// order just left of `a`; at `Above(a)` the pairs crossing at `a` have
/// already swapped.
#[derive(Debug, Clone, Copy)]
pub struct Position {
    pub at: Abscissa,
    pub side: Side,
}

impl Position {
    pub const NEG_INF: Position = Position {
        at: Abscissa::NegInf,
        side: Side::Above,
    };
    pub const POS_INF: Position = Position {
        at: Abscissa::PosInf,
        side: Side::Above,
    };

    pub fn below(at: impl Into<Abscissa>) -> Self {
        Position {
            at: at.into(),
            side: Side::Below,
        }
    }

    pub fn above(at: impl Into<Abscissa>) -> Self {
        Position {
            at: at.into(),
            side: Side::Above,
        }
    }

    /// The position bounding the reflected band: `(lo, hi]` on the positive
    /// side corresponds to `(mirror(hi), mirror(lo)]` on the negative side.
    pub fn mirror(self) -> Self {
        match self.at {
            Abscissa::Finite(v) => Position {
                at: Abscissa::from(-v),
                side: match self.side {
                    Side::Below => Side::Above,
                    Side::Above => Side::Below,
                },
            },
            Abscissa::PosInf | Abscissa::NegInf => Position::NEG_INF,
        }
    }

    fn rank(&self) -> (u8, f64, Side) {
        match self.at {
            // Nothing happens at -inf, so both sides coincide.
            Abscissa::NegInf => (0, 0.0, Side::Below),
            Abscissa::Finite(v) => (1, v, self.side),
            Abscissa::PosInf => (2, 0.0, self.side),
        }
    }
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Position {}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a0, a1, a2) = self.rank();
        let (b0, b1, b2) = other.rank();
        a0.cmp(&b0)
            .then(a1.partial_cmp(&b1).unwrap_or(Ordering::Equal))
            .then(a2.cmp(&b2))
    }
}

/// Slopes with crossing position in `(lo, hi]`, together with the mirrored
/// band `(mirror(hi), mirror(lo)]`: the absolute-value view used by selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub lo: Position,
    pub hi: Position,
}

impl Band {
    pub fn new(lo: Position, hi: Position) -> Self {
        Band { lo, hi }
    }

    fn negative(self) -> (Position, Position) {
        (self.hi.mirror(), self.lo.mirror())
    }
}

/// An interval on the extended abscissa with explicit openness.
#[derive(Debug, Clone, Copy)]
pub struct Interval {
    pub lo: Abscissa,
    pub hi: Abscissa,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    /// `(lo, hi]`
    pub fn left_open(lo: impl Into<Abscissa>, hi: impl Into<Abscissa>) -> Self {
        Interval {
            lo: lo.into(),
            hi: hi.into(),
            lo_open: true,
            hi_open: false,
        }
    }

    pub fn open(lo: impl Into<Abscissa>, hi: impl Into<Abscissa>) -> Self {
        Interval {
            lo: lo.into(),
            hi: hi.into(),
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn closed(lo: impl Into<Abscissa>, hi: impl Into<Abscissa>) -> Self {
        Interval {
            lo: lo.into(),
            hi: hi.into(),
            lo_open: false,
            hi_open: false,
        }
    }

    fn positions(&self) -> (Position, Position) {
        let lo = if self.lo_open {
            Position::above(self.lo)
        } else {
            Position::below(self.lo)
        };
        let hi = if self.hi_open {
            Position::below(self.hi)
        } else {
            Position::above(self.hi)
        };
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntervalCount {
    pub lo: Abscissa,
    pub hi: Abscissa,
    pub lo_open: bool,
    pub hi_open: bool,
    pub count: u64,
}

/// Borrowed view of a dataset as an arrangement of dual lines.
#[derive(Debug, Clone, Copy)]
pub struct Arrangement<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
}

impl<'a> Arrangement<'a> {
    pub fn new(d: &'a Dataset) -> Self {
        Arrangement {
            xs: d.xs(),
            ys: d.ys(),
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn line(&self, i: usize) -> DualLine {
        DualLine {
            intercept: self.ys[i],
            neg_slope: self.xs[i],
            source_index: i,
        }
    }

    pub fn lines(&self) -> impl Iterator<Item = DualLine> + '_ {
        (0..self.len()).map(|i| self.line(i))
    }

    /// Absolute slope of the pair, correctly rounded.
    pub fn abs_slope(&self, i: usize, j: usize) -> SlopeValue {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let value = if self.xs[i] == self.xs[j] {
            Slope::Infinite
        } else {
            Slope::finite(exact::abs_slope(self.xs[i], self.ys[i], self.xs[j], self.ys[j]))
        };
        SlopeValue { value, pair: (i, j) }
    }

    /// Line indices sorted by height at `pos`, ascending.
    pub fn order_at(&self, pos: Position) -> Vec<usize> {
        let (xs, ys) = (self.xs, self.ys);
        let mut idx: Vec<usize> = (0..self.len()).collect();
        match (pos.at, pos.side) {
            (Abscissa::NegInf, _) => idx.sort_unstable_by(|&i, &j| {
                xs[i].total_cmp(&xs[j])
                    .then(ys[i].total_cmp(&ys[j]))
                    .then(i.cmp(&j))
            }),
            (Abscissa::PosInf, Side::Below) => idx.sort_unstable_by(|&i, &j| {
                xs[j].total_cmp(&xs[i])
                    .then(ys[i].total_cmp(&ys[j]))
                    .then(i.cmp(&j))
            }),
            (Abscissa::PosInf, Side::Above) => idx.sort_unstable_by(|&i, &j| {
                xs[j].total_cmp(&xs[i])
                    .then(ys[j].total_cmp(&ys[i]))
                    .then(j.cmp(&i))
            }),
            (Abscissa::Finite(u), side) => return self.order_at_finite(u, side),
        }
        idx
    }

    fn order_at_finite(&self, u: f64, side: Side) -> Vec<usize> {
        let (xs, ys) = (self.xs, self.ys);
        let mut keyed: Vec<(f64, f64, usize)> = (0..self.len())
            .map(|i| {
                let (v, b) = exact::line_key(xs[i], ys[i], u);
                (v, b, i)
            })
            .collect();
        keyed.sort_unstable_by(|p, q| {
            let gap = p.0 - q.0;
            if gap.abs() > 2.0 * (p.1 + q.1) {
                return if gap < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
            let (i, j) = (p.2, q.2);
            exact::cmp_line_values(xs[i], ys[i], xs[j], ys[j], u)
                .then_with(|| match side {
                    // Just left of u the flatter dual line (smaller x) is lower.
                    Side::Below => xs[i].total_cmp(&xs[j]),
                    Side::Above => xs[j].total_cmp(&xs[i]),
                })
                .then(i.cmp(&j))
        });
        keyed.into_iter().map(|(_, _, i)| i).collect()
    }

    /// Number of pairs whose lines cross in `(from, to]`; zero if `to <= from`.
    pub fn count_between(&self, from: Position, to: Position) -> u64 {
        if to <= from {
            return 0;
        }
        crossings(&self.order_at(from), &self.order_at(to))
    }

    pub fn count(&self, iv: Interval) -> IntervalCount {
        let (lo, hi) = iv.positions();
        IntervalCount {
            lo: iv.lo,
            hi: iv.hi,
            lo_open: iv.lo_open,
            hi_open: iv.hi_open,
            count: self.count_between(lo, hi),
        }
    }

    /// Counts absolute slopes in `iv`, which must lie in `[0, +inf]`.
    ///
    /// Only intervals excluding zero are supported: zero slopes are counted
    /// separately by the selection (they would be double counted here).
    pub fn count_abs(&self, iv: Interval) -> IntervalCount {
        let (lo, hi) = iv.positions();
        debug_assert!(lo >= Position::above(0.0), "absolute interval must exclude 0");
        IntervalCount {
            lo: iv.lo,
            hi: iv.hi,
            lo_open: iv.lo_open,
            hi_open: iv.hi_open,
            count: self.count_band(Band::new(lo, hi)),
        }
    }

    pub fn count_band(&self, band: Band) -> u64 {
        let (nlo, nhi) = band.negative();
        self.count_between(band.lo, band.hi) + self.count_between(nlo, nhi)
    }

    /// All pairs in the band, as absolute slopes. Order unspecified.
    pub fn enumerate_band(&self, band: Band, cap: usize) -> Result<Vec<SlopeValue>> {
        let mut orders = OrderCache::new(*self);
        enumerate_band_with(&mut orders, band, cap)
    }

    /// `q` absolute slopes drawn uniformly with replacement from the band.
    pub fn sample_band<R: Rng + ?Sized>(
        &self,
        band: Band,
        q: usize,
        rng: &mut R,
    ) -> Result<Vec<SlopeValue>> {
        let mut orders = OrderCache::new(*self);
        sample_band_with(&mut orders, band, q, rng)
    }
}

/// Memoized line orders for the positions a selection run revisits.
pub(crate) struct OrderCache<'a> {
    arr: Arrangement<'a>,
    entries: Vec<(Position, Vec<usize>)>,
}

const ORDER_CACHE_SLOTS: usize = 8;

impl<'a> OrderCache<'a> {
    pub(crate) fn new(arr: Arrangement<'a>) -> Self {
        OrderCache {
            arr,
            entries: Vec::new(),
        }
    }

    pub(crate) fn arrangement(&self) -> Arrangement<'a> {
        self.arr
    }

    fn find(&self, pos: Position) -> Option<usize> {
        self.entries.iter().position(|(p, _)| *p == pos)
    }

    fn ensure(&mut self, pos: Position, protect: Position) {
        if self.find(pos).is_some() {
            return;
        }
        if self.entries.len() >= ORDER_CACHE_SLOTS {
            if let Some(k) = self.entries.iter().position(|(p, _)| *p != protect) {
                self.entries.remove(k);
            }
        }
        let order = self.arr.order_at(pos);
        self.entries.push((pos, order));
    }

    /// Keep only the orders at the given positions.
    pub(crate) fn retain(&mut self, keep: &[Position]) {
        self.entries.retain(|(p, _)| keep.contains(p));
    }

    fn with_pair<T>(&mut self, from: Position, to: Position, f: impl FnOnce(&[usize], &[usize]) -> T) -> T {
        self.ensure(from, to);
        self.ensure(to, from);
        let a = self.find(from).expect("order cached");
        let b = self.find(to).expect("order cached");
        f(&self.entries[a].1, &self.entries[b].1)
    }

    pub(crate) fn count_between(&mut self, from: Position, to: Position) -> u64 {
        if to <= from {
            return 0;
        }
        self.with_pair(from, to, crossings)
    }

    pub(crate) fn count_band(&mut self, band: Band) -> u64 {
        let (nlo, nhi) = band.negative();
        self.count_between(band.lo, band.hi) + self.count_between(nlo, nhi)
    }
}

/// Sequence of `to`-ranks listed in `from` order; its inversions are the
/// pairs ordered differently by the two permutations.
fn relative_ranks(from: &[usize], to: &[usize]) -> Vec<u32> {
    let mut rank = vec![0u32; to.len()];
    for (r, &i) in to.iter().enumerate() {
        rank[i] = r as u32;
    }
    from.iter().map(|&i| rank[i]).collect()
}

fn crossings(from: &[usize], to: &[usize]) -> u64 {
    let mut seq = relative_ranks(from, to);
    merge_sort_inversions(&mut seq, |_, _, _| {})
}

/// Bottom-up merge sort counting inversions. `on_cross(left, i, r)` fires
/// whenever the right-run element `r` is placed while `left[i..]` remains,
/// i.e. `r` forms an inversion with each of `left[i..]`.
pub(crate) fn merge_sort_inversions<F>(seq: &mut Vec<u32>, mut on_cross: F) -> u64
where
    F: FnMut(&[u32], usize, u32),
{
    let n = seq.len();
    let mut buf = vec![0u32; n];
    let mut total = 0u64;
    let mut width = 1;
    while width < n {
        let mut start = 0;
        while start < n {
            let mid = (start + width).min(n);
            let end = (start + 2 * width).min(n);
            let (left, right) = seq[start..end].split_at(mid - start);
            let out = &mut buf[start..end];
            let (mut i, mut j, mut k) = (0, 0, 0);
            while i < left.len() && j < right.len() {
                if left[i] <= right[j] {
                    out[k] = left[i];
                    i += 1;
                } else {
                    out[k] = right[j];
                    total += (left.len() - i) as u64;
                    on_cross(left, i, right[j]);
                    j += 1;
                }
                k += 1;
            }
            out[k..k + left.len() - i].copy_from_slice(&left[i..]);
            k += left.len() - i;
            out[k..].copy_from_slice(&right[j..]);
            start = end;
        }
        std::mem::swap(seq, &mut buf);
        width *= 2;
    }
    total
}

/// Number of index pairs ordered one way in `before` and the other in `after`.
pub fn count_inversions(before: &[usize], after: &[usize]) -> Result<u64> {
    check_permutation(before)?;
    check_permutation(after)?;
    if before.len() != after.len() {
        return Err(Error::NotAPermutation { len: after.len() });
    }
    Ok(crossings(before, after))
}

fn check_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::NotAPermutation { len: p.len() });
        }
    }
    Ok(())
}

fn crossing_pairs(from: &[usize], to: &[usize], mut emit: impl FnMut(usize, usize)) {
    let mut seq = relative_ranks(from, to);
    merge_sort_inversions(&mut seq, |left, i, r| {
        for &l in &left[i..] {
            emit(to[l as usize], to[r as usize]);
        }
    });
}

/// Emits the crossing pairs whose 0-based inversion ranks are listed in
/// `ranks` (ascending, repeats allowed), in merge-sort discovery order.
fn crossing_pairs_at_ranks(from: &[usize], to: &[usize], ranks: &[u64], mut emit: impl FnMut(usize, usize)) {
    if ranks.is_empty() {
        return;
    }
    let mut seq = relative_ranks(from, to);
    let mut next = 0;
    let mut seen = 0u64;
    merge_sort_inversions(&mut seq, |left, i, r| {
        let cnt = (left.len() - i) as u64;
        while next < ranks.len() && ranks[next] < seen + cnt {
            let l = left[i + (ranks[next] - seen) as usize];
            emit(to[l as usize], to[r as usize]);
            next += 1;
        }
        seen += cnt;
    });
}

pub(crate) fn enumerate_band_with(orders: &mut OrderCache<'_>, band: Band, cap: usize) -> Result<Vec<SlopeValue>> {
    let total = orders.count_band(band);
    if total > cap as u64 {
        return Err(Error::OutputBudgetExceeded { cap });
    }
    let arr = orders.arrangement();
    let mut out = Vec::with_capacity(total as usize);
    let (nlo, nhi) = band.negative();
    for (from, to) in [(band.lo, band.hi), (nlo, nhi)] {
        if to <= from {
            continue;
        }
        orders.with_pair(from, to, |a, b| crossing_pairs(a, b, |i, j| out.push(arr.abs_slope(i, j))));
    }
    Ok(out)
}

pub(crate) fn sample_band_with<R: Rng + ?Sized>(
    orders: &mut OrderCache<'_>,
    band: Band,
    q: usize,
    rng: &mut R,
) -> Result<Vec<SlopeValue>> {
    let (nlo, nhi) = band.negative();
    let pos_count = orders.count_between(band.lo, band.hi);
    let neg_count = orders.count_between(nlo, nhi);
    let total = pos_count + neg_count;
    if total == 0 {
        return Err(Error::EmptyInterval);
    }
    if q == 0 {
        return Ok(Vec::new());
    }
    let mut ranks: Vec<u64> = (0..q).map(|_| rng.random_range(0..total)).collect();
    ranks.sort_unstable();
    let split = ranks.partition_point(|&r| r < pos_count);
    let (pos_ranks, neg_ranks) = ranks.split_at(split);
    let neg_ranks: Vec<u64> = neg_ranks.iter().map(|r| r - pos_count).collect();

    let arr = orders.arrangement();
    let mut out = Vec::with_capacity(q);
    for ((from, to), rs) in [((band.lo, band.hi), pos_ranks), ((nlo, nhi), &neg_ranks[..])] {
        if rs.is_empty() {
            continue;
        }
        orders.with_pair(from, to, |a, b| {
            crossing_pairs_at_ranks(a, b, rs, |i, j| out.push(arr.abs_slope(i, j)))
        });
    }
    Ok(out)
}

fn abs_band(lb: f64, ub: Slope) -> Result<Band> {
    if !(lb >= 0.0 && lb.is_finite()) || Slope::finite(lb) >= ub {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= lb < ub, got lb={lb}, ub={ub}"
        )));
    }
    Ok(Band::new(Position::above(lb), Position::above(ub)))
}

/// Line order at abscissa `u`, with the tie-break of the position just
/// right of `u` (pairs crossing at `u` counted as already crossed).
pub fn order_at(lines: &Arrangement<'_>, u: impl Into<Abscissa>) -> Vec<usize> {
    lines.order_at(Position::above(u))
}

/// Number of signed slopes in `(a, b]`.
pub fn count_slopes_in(lines: &Arrangement<'_>, a: impl Into<Abscissa>, b: impl Into<Abscissa>) -> u64 {
    lines.count(Interval::left_open(a, b)).count
}

/// Number of absolute slopes in `(a, b]`, `0 <= a < b`.
pub fn count_abs_slopes_in(lines: &Arrangement<'_>, a: f64, b: Slope) -> Result<u64> {
    Ok(lines.count_band(abs_band(a, b)?))
}

/// Every pair whose absolute slope lies in `(lb, ub]`.
pub fn enumerate_abs_slopes(lines: &Arrangement<'_>, lb: f64, ub: Slope, cap: usize) -> Result<Vec<SlopeValue>> {
    lines.enumerate_band(abs_band(lb, ub)?, cap)
}

/// `q` absolute slopes drawn uniformly with replacement from `(lb, ub]`.
pub fn sample_abs_slopes<R: Rng + ?Sized>(
    lines: &Arrangement<'_>,
    lb: f64,
    ub: Slope,
    q: usize,
    rng: &mut R,
) -> Result<Vec<SlopeValue>> {
    lines.sample_band(abs_band(lb, ub)?, q, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig1() -> Dataset {
        Dataset::from_pairs(&[(0.5, 2.0), (1.0, 3.0), (2.0, 1.0)]).unwrap()
    }

    #[test]
    fn order_examples() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        assert_eq!(order_at(&arr, 0.0), vec![2, 0, 1]);
        assert_eq!(order_at(&arr, 3.0), vec![2, 1, 0]);
        let one = Dataset::from_pairs(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(Arrangement::new(&one).order_at(Position::above(1.0)), vec![0, 1]);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(count_inversions(&[0, 1, 2], &[0, 1, 2]), Ok(0));
        assert_eq!(count_inversions(&[0, 1, 2], &[2, 1, 0]), Ok(3));
        assert_eq!(count_inversions(&[0, 1, 2], &[1, 0, 2]), Ok(1));
        assert_eq!(count_inversions(&[0, 1, 1], &[0, 1, 2]), Err(Error::NotAPermutation { len: 3 }));
        assert!(count_inversions(&[0, 1], &[0, 1, 2]).is_err());
    }

    #[test]
    fn signed_counts() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        // signed slopes {2, -2/3, -2}
        assert_eq!(count_slopes_in(&arr, 1.0, 3.0), 1);
        assert_eq!(arr.count(Interval::open(f64::NEG_INFINITY, 0.0)).count, 2);
        assert_eq!(count_slopes_in(&arr, -10.0, -5.0), 0);
        assert_eq!(count_slopes_in(&arr, f64::NEG_INFINITY, f64::INFINITY), 3);
        // closed at -2 includes s13, open at -2 does not
        assert_eq!(arr.count(Interval::closed(-2.0, -1.0)).count, 1);
        assert_eq!(arr.count(Interval::open(-2.0, -1.0)).count, 0);
    }

    #[test]
    fn abs_counts() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        assert_eq!(count_abs_slopes_in(&arr, 1.0, Slope::finite(3.0)), Ok(2));
        assert_eq!(count_abs_slopes_in(&arr, 0.0, Slope::finite(0.7)), Ok(1));
        // The exact slope 2/3 lies just above its rounded f64 value.
        assert_eq!(count_abs_slopes_in(&arr, 0.0, Slope::finite(2.0 / 3.0)), Ok(0));
        assert_eq!(count_abs_slopes_in(&arr, 0.0, Slope::Infinite), Ok(3));
        assert!(count_abs_slopes_in(&arr, 2.0, Slope::finite(1.0)).is_err());
    }

    #[test]
    fn ties_land_at_zero_and_infinity() {
        // (1,0),(1,1),(2,0),(2,1): two x-ties, two y-ties, slopes 1 and 1.
        let d = Dataset::from_pairs(&[(1.0, 0.0), (1.0, 1.0), (2.0, 0.0), (2.0, 1.0)]).unwrap();
        let arr = Arrangement::new(&d);
        assert_eq!(arr.count(Interval::closed(0.0, 0.0)).count, 2);
        assert_eq!(arr.count(Interval::left_open(1e300, f64::INFINITY)).count, 2);
        assert_eq!(count_abs_slopes_in(&arr, 0.0, Slope::finite(1.0)), Ok(2));
        // nothing at -inf
        assert_eq!(arr.count(Interval::left_open(f64::NEG_INFINITY, -1e300)).count, 0);
        // identical points cross at +inf
        let dup = Dataset::from_pairs(&[(1.0, 1.0), (1.0, 1.0), (3.0, 2.0)]).unwrap();
        let arr = Arrangement::new(&dup);
        assert_eq!(arr.count_between(Position::below(f64::INFINITY), Position::POS_INF), 1);
    }

    #[test]
    fn enumerate_examples() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        let mut all: Vec<f64> = enumerate_abs_slopes(&arr, 0.0, Slope::Infinite, 10)
            .unwrap()
            .into_iter()
            .map(|s| s.value.to_f64())
            .collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, vec![2.0 / 3.0, 2.0, 2.0]);
        assert!(enumerate_abs_slopes(&arr, 2.0, Slope::Infinite, 10).unwrap().is_empty());
        assert_eq!(
            enumerate_abs_slopes(&arr, 0.0, Slope::Infinite, 2),
            Err(Error::OutputBudgetExceeded { cap: 2 })
        );

        let xs: Vec<f64> = (0..12).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let line = Dataset::new(xs, ys).unwrap();
        let arr = Arrangement::new(&line);
        let all = enumerate_abs_slopes(&arr, 1.5, Slope::finite(2.5), 1000).unwrap();
        assert_eq!(all.len(), 66);
        assert!(all.iter().all(|s| s.value == Slope::finite(2.0)));
    }

    #[test]
    fn enumerated_pairs_match_their_values() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        for s in enumerate_abs_slopes(&arr, 0.0, Slope::Infinite, 10).unwrap() {
            assert_eq!(s, arr.abs_slope(s.pair.0, s.pair.1));
        }
    }

    #[test]
    fn sampling_examples() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sample_abs_slopes(&arr, 0.0, Slope::Infinite, 3000, &mut rng).unwrap();
        let small = s.iter().filter(|v| v.value < Slope::finite(1.0)).count() as f64 / 3000.0;
        assert!((small - 1.0 / 3.0).abs() < 0.05, "{small}");

        assert!(sample_abs_slopes(&arr, 0.0, Slope::Infinite, 0, &mut rng).unwrap().is_empty());

        let s = sample_abs_slopes(&arr, 1.0, Slope::finite(1.5), 5, &mut rng);
        assert_eq!(s, Err(Error::EmptyInterval));

        let s = sample_abs_slopes(&arr, 0.0, Slope::finite(1.0), 5, &mut rng).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|v| v.value == Slope::finite(2.0 / 3.0) && v.pair == (0, 2)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = fig1();
        let arr = Arrangement::new(&d);
        let a = sample_abs_slopes(&arr, 0.0, Slope::Infinite, 50, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_abs_slopes(&arr, 0.0, Slope::Infinite, 50, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn position_order() {
        let ps = [
            Position::NEG_INF,
            Position::below(-1.0),
            Position::above(-1.0),
            Position::below(0.0),
            Position::above(0.0),
            Position::below(2.0),
            Position::above(2.0),
            Position::below(f64::INFINITY),
            Position::POS_INF,
        ];
        for w in ps.windows(2) {
            assert!(w[0] < w[1], "{:?} {:?}", w[0], w[1]);
        }
        assert_eq!(Position::above(-0.0), Position::above(0.0));
        assert_eq!(Position::above(2.0).mirror(), Position::below(-2.0));
        assert_eq!(Position::POS_INF.mirror(), Position::NEG_INF);
    }
}
