//! Randomized selection of the k-th smallest absolute pairwise slope.
//!
//! The search keeps a band `(lo, hi]` of absolute slope values known to
//! contain the target, together with `k_star`, the target's rank inside the
//! band. Each round samples `n` slopes from the band, picks candidate cut
//! values around the expected rank, counts the slopes between the cuts and
//! keeps the piece holding the target. Once the band holds at most `c * n`
//! slopes they are enumerated and the answer is picked directly.
//!
//! Each candidate cut value `v` is isolated as its own piece
//! `(Below(v), Above(v)]`; when the target falls in such a piece the answer
//! is `v` itself, which keeps heavily tied slope sets from stalling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{tie_census, Dataset};
use crate::error::{Error, Result};
use crate::inversion::{
    enumerate_band_with, sample_band_with, Arrangement, Band, OrderCache, Position, Slope, SlopeValue,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionParams {
    /// Width of the sampled rank window, in units of `sqrt(n) / 2`.
    pub t: f64,
    /// The band is enumerated once it holds at most `c * n` slopes.
    pub c: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SelectionParams {
    fn default() -> Self {
        SelectionParams {
            t: 3.0,
            c: 20.0,
            max_iters: 100,
            seed: 0x5_eed0_fe9b,
        }
    }
}

impl SelectionParams {
    pub fn with_seed(seed: u64) -> Self {
        SelectionParams {
            seed,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !(self.c >= 1.0) || self.max_iters == 0 {
            return Err(Error::InvalidArgument(format!(
                "selection parameters need t > 0, c >= 1, max_iters >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// Bookkeeping at the start of one contraction round.
///
/// `c_l` and `c_h` count the band's slopes on the negative and positive side;
/// `c_m` is the number of absolute slopes at or below `lb`, which always
/// equals `k - k_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionState {
    pub lb: Position,
    pub ub: Position,
    pub c_l: u64,
    pub c_m: u64,
    pub c_h: u64,
    pub k: u64,
    pub k_star: u64,
    pub theta_size: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTrace {
    pub result: SlopeValue,
    pub states: Vec<SelectionState>,
    /// True if the answer came from final enumeration rather than a cut value.
    pub enumerated: bool,
}

/// Rank of the upper median among `k_adjusted` pairs.
pub fn target_rank(k_adjusted: u64) -> Result<u64> {
    match k_adjusted {
        0 => Err(Error::NoValidPairs),
        k if k % 2 == 0 => Ok(k / 2 + 1),
        k => Ok(k.div_ceil(2)),
    }
}

/// The k-th smallest absolute slope (1-based), with y-only ties at 0 and
/// pairs sharing x at `+inf`. `k` must not exceed the tie-adjusted pair count.
pub fn select_kth_abs_slope(d: &Dataset, k: u64, params: &SelectionParams) -> Result<SlopeValue> {
    select_traced(d, k, params).map(|t| t.result)
}

pub fn select_traced(d: &Dataset, k: u64, params: &SelectionParams) -> Result<SelectionTrace> {
    params.validate()?;
    let census = tie_census(d);
    if k == 0 || k > census.k_adjusted {
        return Err(Error::RankOutOfRange {
            k,
            max: census.k_adjusted,
        });
    }
    Selector::new(d, k, params).run()
}

struct Selector<'a> {
    arr: Arrangement<'a>,
    orders: OrderCache<'a>,
    params: &'a SelectionParams,
    k: u64,
    n: usize,
    states: Vec<SelectionState>,
}

/// Counts of one piece of the band, split by sign of the slopes.
#[derive(Debug, Clone, Copy, Default)]
struct SideCounts {
    pos: u64,
    neg: u64,
}

impl SideCounts {
    fn total(self) -> u64 {
        self.pos + self.neg
    }
}

impl<'a> Selector<'a> {
    fn new(d: &'a Dataset, k: u64, params: &'a SelectionParams) -> Self {
        let arr = Arrangement::new(d);
        Selector {
            arr,
            orders: OrderCache::new(arr),
            params,
            k,
            n: d.len(),
            states: Vec::new(),
        }
    }

    fn side_counts(&mut self, band: Band) -> SideCounts {
        SideCounts {
            pos: self.orders.count_between(band.lo, band.hi),
            neg: self.orders.count_between(band.hi.mirror(), band.lo.mirror()),
        }
    }

    fn run(mut self) -> Result<SelectionTrace> {
        let zero_below = Position::below(0.0);
        let zero_above = Position::above(0.0);
        let c_m = self.orders.count_between(zero_below, zero_above);
        if c_m >= self.k {
            return Ok(SelectionTrace {
                result: self.zero_slope(),
                states: self.states,
                enumerated: false,
            });
        }

        let mut band = Band::new(zero_above, Position::POS_INF);
        let mut counts = self.side_counts(band);
        let mut k_star = self.k - c_m;
        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        let limit = self.params.c * self.n as f64;

        for _ in 0..self.params.max_iters {
            let theta = counts.total();
            self.states.push(SelectionState {
                lb: band.lo,
                ub: band.hi,
                c_l: counts.neg,
                c_m: self.k - k_star,
                c_h: counts.pos,
                k: self.k,
                k_star,
                theta_size: theta,
            });
            if k_star == 0 || k_star > theta {
                return Err(Error::Internal(format!(
                    "target rank {k_star} outside band of {theta} slopes"
                )));
            }

            if theta as f64 <= limit {
                let result = self.pick_enumerated(band, theta, k_star)?;
                return Ok(SelectionTrace {
                    result,
                    states: self.states,
                    enumerated: true,
                });
            }

            let mut sample = sample_band_with(&mut self.orders, band, self.n, &mut rng)?;
            sample.sort_unstable_by(|a, b| a.value.cmp(&b.value).then(a.pair.cmp(&b.pair)));
            let (kl, kh) = candidate_ranks(k_star, theta, self.n, self.params.t);
            let lower = sample[kl - 1];
            let upper = sample[kh - 1];

            // Cut points, clamped into the band and kept monotone.
            let raw = [
                Position::below(lower.value),
                Position::above(lower.value),
                Position::below(upper.value),
                Position::above(upper.value),
            ];
            let mut cuts = [band.lo; 6];
            for (s, p) in raw.into_iter().enumerate() {
                cuts[s + 1] = p.min(band.hi).max(cuts[s]);
            }
            cuts[5] = band.hi;

            let mut pieces = [SideCounts::default(); 5];
            let mut seen = SideCounts::default();
            for s in 0..4 {
                pieces[s] = self.side_counts(Band::new(cuts[s], cuts[s + 1]));
                seen.pos += pieces[s].pos;
                seen.neg += pieces[s].neg;
            }
            pieces[4] = SideCounts {
                pos: counts.pos - seen.pos,
                neg: counts.neg - seen.neg,
            };

            let mut below = 0u64;
            let mut chosen = 4;
            for (s, piece) in pieces.iter().enumerate() {
                if below + piece.total() >= k_star {
                    chosen = s;
                    break;
                }
                below += piece.total();
            }

            let point = match chosen {
                1 => Some(lower),
                3 => Some(upper),
                _ => None,
            };
            if let Some(cut) = point {
                if cuts[chosen] == Position::below(cut.value) && cuts[chosen + 1] == Position::above(cut.value) {
                    // Every slope in this piece equals the cut value.
                    return Ok(SelectionTrace {
                        result: cut,
                        states: self.states,
                        enumerated: false,
                    });
                }
            }

            band = Band::new(cuts[chosen], cuts[chosen + 1]);
            counts = pieces[chosen];
            k_star -= below;
            let keep = [band.lo, band.hi, band.lo.mirror(), band.hi.mirror()];
            self.orders.retain(&keep);
        }
        Err(Error::IterationCapExceeded {
            iters: self.params.max_iters,
        })
    }

    fn pick_enumerated(&mut self, band: Band, theta: u64, k_star: u64) -> Result<SlopeValue> {
        let mut all = enumerate_band_with(&mut self.orders, band, theta as usize)?;
        if all.len() as u64 != theta {
            return Err(Error::Internal(format!(
                "enumerated {} slopes, counted {theta}",
                all.len()
            )));
        }
        let idx = (k_star - 1) as usize;
        let (_, nth, _) =
            all.select_nth_unstable_by(idx, |a, b| a.value.cmp(&b.value).then(a.pair.cmp(&b.pair)));
        Ok(*nth)
    }

    /// A pair with equal y and distinct x; one exists whenever zero slopes do.
    fn zero_slope(&self) -> SlopeValue {
        let n = self.n;
        let mut idx: Vec<usize> = (0..n).collect();
        let line = |i: usize| self.arr.line(i);
        idx.sort_unstable_by(|&a, &b| {
            line(a)
                .intercept
                .total_cmp(&line(b).intercept)
                .then(line(a).neg_slope.total_cmp(&line(b).neg_slope))
        });
        let pair = idx
            .windows(2)
            .find(|w| line(w[0]).intercept == line(w[1]).intercept && line(w[0]).neg_slope != line(w[1]).neg_slope)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .expect("zero slopes imply a y-only tie");
        SlopeValue {
            value: Slope::finite(0.0),
            pair,
        }
    }
}

/// 1-based sample ranks bracketing the target's expected position.
fn candidate_ranks(k_star: u64, theta: u64, n: usize, t: f64) -> (usize, usize) {
    let center = k_star as f64 / theta as f64 * n as f64;
    let half = t * (n as f64).sqrt() / 2.0;
    let kl = ((center - half).floor().max(1.0) as usize).min(n);
    let kh = ((center + half).ceil().min(n as f64) as usize).max(kl);
    (kl, kh)
}
