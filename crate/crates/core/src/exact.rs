//! Error-free floating point transformations.
//!
//! Every comparison the selection engine makes between dual lines, and every
//! slope it materializes, goes through this module. Comparisons are exact on
//! the stored `f64` inputs, and slopes are the correctly rounded value of the
//! exact quotient, so rounding is monotone: the order of materialized slopes
//! never contradicts the exact order the engine counts in.
//!
//! Exactness assumes intermediate products stay in the normal `f64` range
//! (no overflow, no underflow of the rounding-error terms).

use std::cmp::Ordering;

const MAX_TERMS: usize = 24;

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Exact sign of `terms.iter().sum()`.
///
/// Builds a nonoverlapping expansion with repeated `two_sum`; the sign of the
/// sum is the sign of its largest nonzero component.
pub(crate) fn sum_sign(terms: &[f64]) -> Ordering {
    debug_assert!(terms.len() <= MAX_TERMS);
    let mut expansion = [0.0f64; MAX_TERMS];
    let mut len = 0;
    for &t in terms {
        let mut q = t;
        for comp in expansion.iter_mut().take(len) {
            let (s, e) = two_sum(q, *comp);
            *comp = e;
            q = s;
        }
        expansion[len] = q;
        len += 1;
    }
    expansion[..len]
        .iter()
        .rev()
        .find(|c| **c != 0.0)
        .map_or(Ordering::Equal, |c| {
            if *c > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
}

/// Exact comparison of `yi - xi * u` against `yj - xj * u`.
pub(crate) fn cmp_line_values(xi: f64, yi: f64, xj: f64, yj: f64, u: f64) -> Ordering {
    let (pi, ei) = two_prod(xi, u);
    let (pj, ej) = two_prod(xj, u);
    sum_sign(&[yi, -pi, -ei, -yj, pj, ej])
}

/// Line value `y - x * u` together with an absolute bound on its rounding
/// error, used as a fast filter before falling back to [`cmp_line_values`].
#[inline]
pub(crate) fn line_key(x: f64, y: f64, u: f64) -> (f64, f64) {
    let p = x * u;
    let v = y - p;
    // Two roundings, each at most 2^-53 relative; doubled for slack.
    let bound = (p.abs() + v.abs()) * f64::EPSILON;
    (v, bound)
}

/// Correctly rounded `|yj - yi| / |xj - xi|` for `xi != xj`.
pub(crate) fn abs_slope(xi: f64, yi: f64, xj: f64, yj: f64) -> f64 {
    debug_assert!(xi != xj);
    let (mut dx_hi, mut dx_lo) = two_sum(xj, -xi);
    let (mut dy_hi, mut dy_lo) = two_sum(yj, -yi);
    if dx_hi < 0.0 {
        dx_hi = -dx_hi;
        dx_lo = -dx_lo;
    }
    if dy_hi < 0.0 {
        dy_hi = -dy_hi;
        dy_lo = -dy_lo;
    }
    if dy_hi == 0.0 {
        return 0.0;
    }
    if dx_lo == 0.0 && dy_lo == 0.0 {
        // IEEE division is already correctly rounded.
        return dy_hi / dx_hi;
    }

    // sign(dy - q * dx)
    let cmp_quotient = |q: f64| {
        let (p1, e1) = two_prod(q, dx_hi);
        let (p2, e2) = two_prod(q, dx_lo);
        sum_sign(&[dy_hi, dy_lo, -p1, -e1, -p2, -e2])
    };

    let mut q = dy_hi / dx_hi;
    while q > 0.0 && cmp_quotient(q) == Ordering::Less {
        q = q.next_down();
    }
    while cmp_quotient(q.next_up()) != Ordering::Less {
        q = q.next_up();
    }
    if cmp_quotient(q) == Ordering::Equal {
        return q;
    }
    let qn = q.next_up();
    // sign(2 dy - (q + qn) dx), i.e. the quotient against the midpoint.
    let (p1, e1) = two_prod(q, dx_hi);
    let (p2, e2) = two_prod(q, dx_lo);
    let (p3, e3) = two_prod(qn, dx_hi);
    let (p4, e4) = two_prod(qn, dx_lo);
    match sum_sign(&[
        2.0 * dy_hi,
        2.0 * dy_lo,
        -p1,
        -e1,
        -p2,
        -e2,
        -p3,
        -e3,
        -p4,
        -e4,
    ]) {
        Ordering::Less => q,
        Ordering::Greater => qn,
        Ordering::Equal => {
            if q.to_bits() & 1 == 0 {
                q
            } else {
                qn
            }
        }
    }
}
