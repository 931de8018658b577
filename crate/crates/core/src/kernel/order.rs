//! The counter-clockwise ternary relation on Q/Z and the linear orders it induces.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::point::RatPoint;

/// `[a, b, c]`: travelling counter-clockwise from `a` one meets `b` strictly before `c`.
///
/// False whenever two of the points coincide.
pub fn between(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

/// Compares `a` and `b` in the cut order `<_z`, where `z` is the least element.
pub fn cut_compare(z: &RatPoint, a: &RatPoint, b: &RatPoint) -> Ordering {
    if a == b {
        Ordering::Equal
    } else if a == z {
        Ordering::Less
    } else if b == z || !between(z, a, b) {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Counter-clockwise arc length from `a` to `b`, in `[0, 1)`.
pub fn ccw_length(a: &RatPoint, b: &RatPoint) -> BigRational {
    let d = b.value() - a.value();
    if d.is_negative() {
        d + BigRational::one()
    } else {
        d
    }
}

/// Geodesic distance on the circle of circumference one.
pub fn circle_distance(a: &RatPoint, b: &RatPoint) -> BigRational {
    let d = (a.value() - b.value()).abs();
    let other = BigRational::one() - &d;
    d.min(other)
}
