use std::fmt;

use serde::{Deserialize, Serialize};

use super::order::between;
use super::point::RatPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalKind {
    Open,
    Closed,
    LeftClosed,
    RightClosed,
}

/// A counter-clockwise arc from `left` to `right`.
///
/// Membership is decided by the ternary relation only, so arcs that wrap
/// past `0` need no special casing. `(a, a)` is empty and `[a, a] = {a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub left: RatPoint,
    pub right: RatPoint,
    pub kind: IntervalKind,
}

impl Interval {
    pub fn open(left: RatPoint, right: RatPoint) -> Self {
        Interval { left, right, kind: IntervalKind::Open }
    }

    pub fn closed(left: RatPoint, right: RatPoint) -> Self {
        Interval { left, right, kind: IntervalKind::Closed }
    }

    pub fn contains(&self, x: &RatPoint) -> bool {
        if between(&self.left, x, &self.right) {
            return true;
        }
        let at_left = x == &self.left;
        let at_right = x == &self.right;
        match self.kind {
            IntervalKind::Open => false,
            IntervalKind::Closed => at_left || at_right,
            IntervalKind::LeftClosed => at_left,
            IntervalKind::RightClosed => at_right,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.kind {
            IntervalKind::Open => ('(', ')'),
            IntervalKind::Closed => ('[', ']'),
            IntervalKind::LeftClosed => ('[', ')'),
            IntervalKind::RightClosed => ('(', ']'),
        };
        write!(f, "{l}{},{}{r}", self.left, self.right)
    }
}
