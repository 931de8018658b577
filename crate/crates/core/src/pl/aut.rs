use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{is_circularly_ordered, RatPoint};

/// A piecewise-linear, circular-order preserving bijection of Q/Z.
///
/// Stored as breakpoint pairs `x_i -> y_i` sorted by `x_i`; between consecutive
/// breakpoints the map is affine in the degree-one lift. Equality is
/// structural on the pair list; use [`PLAut::canonical`] before comparing
/// maps built by different routes.
#[derive(Clone)]
pub struct PLAut {
    pairs: Vec<(RatPoint, RatPoint)>,
    /// Lift knots `(X_i, Y_i)` for `i = 0..=n`, with `X_0 = x_1`, `X_n = x_1 + 1`, `Y_n = Y_0 + 1`.
    knots: Vec<(BigRational, BigRational)>,
}

impl PartialEq for PLAut {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for PLAut {}

impl fmt::Debug for PLAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
        write!(f, "PLAut{{{}}}", parts.join(", "))
    }
}

fn build_knots(pairs: &[(RatPoint, RatPoint)]) -> Vec<(BigRational, BigRational)> {
    let one = BigRational::one();
    let mut knots = Vec::with_capacity(pairs.len() + 1);
    let base_x = pairs[0].0.value().clone();
    let base_y = pairs[0].1.value().clone();
    knots.push((base_x.clone(), base_y.clone()));
    for (x, y) in &pairs[1..] {
        let prev = &knots.last().unwrap().1;
        let mut lifted = y.value() + prev.floor();
        if &lifted <= prev {
            lifted += &one;
        }
        knots.push((x.value().clone(), lifted));
    }
    knots.push((base_x + &one, base_y + one));
    knots
}

impl PLAut {
    pub fn identity() -> Self {
        Self::from_sorted_unchecked(vec![(RatPoint::zero(), RatPoint::zero())])
    }

    /// Rotation `x -> x + t`.
    pub fn rotation(t: &BigRational) -> Self {
        Self::from_sorted_unchecked(vec![(RatPoint::zero(), RatPoint::from_ratio(t))])
    }

    fn from_sorted_unchecked(pairs: Vec<(RatPoint, RatPoint)>) -> Self {
        let knots = build_knots(&pairs);
        PLAut { pairs, knots }
    }

    /// Builds the map interpolating the given pairs affinely. The pairs may be
    /// in any order; they must have distinct sources, and the targets must
    /// be circularly ordered like the sources.
    pub fn from_pairs(mut pairs: Vec<(RatPoint, RatPoint)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidInput("at least one breakpoint pair is required".into()));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput(format!("duplicate source point {}", w[0].0)));
        }
        let images: Vec<RatPoint> = pairs.iter().map(|(_, y)| y.clone()).collect();
        if !is_circularly_ordered(&images) {
            return Err(Error::NotCircularIsomorphism(format_pairs(&pairs)));
        }
        Ok(Self::from_sorted_unchecked(pairs))
    }

    pub fn pairs(&self) -> &[(RatPoint, RatPoint)] {
        &self.pairs
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &RatPoint> {
        self.pairs.iter().map(|(x, _)| x)
    }

    /// Affine pieces of the lift over one period, as `((X0, Y0), (X1, Y1))`.
    pub fn pieces(&self) -> impl Iterator<Item = (&(BigRational, BigRational), &(BigRational, BigRational))> {
        self.knots.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// The degree-one lift evaluated at an arbitrary rational.
    pub fn apply_lift(&self, t: &BigRational) -> BigRational {
        let base = &self.knots[0].0;
        let shift = (t - base).floor();
        let s = t - &shift;
        // last knot with X <= s among the first n knots
        let n = self.pairs.len();
        let idx = match self.knots[..n].binary_search_by(|k| k.0.cmp(&s)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let (x0, y0) = &self.knots[idx];
        let (x1, y1) = &self.knots[idx + 1];
        let y = y0 + (&s - x0) * (y1 - y0) / (x1 - x0);
        y + shift
    }

    pub fn apply(&self, x: &RatPoint) -> RatPoint {
        RatPoint::from_ratio(&self.apply_lift(x.value()))
    }

    pub fn inverse(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        Self::from_sorted_unchecked(pairs)
    }

    /// `self ∘ other`: first `other`, then `self`. The result is canonical.
    pub fn compose(&self, other: &PLAut) -> PLAut {
        let other_inv = other.inverse();
        let mut xs: Vec<RatPoint> = other.breakpoints().cloned().collect();
        xs.extend(self.breakpoints().map(|u| other_inv.apply(u)));
        xs.sort();
        xs.dedup();
        let pairs = xs
            .into_iter()
            .map(|x| {
                let y = self.apply(&other.apply(&x));
                (x, y)
            })
            .collect();
        Self::from_sorted_unchecked(pairs).canonical()
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.pieces().map(|((x0, y0), (x1, y1))| (y1 - y0) / (x1 - x0)).collect()
    }

    /// Drops breakpoints where the slope does not change. A map with no
    /// remaining breakpoint is a rotation, stored as `0 -> t`.
    pub fn canonical(&self) -> PLAut {
        let slopes = self.slopes();
        let n = slopes.len();
        let kept: Vec<_> = (0..n)
            .filter(|&j| slopes[(j + n - 1) % n] != slopes[j])
            .map(|j| self.pairs[j].clone())
            .collect();
        if kept.is_empty() {
            let (x, y) = &self.knots[0];
            PLAut::rotation(&(y - x))
        } else {
            Self::from_sorted_unchecked(kept)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.canonical() == PLAut::identity()
    }

    /// Conjugate by the reflection `x -> -x`; orientation is preserved.
    pub fn reflect(&self) -> PLAut {
        let mut pairs: Vec<_> = self.pairs.iter().map(|(x, y)| (x.reflect(), y.reflect())).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        Self::from_sorted_unchecked(pairs)
    }

    /// Checks the representation invariants: sorted distinct sources,
    /// circularly ordered targets, positive slopes and a degree-one lift.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("{msg}: {self:?}")));
        if self.pairs.is_empty() {
            return bad("no breakpoints");
        }
        if self.pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("sources not strictly increasing");
        }
        let images: Vec<RatPoint> = self.pairs.iter().map(|(_, y)| y.clone()).collect();
        if !is_circularly_ordered(&images) {
            return bad("targets not circularly ordered");
        }
        if self.slopes().iter().any(|s| !s.is_positive()) {
            return bad("non-positive slope");
        }
        let (first, last) = (&self.knots[0], self.knots.last().unwrap());
        if &last.1 - &first.1 != BigRational::one() || &last.0 - &first.0 != BigRational::one() {
            return bad("lift is not of degree one");
        }
        Ok(())
    }
}

fn format_pairs(pairs: &[(RatPoint, RatPoint)]) -> String {
    let parts: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Back-and-forth step: the canonical automorphism extending a finite
/// circular isomorphism `A -> B`. Its breakpoints are exactly the given pairs.
pub fn extend(pairs: &[(RatPoint, RatPoint)]) -> Result<PLAut> {
    let mut targets: Vec<&RatPoint> = pairs.iter().map(|(_, y)| y).collect();
    targets.sort();
    if targets.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotCircularIsomorphism("two points share an image".into()));
    }
    PLAut::from_pairs(pairs.to_vec())
}

impl Serialize for PLAut {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PLAut {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(RatPoint, RatPoint)>::deserialize(deserializer)?;
        PLAut::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}
