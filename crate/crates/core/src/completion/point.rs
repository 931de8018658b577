use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::lazy::LazyAut;
use super::stream::{IntervalStream, StreamRecipe, REFINEMENT_CAP};
use crate::error::{Error, Result};
use crate::kernel::RatPoint;
use crate::pl::PLAut;

/// A point of the compactification: the circle with every rational `q`
/// replaced by the ordered triple `q⁻, q, q⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionPoint {
    Rational(RatPoint),
    /// Immediately before `q` in the counter-clockwise order.
    Minus(RatPoint),
    /// Immediately after `q`.
    Plus(RatPoint),
    Irr(IntervalStream),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitLabel {
    Q0,
    #[serde(rename = "Q0_minus")]
    Q0Minus,
    #[serde(rename = "Q0_plus")]
    Q0Plus,
    J,
}

pub fn orbit_of(x: &CompletionPoint) -> OrbitLabel {
    match x {
        CompletionPoint::Rational(_) => OrbitLabel::Q0,
        CompletionPoint::Minus(_) => OrbitLabel::Q0Minus,
        CompletionPoint::Plus(_) => OrbitLabel::Q0Plus,
        CompletionPoint::Irr(_) => OrbitLabel::J,
    }
}

impl CompletionPoint {
    pub fn quad(d: u64, p: i64, q: u64) -> Result<Self> {
        IntervalStream::quad(d, p, q).map(CompletionPoint::Irr)
    }

    /// The rational point a satellite or rational sits on.
    pub fn base(&self) -> Option<&RatPoint> {
        match self {
            CompletionPoint::Rational(q) | CompletionPoint::Minus(q) | CompletionPoint::Plus(q) => Some(q),
            CompletionPoint::Irr(_) => None,
        }
    }

    fn with_base(&self, q: RatPoint) -> Self {
        match self {
            CompletionPoint::Rational(_) => CompletionPoint::Rational(q),
            CompletionPoint::Minus(_) => CompletionPoint::Minus(q),
            CompletionPoint::Plus(_) => CompletionPoint::Plus(q),
            CompletionPoint::Irr(_) => unreachable!("irrational points carry no base"),
        }
    }

    fn satellite_rank(&self) -> i8 {
        match self {
            CompletionPoint::Minus(_) => -1,
            CompletionPoint::Plus(_) => 1,
            _ => 0,
        }
    }

    /// Equality of the represented points; irrationals are compared by
    /// interval overlap up to `depth`.
    pub fn same_point(&self, other: &CompletionPoint, depth: usize) -> Result<bool> {
        match (self, other) {
            (CompletionPoint::Irr(a), CompletionPoint::Irr(b)) => a.agrees_to(b, depth),
            _ => Ok(self == other),
        }
    }
}

/// Compares `x` and `y` in the linear order obtained by cutting the
/// compactification just before `0⁻`.
fn cut_order(x: &CompletionPoint, y: &CompletionPoint, precision: u32) -> Result<Ordering> {
    use CompletionPoint::Irr;
    match (x, y) {
        (Irr(a), Irr(b)) => {
            if a == b {
                return Ok(Ordering::Equal);
            }
            for n in 1..=precision.max(1) as usize {
                let (ia, ib) = (a.interval(n)?, b.interval(n)?);
                if ia.avoids_zero() && ib.avoids_zero() && ia.closed_disjoint(&ib) {
                    return Ok(ia.start.cmp(&ib.start));
                }
            }
            Err(Error::Undecided(precision))
        }
        (Irr(a), other) => {
            let q = other.base().unwrap();
            let cap = precision.max(REFINEMENT_CAP) as usize;
            match a.separate_from(q, cap)? {
                Some(iv) => Ok(if &iv.start > q { Ordering::Greater } else { Ordering::Less }),
                None => Err(Error::Undecided(precision)),
            }
        }
        (_, Irr(_)) => cut_order(y, x, precision).map(Ordering::reverse),
        _ => {
            let (p, q) = (x.base().unwrap(), y.base().unwrap());
            Ok(p.cmp(q).then(x.satellite_rank().cmp(&y.satellite_rank())))
        }
    }
}

/// The circular order of the compactification. Coincident points give
/// `false`; two irrationals that cannot be told apart within `precision`
/// refinements give [`Error::Undecided`].
pub fn c_between_completion(
    x: &CompletionPoint,
    y: &CompletionPoint,
    z: &CompletionPoint,
    precision: u32,
) -> Result<bool> {
    let xy = cut_order(x, y, precision)?;
    let yz = cut_order(y, z, precision)?;
    let zx = cut_order(z, x, precision)?;
    if xy.is_eq() || yz.is_eq() || zx.is_eq() {
        return Ok(false);
    }
    let lt = |o: Ordering| o.is_lt();
    Ok((lt(xy) && lt(yz)) || (lt(yz) && lt(zx)) || (lt(zx) && lt(xy)))
}

/// The action of a PL automorphism; satellites follow their base point.
pub fn act(g: &PLAut, x: &CompletionPoint) -> CompletionPoint {
    match x {
        CompletionPoint::Irr(s) => {
            if g.is_identity() {
                x.clone()
            } else {
                CompletionPoint::Irr(IntervalStream::image(g, s))
            }
        }
        _ => x.with_base(g.apply(x.base().unwrap())),
    }
}

/// The action of a limit automorphism.
pub fn act_lazy(g: &LazyAut, x: &CompletionPoint) -> Result<CompletionPoint> {
    match x {
        CompletionPoint::Irr(s) => Ok(CompletionPoint::Irr(IntervalStream::lazy_image(g, s))),
        _ => Ok(x.with_base(g.eval(x.base().unwrap())?)),
    }
}

/// An irrational point's recipe, serialized in point form
/// `{"irr": recipe, "prefix": [...]}` with the prefix optional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrRecipe(pub StreamRecipe);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    rat: Option<RatPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minus: Option<RatPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plus: Option<RatPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    irr: Option<StreamRecipe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<(RatPoint, RatPoint)>>,
}

impl PointRepr {
    fn empty() -> Self {
        PointRepr { rat: None, minus: None, plus: None, irr: None, prefix: None }
    }

    fn from_recipe(recipe: &StreamRecipe) -> Self {
        let mut repr = PointRepr::empty();
        match recipe {
            StreamRecipe::Prefix { intervals, then } => {
                repr.irr = Some((**then).clone());
                repr.prefix = Some(intervals.clone());
            }
            other => repr.irr = Some(other.clone()),
        }
        repr
    }

    fn into_recipe(irr: StreamRecipe, prefix: Option<Vec<(RatPoint, RatPoint)>>) -> StreamRecipe {
        match prefix {
            Some(intervals) => StreamRecipe::Prefix { intervals, then: Box::new(irr) },
            None => irr,
        }
    }
}

impl Serialize for IrrRecipe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr::from_recipe(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IrrRecipe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PointRepr::deserialize(d)?;
        if repr.rat.is_some() || repr.minus.is_some() || repr.plus.is_some() {
            return Err(serde::de::Error::custom("expected an irrational point"));
        }
        let irr = repr.irr.ok_or_else(|| serde::de::Error::custom("missing \"irr\""))?;
        Ok(IrrRecipe(PointRepr::into_recipe(irr, repr.prefix)))
    }
}

impl Serialize for IntervalStream {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IrrRecipe(self.recipe().clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalStream {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recipe = IrrRecipe::deserialize(d)?;
        IntervalStream::from_recipe(&recipe.0).map_err(serde::de::Error::custom)
    }
}

impl Serialize for CompletionPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut repr = PointRepr::empty();
        match self {
            CompletionPoint::Rational(q) => repr.rat = Some(q.clone()),
            CompletionPoint::Minus(q) => repr.minus = Some(q.clone()),
            CompletionPoint::Plus(q) => repr.plus = Some(q.clone()),
            CompletionPoint::Irr(stream) => repr = PointRepr::from_recipe(stream.recipe()),
        }
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompletionPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PointRepr::deserialize(d)?;
        let tags = [repr.rat.is_some(), repr.minus.is_some(), repr.plus.is_some(), repr.irr.is_some()];
        if tags.iter().filter(|&&t| t).count() != 1 {
            return Err(D::Error::custom("a point needs exactly one of rat, minus, plus, irr"));
        }
        if repr.prefix.is_some() && repr.irr.is_none() {
            return Err(D::Error::custom("\"prefix\" is only allowed with \"irr\""));
        }
        Ok(match repr {
            PointRepr { rat: Some(q), .. } => CompletionPoint::Rational(q),
            PointRepr { minus: Some(q), .. } => CompletionPoint::Minus(q),
            PointRepr { plus: Some(q), .. } => CompletionPoint::Plus(q),
            PointRepr { irr: Some(irr), prefix, .. } => {
                let recipe = PointRepr::into_recipe(irr, prefix);
                CompletionPoint::Irr(IntervalStream::from_recipe(&recipe).map_err(D::Error::custom)?)
            }
            _ => unreachable!(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> RatPoint {
        RatPoint::new(n, d)
    }

    fn halver() -> PLAut {
        PLAut::from_pairs(vec![(p(0, 1), p(0, 1)), (p(1, 2), p(1, 4))]).unwrap()
    }

    #[test]
    fn satellite_order() {
        let q = p(1, 2);
        let (m, r, s) = (
            CompletionPoint::Minus(q.clone()),
            CompletionPoint::Rational(q.clone()),
            CompletionPoint::Plus(q),
        );
        assert!(c_between_completion(&m, &r, &s, 20).unwrap());
        assert!(!c_between_completion(&r, &m, &s, 20).unwrap());
        // the triple sits inside the gap between neighbouring rationals
        let left = CompletionPoint::Rational(p(1, 3));
        assert!(c_between_completion(&left, &m, &s, 20).unwrap());
        // 0⁻ precedes 0 even across the cut
        let zm = CompletionPoint::Minus(p(0, 1));
        let z = CompletionPoint::Rational(p(0, 1));
        assert!(c_between_completion(&zm, &z, &left, 20).unwrap());
        assert!(c_between_completion(&left, &zm, &z, 20).unwrap());
    }

    #[test]
    fn irrational_between_rationals() {
        let u = CompletionPoint::quad(2, 0, 1).unwrap();
        let zero = CompletionPoint::Rational(p(0, 1));
        let half = CompletionPoint::Rational(p(1, 2));
        assert!(c_between_completion(&zero, &u, &half, 20).unwrap());
        assert!(!c_between_completion(&zero, &half, &u, 20).unwrap());
        assert!(!c_between_completion(&u, &u, &half, 20).unwrap());
        let u_alias = CompletionPoint::quad(8, 0, 2).unwrap();
        assert_eq!(c_between_completion(&u, &u_alias, &half, 20), Err(Error::Undecided(20)));
    }

    #[test]
    fn action_on_points() {
        let g = halver();
        assert_eq!(act(&g, &CompletionPoint::Plus(p(1, 2))), CompletionPoint::Plus(p(1, 4)));
        assert_eq!(act(&g, &CompletionPoint::Minus(p(3, 4))), CompletionPoint::Minus(p(5, 8)));
        let u = CompletionPoint::quad(3, 0, 1).unwrap();
        assert_eq!(act(&PLAut::identity(), &u), u);
        assert_eq!(orbit_of(&act(&g, &u)), OrbitLabel::J);
    }

    #[test]
    fn orbit_labels() {
        assert_eq!(orbit_of(&CompletionPoint::Rational(p(1, 2))), OrbitLabel::Q0);
        assert_eq!(orbit_of(&CompletionPoint::Minus(p(0, 1))), OrbitLabel::Q0Minus);
        assert_eq!(orbit_of(&CompletionPoint::Plus(p(0, 1))), OrbitLabel::Q0Plus);
        assert_eq!(orbit_of(&CompletionPoint::quad(2, 0, 1).unwrap()), OrbitLabel::J);
    }

    #[test]
    fn point_json_format() {
        let v: CompletionPoint = serde_json::from_str(r#"{"rat":"1/3"}"#).unwrap();
        assert_eq!(v, CompletionPoint::Rational(p(1, 3)));
        let irr: CompletionPoint = serde_json::from_str(r#"{"irr":{"kind":"quad","D":2,"p":0,"q":1}}"#).unwrap();
        assert_eq!(serde_json::to_string(&irr).unwrap(), r#"{"irr":{"kind":"quad","D":2,"p":0,"q":1}}"#);
        let pre = r#"{"irr":{"kind":"quad","D":2,"p":0,"q":1},"prefix":[["1/4","1/2"]]}"#;
        let with_prefix: CompletionPoint = serde_json::from_str(pre).unwrap();
        assert_eq!(serde_json::to_string(&with_prefix).unwrap(), pre);
        assert!(serde_json::from_str::<CompletionPoint>(r#"{"rat":"1/3","minus":"1/3"}"#).is_err());
        assert!(serde_json::from_str::<CompletionPoint>(r#"{"irr":{"kind":"quad","D":9,"p":0,"q":1}}"#).is_err());
    }
}
