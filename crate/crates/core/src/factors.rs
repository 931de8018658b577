//! The six natural quotients of the compactification that stay injective on
//! Q/Z, as evaluable maps together with the induced group action on each target.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::completion::{act, CompletionPoint, IntervalStream};
use crate::error::{Error, Result};
use crate::kernel::RatPoint;
use crate::pl::PLAut;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorId {
    /// Onto the circle, collapsing each triple `q⁻, q, q⁺`.
    F1,
    /// Onto the one-point compactification of Q/Z, collapsing the minimal flow.
    F2,
    /// Onto the minimal flow, sending `q` to `q⁻`.
    F3,
    /// Onto the minimal flow, sending `q` to `q⁺`.
    F4,
    /// Onto the double-circle subspace, gluing `q⁻` to `q⁺`.
    F5,
    /// The identity.
    F6,
}

impl FactorId {
    pub const ALL: [FactorId; 6] = [FactorId::F1, FactorId::F2, FactorId::F3, FactorId::F4, FactorId::F5, FactorId::F6];
}

/// A point of the ordinary circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CirclePoint {
    Rat(RatPoint),
    Irr(IntervalStream),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Circle,
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorTarget {
    Circle(CirclePoint),
    /// `None` is the point at infinity `*`.
    OnePoint(Option<RatPoint>),
    /// A point of the minimal flow (never `Rational`).
    Flow(CompletionPoint),
    DoubleCircle { point: CirclePoint, layer: Layer },
    Full(CompletionPoint),
}

fn circle_of(x: &CompletionPoint) -> CirclePoint {
    match x {
        CompletionPoint::Irr(s) => CirclePoint::Irr(s.clone()),
        other => CirclePoint::Rat(other.base().unwrap().clone()),
    }
}

pub fn factor_apply(id: FactorId, x: &CompletionPoint) -> FactorTarget {
    use CompletionPoint::*;
    match id {
        FactorId::F1 => FactorTarget::Circle(circle_of(x)),
        FactorId::F2 => match x {
            Rational(q) => FactorTarget::OnePoint(Some(q.clone())),
            _ => FactorTarget::OnePoint(None),
        },
        FactorId::F3 => match x {
            Rational(q) => FactorTarget::Flow(Minus(q.clone())),
            other => FactorTarget::Flow(other.clone()),
        },
        FactorId::F4 => match x {
            Rational(q) => FactorTarget::Flow(Plus(q.clone())),
            other => FactorTarget::Flow(other.clone()),
        },
        FactorId::F5 => {
            let layer = if matches!(x, Rational(_)) { Layer::Isolated } else { Layer::Circle };
            FactorTarget::DoubleCircle { point: circle_of(x), layer }
        }
        FactorId::F6 => FactorTarget::Full(x.clone()),
    }
}

fn act_circle(g: &PLAut, p: &CirclePoint) -> CirclePoint {
    match p {
        CirclePoint::Rat(q) => CirclePoint::Rat(g.apply(q)),
        CirclePoint::Irr(s) => CirclePoint::Irr(IntervalStream::image(g, s)),
    }
}

/// The action of `g` on each target space: on the circle through the PL
/// extension, fixing `*`, and on the flow by restriction.
pub fn act_target(g: &PLAut, y: &FactorTarget) -> FactorTarget {
    match y {
        FactorTarget::Circle(p) => FactorTarget::Circle(act_circle(g, p)),
        FactorTarget::OnePoint(q) => FactorTarget::OnePoint(q.as_ref().map(|q| g.apply(q))),
        FactorTarget::Flow(x) => FactorTarget::Flow(act(g, x)),
        FactorTarget::DoubleCircle { point, layer } => {
            FactorTarget::DoubleCircle { point: act_circle(g, point), layer: *layer }
        }
        FactorTarget::Full(x) => FactorTarget::Full(act(g, x)),
    }
}

fn same_circle_point(a: &CirclePoint, b: &CirclePoint, depth: usize) -> Result<bool> {
    match (a, b) {
        (CirclePoint::Irr(s), CirclePoint::Irr(t)) => s.agrees_to(t, depth),
        _ => Ok(a == b),
    }
}

/// Equality of target points, irrationals compared to `depth` refinements.
pub fn same_target(a: &FactorTarget, b: &FactorTarget, depth: usize) -> Result<bool> {
    use FactorTarget::*;
    match (a, b) {
        (Circle(p), Circle(q)) => same_circle_point(p, q, depth),
        (OnePoint(p), OnePoint(q)) => Ok(p == q),
        (Flow(x), Flow(y)) | (Full(x), Full(y)) => x.same_point(y, depth),
        (DoubleCircle { point: p, layer: l }, DoubleCircle { point: q, layer: m }) => {
            Ok(l == m && same_circle_point(p, q, depth)?)
        }
        _ => Ok(false),
    }
}

/// `f(g·x) == g·f(x)` for the factor `f = id`.
pub fn check_equivariance(id: FactorId, g: &PLAut, x: &CompletionPoint, precision: u32) -> Result<bool> {
    let left = factor_apply(id, &act(g, x));
    let right = act_target(g, &factor_apply(id, x));
    same_target(&left, &right, precision as usize)
}

fn circle_json(p: &CirclePoint) -> Value {
    match p {
        CirclePoint::Rat(q) => json!({ "rat": q }),
        CirclePoint::Irr(s) => serde_json::to_value(s).expect("streams serialize"),
    }
}

fn circle_from_json(v: &Value) -> Result<CirclePoint> {
    match serde_json::from_value::<CompletionPoint>(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))? {
        CompletionPoint::Rational(q) => Ok(CirclePoint::Rat(q)),
        CompletionPoint::Irr(s) => Ok(CirclePoint::Irr(s)),
        _ => Err(Error::InvalidInput("circle points are rational or irrational".into())),
    }
}

impl FactorTarget {
    /// Tagged-record form: point records as for completion points, `"*"`
    /// for the point at infinity and a `"layer"` tag on double-circle points.
    pub fn to_json(&self) -> Value {
        match self {
            FactorTarget::Circle(p) => circle_json(p),
            FactorTarget::OnePoint(Some(q)) => json!({ "rat": q }),
            FactorTarget::OnePoint(None) => json!("*"),
            FactorTarget::Flow(x) | FactorTarget::Full(x) => serde_json::to_value(x).expect("points serialize"),
            FactorTarget::DoubleCircle { point, layer } => {
                let mut v = circle_json(point);
                v.as_object_mut().unwrap().insert("layer".into(), json!(layer));
                v
            }
        }
    }

    pub fn from_json(id: FactorId, v: &Value) -> Result<Self> {
        let point = |v: &Value| {
            serde_json::from_value::<CompletionPoint>(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))
        };
        Ok(match id {
            FactorId::F1 => FactorTarget::Circle(circle_from_json(v)?),
            FactorId::F2 => {
                if v == "*" {
                    FactorTarget::OnePoint(None)
                } else {
                    match point(v)? {
                        CompletionPoint::Rational(q) => FactorTarget::OnePoint(Some(q)),
                        _ => return Err(Error::InvalidInput("expected a rational or \"*\"".into())),
                    }
                }
            }
            FactorId::F3 | FactorId::F4 => match point(v)? {
                CompletionPoint::Rational(_) => {
                    return Err(Error::InvalidInput("the minimal flow has no rational points".into()))
                }
                x => FactorTarget::Flow(x),
            },
            FactorId::F5 => {
                let mut obj = v.as_object().cloned().ok_or_else(|| Error::InvalidInput("expected a record".into()))?;
                let layer = obj.remove("layer").ok_or_else(|| Error::InvalidInput("missing \"layer\"".into()))?;
                let layer: Layer = serde_json::from_value(layer).map_err(|e| Error::InvalidInput(e.to_string()))?;
                FactorTarget::DoubleCircle { point: circle_from_json(&Value::Object(obj))?, layer }
            }
            FactorId::F6 => FactorTarget::Full(point(v)?),
        })
    }
}
