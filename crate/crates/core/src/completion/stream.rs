use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lazy::{LazyAut, TransportRecipe};
use super::quad::QuadExpansion;
use crate::error::{Error, Result};
use crate::kernel::{ccw_length, frac, Interval, RatPoint};
use crate::pl::PLAut;

/// Maximum number of raw intervals inspected per refinement step, and the
/// default number of stages any search may run through.
pub const REFINEMENT_CAP: u32 = 64;

/// The open counter-clockwise arc `(start, start + len)`, `0 < len < 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StreamInterval {
    pub start: RatPoint,
    pub len: BigRational,
}

impl fmt::Debug for StreamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end())
    }
}

pub fn dyadic(level: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << level)
}

impl StreamInterval {
    /// From lift endpoints `lo < hi`; `None` unless `0 < hi - lo < 1`.
    pub fn from_lift(lo: &BigRational, hi: &BigRational) -> Option<Self> {
        let len = hi - lo;
        if len.is_positive() && len < BigRational::one() {
            Some(StreamInterval { start: RatPoint::from_ratio(lo), len })
        } else {
            None
        }
    }

    pub fn from_endpoints(start: RatPoint, end: &RatPoint) -> Option<Self> {
        let len = ccw_length(&start, end);
        if len.is_zero() {
            None
        } else {
            Some(StreamInterval { start, len })
        }
    }

    pub fn end(&self) -> RatPoint {
        self.start.shift(&self.len)
    }

    fn offset(&self, x: &RatPoint) -> BigRational {
        ccw_length(&self.start, x)
    }

    pub fn contains_open(&self, x: &RatPoint) -> bool {
        let o = self.offset(x);
        o.is_positive() && o < self.len
    }

    pub fn contains_closed(&self, x: &RatPoint) -> bool {
        self.offset(x) <= self.len
    }

    /// `[inner] ⊂ (self)`.
    pub fn strictly_contains(&self, inner: &StreamInterval) -> bool {
        let o = self.offset(&inner.start);
        o.is_positive() && o + &inner.len < self.len
    }

    pub fn closed_disjoint(&self, other: &StreamInterval) -> bool {
        !self.contains_closed(&other.start) && !other.contains_closed(&self.start)
    }

    /// Whether the closed arc avoids `0`, so that it is an ordinary real
    /// interval inside `(0, 1)`.
    pub fn avoids_zero(&self) -> bool {
        !self.start.is_zero() && self.start.value() + &self.len < BigRational::one()
    }

    pub fn image(&self, g: &PLAut) -> StreamInterval {
        StreamInterval::from_endpoints(g.apply(&self.start), &g.apply(&self.end()))
            .expect("bijections keep endpoints distinct")
    }

    pub fn to_interval(&self) -> Interval {
        Interval::open(self.start.clone(), self.end())
    }
}

/// The serializable construction of a stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamRecipe {
    /// Fractional part of `(p + √D) / q`.
    Quad {
        #[serde(rename = "D")]
        d: u64,
        p: i64,
        q: u64,
    },
    /// Explicit arcs `[start, end]` tried before the tail's intervals.
    Prefix { intervals: Vec<(RatPoint, RatPoint)>, then: Box<StreamRecipe> },
    /// Image under a PL automorphism.
    Image { g: PLAut, of: Box<StreamRecipe> },
    /// Image under the limit of a transporter.
    LazyImage { lazy: Box<TransportRecipe>, of: Box<StreamRecipe> },
    /// An in-process generator; not reconstructible from its serialization.
    Custom { id: u64 },
}

type Generator = dyn Fn(usize) -> Option<(BigRational, BigRational)> + Send + Sync;

enum Source {
    Quad(Mutex<QuadExpansion>),
    Prefix(Vec<(BigRational, BigRational)>, IntervalStream),
    Image(PLAut, IntervalStream),
    LazyImage(LazyAut, IntervalStream),
    Custom(Box<Generator>),
}

impl Source {
    /// Raw interval `k` (0-based) in lift coordinates.
    fn raw(&self, k: usize) -> Result<Option<(BigRational, BigRational)>> {
        Ok(match self {
            Source::Quad(e) => Some(e.lock().unwrap().bracket(k)),
            Source::Prefix(prefix, tail) => match prefix.get(k) {
                Some(iv) => Some(iv.clone()),
                None => tail.raw(k - prefix.len())?,
            },
            Source::Image(g, inner) => {
                let iv = inner.interval(k + 1)?.image(g);
                Some(lift_of(&iv))
            }
            Source::LazyImage(lazy, inner) => {
                let iv = inner.interval(k + 1)?;
                let start = lazy.eval(&iv.start)?;
                let end = lazy.eval(&iv.end())?;
                let image = StreamInterval::from_endpoints(start, &end)
                    .expect("limit automorphisms keep endpoints distinct");
                Some(lift_of(&image))
            }
            Source::Custom(f) => f(k),
        })
    }
}

fn lift_of(iv: &StreamInterval) -> (BigRational, BigRational) {
    (iv.start.value().clone(), iv.start.value() + &iv.len)
}

struct Normalized {
    intervals: Vec<StreamInterval>,
    cursor: usize,
}

struct Inner {
    recipe: StreamRecipe,
    source: Source,
    state: Mutex<Normalized>,
}

/// A nested sequence of rational open arcs `(a_n, b_n)`, `n >= 1`, shrinking
/// to a single irrational point.
///
/// Whatever the source produces is normalized on demand: interval `n + 1` has
/// its closure strictly inside interval `n` and length at most `2^-n`.
/// Computed intervals are cached; clones share the cache.
#[derive(Clone)]
pub struct IntervalStream(Arc<Inner>);

static NEXT_CUSTOM_ID: AtomicU64 = AtomicU64::new(1);

impl IntervalStream {
    fn from_source(recipe: StreamRecipe, source: Source) -> Self {
        IntervalStream(Arc::new(Inner {
            recipe,
            source,
            state: Mutex::new(Normalized { intervals: Vec::new(), cursor: 0 }),
        }))
    }

    /// The normalized stream of brackets around `frac((p + √D) / q)`.
    pub fn quad(d: u64, p: i64, q: u64) -> Result<Self> {
        let e = QuadExpansion::new(d, p, q)?;
        Ok(Self::from_source(StreamRecipe::Quad { d, p, q }, Source::Quad(Mutex::new(e))))
    }

    /// Normalizes an arbitrary generator of lift intervals `(lo, hi)`.
    /// `None` from the generator ends the stream.
    pub fn from_generator<F>(f: F) -> Self
    where
        F: Fn(usize) -> Option<(BigRational, BigRational)> + Send + Sync + 'static,
    {
        let id = NEXT_CUSTOM_ID.fetch_add(1, AtomicOrdering::Relaxed);
        Self::from_source(StreamRecipe::Custom { id }, Source::Custom(Box::new(f)))
    }

    pub fn with_prefix(intervals: Vec<(RatPoint, RatPoint)>, tail: IntervalStream) -> Self {
        let lifts = intervals
            .iter()
            .map(|(s, e)| (s.value().clone(), s.value() + ccw_length(s, e)))
            .collect();
        let recipe = StreamRecipe::Prefix { intervals, then: Box::new(tail.recipe().clone()) };
        Self::from_source(recipe, Source::Prefix(lifts, tail))
    }

    pub fn image(g: &PLAut, of: &IntervalStream) -> Self {
        let recipe = StreamRecipe::Image { g: g.clone(), of: Box::new(of.recipe().clone()) };
        Self::from_source(recipe, Source::Image(g.clone(), of.clone()))
    }

    pub fn lazy_image(lazy: &LazyAut, of: &IntervalStream) -> Self {
        let recipe = StreamRecipe::LazyImage {
            lazy: Box::new(lazy.recipe().clone()),
            of: Box::new(of.recipe().clone()),
        };
        Self::from_source(recipe, Source::LazyImage(lazy.clone(), of.clone()))
    }

    pub fn from_recipe(recipe: &StreamRecipe) -> Result<Self> {
        match recipe {
            StreamRecipe::Quad { d, p, q } => Self::quad(*d, *p, *q),
            StreamRecipe::Prefix { intervals, then } => {
                Ok(Self::with_prefix(intervals.clone(), Self::from_recipe(then)?))
            }
            StreamRecipe::Image { g, of } => Ok(Self::image(g, &Self::from_recipe(of)?)),
            StreamRecipe::LazyImage { lazy, of } => {
                Ok(Self::lazy_image(&LazyAut::from_recipe(lazy)?, &Self::from_recipe(of)?))
            }
            StreamRecipe::Custom { id } => {
                Err(Error::InvalidInput(format!("custom stream {id} cannot be rebuilt")))
            }
        }
    }

    pub fn recipe(&self) -> &StreamRecipe {
        &self.0.recipe
    }

    fn raw(&self, k: usize) -> Result<Option<(BigRational, BigRational)>> {
        self.0.source.raw(k)
    }

    /// The `k`-th raw interval (0-based) before normalization.
    pub fn raw_interval(&self, k: usize) -> Result<Option<StreamInterval>> {
        Ok(self.raw(k)?.and_then(|(lo, hi)| StreamInterval::from_lift(&lo, &hi)))
    }

    /// Normalized interval `n` (1-based).
    pub fn interval(&self, n: usize) -> Result<StreamInterval> {
        assert!(n >= 1, "stream intervals are indexed from 1");
        let mut state = self.0.state.lock().unwrap();
        while state.intervals.len() < n {
            let level = state.intervals.len() as u32 + 1;
            let bound = dyadic(level);
            let mut found = None;
            for _ in 0..REFINEMENT_CAP {
                let k = state.cursor;
                state.cursor += 1;
                let Some((lo, hi)) = self.raw(k)? else {
                    return Err(Error::StreamDoesNotShrink(REFINEMENT_CAP));
                };
                let Some(iv) = StreamInterval::from_lift(&lo, &hi) else { continue };
                if iv.len > bound {
                    continue;
                }
                if let Some(prev) = state.intervals.last() {
                    if !prev.strictly_contains(&iv) {
                        continue;
                    }
                }
                found = Some(iv);
                break;
            }
            match found {
                Some(iv) => state.intervals.push(iv),
                None => return Err(Error::StreamDoesNotShrink(REFINEMENT_CAP)),
            }
        }
        Ok(state.intervals[n - 1].clone())
    }

    pub fn prefix(&self, n: usize) -> Result<Vec<StreamInterval>> {
        (1..=n).map(|i| self.interval(i)).collect()
    }

    /// Least index whose closed interval avoids both `x` and `0`.
    pub fn separate_from(&self, x: &RatPoint, cap: usize) -> Result<Option<StreamInterval>> {
        for n in 1..=cap {
            let iv = self.interval(n)?;
            if iv.avoids_zero() && !iv.contains_closed(x) {
                return Ok(Some(iv));
            }
        }
        Ok(None)
    }

    /// Compares the limit points: `Some(false)` once two closed intervals
    /// are disjoint, `Some(true)` if all intervals up to `depth` meet.
    pub fn agrees_to(&self, other: &IntervalStream, depth: usize) -> Result<bool> {
        for n in 1..=depth {
            if self.interval(n)?.closed_disjoint(&other.interval(n)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every interval of each stream up to `depth` eventually contains an
    /// interval of the other. `Ok(false)` if a separation shows the limits differ.
    pub fn interleaves(&self, other: &IntervalStream, depth: usize) -> Result<bool> {
        for (a, b) in [(self, other), (other, self)] {
            for n in 1..=depth {
                let outer = a.interval(n)?;
                let mut ok = false;
                for m in 1..=depth + REFINEMENT_CAP as usize {
                    let inner = b.interval(m)?;
                    if outer.strictly_contains(&inner) {
                        ok = true;
                        break;
                    }
                    if outer.closed_disjoint(&inner) {
                        return Ok(false);
                    }
                }
                if !ok {
                    return Err(Error::Undecided(depth as u32));
                }
            }
        }
        Ok(true)
    }

    /// Midpoint of interval `n`, for display only.
    pub fn approx(&self, n: usize) -> Result<f64> {
        use num_traits::ToPrimitive;
        let iv = self.interval(n)?;
        let mid = frac(&(iv.start.value() + &iv.len / BigRational::from_integer(2.into())));
        Ok(mid.to_f64().unwrap_or(f64::NAN))
    }
}

impl PartialEq for IntervalStream {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.recipe == other.0.recipe
    }
}

impl Eq for IntervalStream {}

impl fmt::Debug for IntervalStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("IntervalStream").field(&self.0.recipe).finish()
    }
}

/// Builds a normalized stream from an explicit generator; the free-function
/// form of [`IntervalStream::from_generator`].
pub fn normalize<F>(generator: F) -> IntervalStream
where
    F: Fn(usize) -> Option<(BigRational, BigRational)> + Send + Sync + 'static,
{
    IntervalStream::from_generator(generator)
}
