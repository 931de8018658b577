use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::point::IrrRecipe;
use super::stream::{IntervalStream, StreamInterval, REFINEMENT_CAP};
use crate::error::{Error, Result};
use crate::kernel::{is_circularly_ordered, RatPoint};
use crate::pl::{extend, PLAut};

/// How a transporter treats points other than the one it moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportMode {
    Plain,
    /// Additionally fix this irrational point (identity near it at every stage).
    Fixing(IntervalStream),
    /// Additionally move each `u_i` to `v_i`; the whole correspondence must
    /// preserve circular order.
    Finite(Vec<(IntervalStream, IntervalStream)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeRecipe {
    Plain,
    Fixing(IrrRecipe),
    Finite(Vec<(IrrRecipe, IrrRecipe)>),
}

/// Serialized form of a limit automorphism: the transport parameters, not its stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportRecipe {
    pub u: IrrRecipe,
    pub v: IrrRecipe,
    pub mode: ModeRecipe,
}

struct LazyInner {
    recipe: TransportRecipe,
    /// `(domain, target)` streams; stage `n` maps domain interval `n` onto target interval `n`.
    controls: Vec<(IntervalStream, IntervalStream)>,
    /// Streams are read from index `1 + offset`, where the first intervals are separated.
    offset: usize,
    protected: Option<StreamInterval>,
    stages: Mutex<Vec<PLAut>>,
}

/// A limit `g = lim g_n` of PL automorphisms with the eventual-agreement
/// property: for `i, j >= n`, `g_i = g_j` outside the domain intervals at
/// level `n`, and `g_i⁻¹ = g_j⁻¹` outside the target intervals at level `n`.
///
/// Stage `n + 1` is `g_n ∘ m_{n+1}` with `m_{n+1}` supported in the level-`n`
/// domain intervals.
#[derive(Clone)]
pub struct LazyAut(Arc<LazyInner>);

impl fmt::Debug for LazyAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("LazyAut").field(&self.0.recipe).finish()
    }
}

fn pairwise_disjoint(intervals: &[StreamInterval]) -> bool {
    intervals
        .iter()
        .enumerate()
        .all(|(i, a)| intervals[i + 1..].iter().all(|b| a.closed_disjoint(b)))
}

fn separated(
    domains: &[StreamInterval],
    targets: &[StreamInterval],
    cross: bool,
    protected: Option<&StreamInterval>,
) -> bool {
    if !pairwise_disjoint(domains) || !pairwise_disjoint(targets) {
        return false;
    }
    if cross && !domains[0].closed_disjoint(&targets[0]) {
        return false;
    }
    match protected {
        Some(z) => domains.iter().chain(targets).all(|iv| iv.closed_disjoint(z)),
        None => true,
    }
}

/// Builds a limit automorphism sending the irrational point of `u` to that of `v`.
pub fn transport(u: &IntervalStream, v: &IntervalStream, mode: TransportMode) -> Result<LazyAut> {
    // a point sent to itself needs no moving intervals: the limit is the identity
    let mut controls = if !matches!(mode, TransportMode::Finite(_)) && u == v {
        Vec::new()
    } else {
        vec![(u.clone(), v.clone())]
    };
    let (mode_recipe, fixed) = match &mode {
        TransportMode::Plain => (ModeRecipe::Plain, None),
        TransportMode::Fixing(z) => (ModeRecipe::Fixing(IrrRecipe(z.recipe().clone())), Some(z.clone())),
        TransportMode::Finite(pairs) => {
            controls.extend(pairs.iter().cloned());
            let rs = pairs
                .iter()
                .map(|(a, b)| (IrrRecipe(a.recipe().clone()), IrrRecipe(b.recipe().clone())))
                .collect();
            (ModeRecipe::Finite(rs), None)
        }
    };
    let recipe = TransportRecipe {
        u: IrrRecipe(u.recipe().clone()),
        v: IrrRecipe(v.recipe().clone()),
        mode: mode_recipe,
    };
    // plain and fixing transporters need u and v apart
    let cross = !controls.is_empty() && !matches!(mode, TransportMode::Finite(_));
    let mut offset = None;
    for k in 0..REFINEMENT_CAP as usize {
        let domains: Vec<_> = controls.iter().map(|(a, _)| a.interval(k + 1)).collect::<Result<_>>()?;
        let targets: Vec<_> = controls.iter().map(|(_, b)| b.interval(k + 1)).collect::<Result<_>>()?;
        let z = fixed.as_ref().map(|z| z.interval(k + 1)).transpose()?;
        let ok = if matches!(mode, TransportMode::Finite(_)) {
            separated(&domains, &[], false, None) && separated(&targets, &[], false, None)
        } else {
            separated(&domains, &targets, cross, z.as_ref())
        };
        if ok {
            offset = Some(k);
            break;
        }
    }
    let offset = offset.ok_or(Error::NotSeparated(REFINEMENT_CAP))?;
    let protected = fixed.as_ref().map(|z| z.interval(offset + 1)).transpose()?;

    if controls.len() > 1 {
        let mut order: Vec<(StreamInterval, StreamInterval)> = controls
            .iter()
            .map(|(a, b)| Ok((a.interval(offset + 1)?, b.interval(offset + 1)?)))
            .collect::<Result<_>>()?;
        order.sort_by(|x, y| x.0.start.cmp(&y.0.start));
        let images: Vec<RatPoint> = order.iter().map(|(_, t)| t.start.clone()).collect();
        if !is_circularly_ordered(&images) {
            return Err(Error::NotCircularIsomorphism(
                "the finite correspondence does not preserve circular order".into(),
            ));
        }
    }

    let lazy = LazyAut(Arc::new(LazyInner {
        recipe,
        controls,
        offset,
        protected,
        stages: Mutex::new(Vec::new()),
    }));
    lazy.stage(1)?;
    Ok(lazy)
}

impl LazyAut {
    pub fn from_recipe(recipe: &TransportRecipe) -> Result<Self> {
        let u = IntervalStream::from_recipe(&recipe.u.0)?;
        let v = IntervalStream::from_recipe(&recipe.v.0)?;
        let mode = match &recipe.mode {
            ModeRecipe::Plain => TransportMode::Plain,
            ModeRecipe::Fixing(z) => TransportMode::Fixing(IntervalStream::from_recipe(&z.0)?),
            ModeRecipe::Finite(pairs) => TransportMode::Finite(
                pairs
                    .iter()
                    .map(|(a, b)| Ok((IntervalStream::from_recipe(&a.0)?, IntervalStream::from_recipe(&b.0)?)))
                    .collect::<Result<_>>()?,
            ),
        };
        transport(&u, &v, mode)
    }

    pub fn recipe(&self) -> &TransportRecipe {
        &self.0.recipe
    }

    /// Domain intervals at level `n` (1-based), one per moved point.
    pub fn domain_intervals(&self, n: usize) -> Result<Vec<StreamInterval>> {
        self.0.controls.iter().map(|(a, _)| a.interval(n + self.0.offset)).collect()
    }

    pub fn target_intervals(&self, n: usize) -> Result<Vec<StreamInterval>> {
        self.0.controls.iter().map(|(_, b)| b.interval(n + self.0.offset)).collect()
    }

    /// The closed arc around the fixed point on which every stage is the identity.
    pub fn protected_interval(&self) -> Option<&StreamInterval> {
        self.0.protected.as_ref()
    }

    fn first_stage(&self) -> Result<PLAut> {
        let mut pairs = Vec::new();
        for (a, c) in self.domain_intervals(1)?.into_iter().zip(self.target_intervals(1)?) {
            pairs.push((a.start.clone(), c.start.clone()));
            pairs.push((a.end(), c.end()));
        }
        if let Some(z) = &self.0.protected {
            pairs.push((z.start.clone(), z.start.clone()));
            pairs.push((z.end(), z.end()));
        }
        if pairs.is_empty() {
            return Ok(PLAut::identity());
        }
        extend(&pairs)
    }

    /// `m_{n+1}`: fixes everything outside the level-`n` domain intervals and
    /// moves the level-`n+1` domain intervals onto the `g_n`-preimages of the targets.
    fn correction(&self, n: usize, prev: &PLAut) -> Result<PLAut> {
        let prev_inv = prev.inverse();
        let outer = self.domain_intervals(n)?;
        let inner = self.domain_intervals(n + 1)?;
        let targets = self.target_intervals(n + 1)?;
        let mut pairs = Vec::with_capacity(4 * outer.len());
        for ((a, a_next), c_next) in outer.iter().zip(&inner).zip(&targets) {
            pairs.push((a.start.clone(), a.start.clone()));
            pairs.push((a_next.start.clone(), prev_inv.apply(&c_next.start)));
            pairs.push((a_next.end(), prev_inv.apply(&c_next.end())));
            pairs.push((a.end(), a.end()));
        }
        if pairs.is_empty() {
            return Ok(PLAut::identity());
        }
        extend(&pairs)
    }

    /// Stage `g_n`, `n >= 1`.
    pub fn stage(&self, n: usize) -> Result<PLAut> {
        assert!(n >= 1, "stages are indexed from 1");
        let mut stages = self.0.stages.lock().unwrap();
        if stages.is_empty() {
            stages.push(self.first_stage()?);
        }
        while stages.len() < n {
            let level = stages.len();
            let next = stages[level - 1].compose(&self.correction(level, &stages[level - 1])?);
            stages.push(next);
        }
        Ok(stages[n - 1].clone())
    }

    /// Least `n` such that `x` lies outside every open domain interval at level `n`.
    pub fn first_exclusion(&self, x: &RatPoint) -> Result<usize> {
        for n in 1..=REFINEMENT_CAP as usize {
            if self.domain_intervals(n)?.iter().all(|iv| !iv.contains_open(x)) {
                return Ok(n);
            }
        }
        Err(Error::CapExceeded(REFINEMENT_CAP))
    }

    /// Least `n` such that `x` lies outside every open target interval at level `n`.
    pub fn first_target_exclusion(&self, x: &RatPoint) -> Result<usize> {
        for n in 1..=REFINEMENT_CAP as usize {
            if self.target_intervals(n)?.iter().all(|iv| !iv.contains_open(x)) {
                return Ok(n);
            }
        }
        Err(Error::CapExceeded(REFINEMENT_CAP))
    }

    /// `g(x)` for the limit, read off the stage where `x`'s image has stabilized.
    pub fn eval(&self, x: &RatPoint) -> Result<RatPoint> {
        let n = self.first_exclusion(x)?;
        Ok(self.stage(n)?.apply(x))
    }

    /// `g⁻¹(x)` for the limit.
    pub fn eval_inverse(&self, x: &RatPoint) -> Result<RatPoint> {
        let n = self.first_target_exclusion(x)?;
        Ok(self.stage(n)?.inverse().apply(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::random_point;
    use crate::pl::seeded;

    fn quad(d: u64) -> IntervalStream {
        IntervalStream::quad(d, 0, 1).unwrap()
    }

    #[test]
    fn stage_n_maps_domain_onto_target() {
        let g = transport(&quad(2), &quad(3), TransportMode::Plain).unwrap();
        for n in 1..=12 {
            let stage = g.stage(n).unwrap();
            let (a, c) = (&g.domain_intervals(n).unwrap()[0], &g.target_intervals(n).unwrap()[0]);
            assert_eq!(stage.apply(&a.start), c.start);
            assert_eq!(stage.apply(&a.end()), c.end());
            stage.validate().unwrap();
        }
    }

    #[test]
    fn eventual_agreement_contract() {
        let g = transport(&quad(2), &quad(3), TransportMode::Plain).unwrap();
        let mut rng = seeded(3);
        let stages: Vec<PLAut> = (1..=10).map(|n| g.stage(n).unwrap()).collect();
        for _ in 0..200 {
            let x = random_point(&mut rng, 500);
            for n in 1..=8 {
                let a = &g.domain_intervals(n).unwrap()[0];
                let c = &g.target_intervals(n).unwrap()[0];
                for i in n..10 {
                    if !a.contains_open(&x) {
                        assert_eq!(stages[i].apply(&x), stages[n - 1].apply(&x));
                    }
                    if !c.contains_open(&x) {
                        assert_eq!(stages[i].inverse().apply(&x), stages[n - 1].inverse().apply(&x));
                    }
                }
            }
        }
    }

    #[test]
    fn same_point_gives_identity_stages() {
        let u = quad(2);
        let g = transport(&u, &u, TransportMode::Plain).unwrap();
        for n in 1..=6 {
            assert!(g.stage(n).unwrap().is_identity());
        }
        let x = RatPoint::new(1, 7);
        assert_eq!(g.eval(&x).unwrap(), x);
    }

    #[test]
    fn fixing_mode_is_identity_on_the_protected_arc() {
        let g = transport(&quad(2), &quad(3), TransportMode::Fixing(quad(5))).unwrap();
        let z = g.protected_interval().unwrap().clone();
        for n in 1..=8 {
            let stage = g.stage(n).unwrap();
            for k in 0..=20 {
                let x = z.start.shift(&(&z.len * num_rational::BigRational::new(k.into(), 20.into())));
                assert_eq!(stage.apply(&x), x);
            }
        }
    }

    #[test]
    fn finite_mode_checks_order() {
        let (a, b, c) = (quad(2), quad(3), quad(5)); // ≈ 0.414, 0.732, 0.236
        let ok = transport(&a, &b, TransportMode::Finite(vec![(c.clone(), c.clone())]));
        assert!(ok.is_ok());
        let d = IntervalStream::quad(7, 0, 1).unwrap(); // ≈ 0.646
        // 0.236 -> 0.236, 0.414 -> 0.732, 0.646 -> 0.414 reverses the order of two points
        let bad = transport(&a, &b, TransportMode::Finite(vec![(c.clone(), c), (d, a.clone())]));
        assert!(matches!(bad, Err(Error::NotCircularIsomorphism(_))));
    }
}
