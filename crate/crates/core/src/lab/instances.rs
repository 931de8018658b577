//! Seeded generators of inputs satisfying the witness preconditions.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::witness::MaximalityCase;
use crate::kernel::{ccw_length, Cycle, RatPoint};
use crate::pl::{extend, random_point, sample_aut, seeded, PLAut, SeededRng};

/// Which side of `a_k` the sampled `f` sends it to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `f(a_k) ∈ (a_k, a_{k+1})`.
    Forward,
    /// `f(a_k) ∈ (a_{k-1}, a_k)`.
    Mirrored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct U1Instance {
    pub cycle: Cycle,
    /// 1-based.
    pub k: usize,
    pub f: PLAut,
    pub g: PLAut,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The point a fraction `t ∈ (0, 1)` of the way from `a` to `b` counterclockwise.
fn along(a: &RatPoint, b: &RatPoint, t: &BigRational) -> RatPoint {
    a.shift(&(ccw_length(a, b) * t))
}

fn fractions(rng: &mut SeededRng, count: usize, grid: i64) -> Vec<BigRational> {
    let mut js: Vec<i64> = Vec::new();
    while js.len() < count {
        let j = rng.gen_range(1..grid);
        if !js.contains(&j) {
            js.push(j);
        }
    }
    js.sort();
    js.into_iter().map(|j| ratio(j, grid)).collect()
}

fn random_cycle(rng: &mut SeededRng, n: usize) -> Cycle {
    let mut points: Vec<RatPoint> = Vec::new();
    while points.len() < n {
        let x = random_point(rng, 48);
        if !points.contains(&x) {
            points.push(x);
        }
    }
    points.sort();
    Cycle::new(points).expect("sorted distinct points form a cycle")
}

/// An element of `M_k` moving `a_k` into the side given by `branch`, with one
/// extra breakpoint on each side of `a_k`.
fn sample_mk(rng: &mut SeededRng, cycle: &Cycle, k: usize, branch: Branch) -> PLAut {
    let i = k as isize - 1;
    let (prev, ak, next) = (cycle.at(i - 1), cycle.at(i), cycle.at(i + 1));
    let c = match branch {
        Branch::Forward => along(ak, next, &fractions(rng, 1, 32)[0]),
        Branch::Mirrored => along(prev, ak, &fractions(rng, 1, 32)[0]),
    };
    let left = fractions(rng, 2, 32);
    let right = fractions(rng, 2, 32);
    extend(&[
        (prev.clone(), prev.clone()),
        (along(prev, ak, &left[0]), along(prev, &c, &left[1])),
        (ak.clone(), c.clone()),
        (along(ak, next, &right[0]), along(&c, next, &right[1])),
        (next.clone(), next.clone()),
    ])
    .expect("pairs are listed in circular order")
}

/// Moves every point of `marks` by less than half the smallest gap between
/// them, never leaving `marks[fixed_index]` in place. Both `g` and `g⁻¹` then
/// keep each mark strictly between its neighbours.
fn small_perturbation(rng: &mut SeededRng, marks: &[RatPoint], moved_index: usize) -> PLAut {
    let mut sorted = marks.to_vec();
    sorted.sort();
    let n = sorted.len();
    let gap = (0..n).map(|j| ccw_length(&sorted[j], &sorted[(j + 1) % n])).min().unwrap();
    let pairs: Vec<_> = marks
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let mut step = rng.gen_range(-15..=15);
            if j == moved_index && step == 0 {
                step = if rng.gen_bool(0.5) { 7 } else { -7 };
            }
            (p.clone(), p.shift(&(&gap * ratio(step, 32))))
        })
        .collect();
    extend(&pairs).expect("small moves preserve circular order")
}

/// A random instance of the decomposition problem on a cycle of `3..=6` points.
pub fn u1_instance(seed: u64, branch: Branch) -> U1Instance {
    let mut rng = seeded(seed);
    let n = rng.gen_range(3..=6);
    let cycle = random_cycle(&mut rng, n);
    let k = rng.gen_range(1..=n);
    let f = sample_mk(&mut rng, &cycle, k, branch);
    let mut marks = cycle.points().to_vec();
    marks.push(f.apply(cycle.at(k as isize - 1)));
    let g = small_perturbation(&mut rng, &marks, k - 1);
    U1Instance { cycle, k, f, g }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityInstance {
    pub a: RatPoint,
    pub f: PLAut,
    pub g: PLAut,
}

/// A random `(a, f, g)` with `g(a) != a` whose decomposition falls in `case`.
pub fn maximality_instance(seed: u64, case: MaximalityCase) -> MaximalityInstance {
    let mut rng = seeded(seed);
    let a = random_point(&mut rng, 32);
    let ga = a.shift(&fractions(&mut rng, 1, 64)[0]);
    let g = extend(&[(a.clone(), ga.clone())])
        .unwrap()
        .compose(&sample_aut(&mut rng, 4, 40, Some(&a)));
    let ga = g.apply(&a);
    let h = sample_aut(&mut rng, 4, 40, Some(&a));
    let fa = match case {
        MaximalityCase::Trivial => a.clone(),
        MaximalityCase::Equal => ga.clone(),
        MaximalityCase::GFirst => along(&ga, &a, &fractions(&mut rng, 1, 64)[0]),
        MaximalityCase::FFirst => along(&a, &ga, &fractions(&mut rng, 1, 64)[0]),
    };
    let f = extend(&[(a.clone(), fa)]).unwrap().compose(&h);
    MaximalityInstance { a, f, g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::between;
    use crate::pl::{in_nbhd, move_set, NbhdDescriptor};

    #[test]
    fn u1_instances_meet_preconditions() {
        for seed in 0..40 {
            for branch in [Branch::Forward, Branch::Mirrored] {
                let U1Instance { cycle, k, f, g } = u1_instance(seed, branch);
                let i = k as isize - 1;
                let (prev, ak, next) = (cycle.at(i - 1), cycle.at(i), cycle.at(i + 1));
                assert!(move_set(&f).is_within(prev, next));
                let c = f.apply(ak);
                let nbhd = NbhdDescriptor::CycleNbhd(cycle.clone());
                assert!(in_nbhd(&g, &nbhd) && in_nbhd(&g.inverse(), &nbhd));
                assert_ne!(&g.apply(ak), ak);
                let (lo, hi) = match branch {
                    Branch::Forward => (ak, next),
                    Branch::Mirrored => (prev, ak),
                };
                for y in [g.apply(&c), g.inverse().apply(&c), c] {
                    assert!(between(lo, &y, hi));
                }
            }
        }
    }

    #[test]
    fn maximality_instances_hit_their_case() {
        let cases = [MaximalityCase::Trivial, MaximalityCase::Equal, MaximalityCase::GFirst, MaximalityCase::FFirst];
        for seed in 0..40 {
            for case in cases {
                let inst = maximality_instance(seed, case);
                assert_ne!(inst.g.apply(&inst.a), inst.a);
                let w = super::super::maximality_witness(&inst.a, &inst.f, &inst.g).unwrap();
                assert_eq!(w.case, case);
            }
        }
    }
}
