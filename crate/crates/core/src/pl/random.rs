use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::aut::PLAut;
use crate::kernel::RatPoint;

/// The generator used for every seeded construction in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly drawn denominator in `1..=bound`, then a numerator below it.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, denominator_bound: u64) -> RatPoint {
    let q = rng.gen_range(1..=denominator_bound.max(1));
    let p = rng.gen_range(0..q);
    RatPoint::new(p as i64, q as i64)
}

fn distinct_points<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    denominator_bound: u64,
    seed_point: Option<&RatPoint>,
) -> Vec<RatPoint> {
    let mut points: Vec<RatPoint> = seed_point.into_iter().cloned().collect();
    let mut attempts = 0;
    while points.len() < count && attempts < 64 * count {
        let x = random_point(rng, denominator_bound);
        if !points.contains(&x) {
            points.push(x);
        }
        attempts += 1;
    }
    points.sort();
    points
}

/// Draws a random automorphism with `budget` breakpoints (fewer only when the
/// denominator bound cannot supply enough distinct points). With `fixed`,
/// the result fixes that point.
pub fn sample_aut<R: Rng + ?Sized>(
    rng: &mut R,
    budget: usize,
    denominator_bound: u64,
    fixed: Option<&RatPoint>,
) -> PLAut {
    let budget = budget.max(1);
    let xs = distinct_points(rng, budget, denominator_bound, fixed);
    let ys = distinct_points(rng, xs.len(), denominator_bound, fixed);
    let n = xs.len().min(ys.len());
    let (xs, ys) = (&xs[..n], &ys[..n]);
    let shift = match fixed {
        Some(a) => {
            let i = xs.iter().position(|x| x == a).unwrap();
            let j = ys.iter().position(|y| y == a).unwrap();
            (j + n - i) % n
        }
        None => rng.gen_range(0..n),
    };
    let pairs = (0..n).map(|i| (xs[i].clone(), ys[(i + shift) % n].clone())).collect();
    PLAut::from_pairs(pairs).expect("rotated sorted lists are circularly ordered")
}

/// Deterministic in `seed`.
pub fn random_aut(budget: usize, denominator_bound: u64, seed: u64) -> PLAut {
    sample_aut(&mut seeded(seed), budget, denominator_bound, None)
}

/// Deterministic in `seed`; the result fixes `fixed`.
pub fn random_aut_fixing(budget: usize, denominator_bound: u64, seed: u64, fixed: &RatPoint) -> PLAut {
    sample_aut(&mut seeded(seed), budget, denominator_bound, Some(fixed))
}
