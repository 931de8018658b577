use num_rational::BigRational;
use num_traits::{One, Zero};

use super::aut::PLAut;
use crate::kernel::{frac, RatPoint};

fn to_nearest_integer(d: &BigRational) -> BigRational {
    let f = frac(d);
    let g = BigRational::one() - &f;
    f.min(g)
}

/// `sup_x d(g(x), h(x))`, exact.
///
/// The lift difference `G - H` is affine between the joint breakpoints, so the
/// folded distance peaks either at a breakpoint or where the difference
/// crosses a half-integer.
pub fn sup_distance(g: &PLAut, h: &PLAut) -> BigRational {
    let mut xs: Vec<BigRational> = g
        .breakpoints()
        .chain(h.breakpoints())
        .map(|x| x.value().clone())
        .collect();
    xs.push(BigRational::zero());
    xs.push(BigRational::one());
    xs.sort();
    xs.dedup();
    let diff = |t: &BigRational| g.apply_lift(t) - h.apply_lift(t);
    let half = BigRational::new(1.into(), 2.into());
    let mut best = BigRational::zero();
    for w in xs.windows(2) {
        let (t0, t1) = (&w[0], &w[1]);
        let (d0, d1) = (diff(t0), diff(t1));
        best = best.max(to_nearest_integer(&d0)).max(to_nearest_integer(&d1));
        if d0 == d1 {
            continue;
        }
        let (lo, hi) = if d0 < d1 { (&d0, &d1) } else { (&d1, &d0) };
        // some half-integer lies in [lo, hi]: the folded distance reaches its maximum
        let m = (lo - &half).ceil() + &half;
        if &m <= hi {
            return half;
        }
    }
    best
}

/// `d(g(x), h(x))` at a single point, exposed for sampling-based checks.
pub fn pointwise_distance(g: &PLAut, h: &PLAut, x: &RatPoint) -> BigRational {
    crate::kernel::circle_distance(&g.apply(x), &h.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> RatPoint {
        RatPoint::new(n, d)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn halver_against_identity() {
        let g = PLAut::from_pairs(vec![(p(0, 1), p(0, 1)), (p(1, 2), p(1, 4))]).unwrap();
        assert_eq!(sup_distance(&g, &PLAut::identity()), r(1, 4));
        assert_eq!(sup_distance(&g, &g), r(0, 1));
    }

    #[test]
    fn half_turn_is_the_maximum() {
        let g = PLAut::rotation(&r(1, 2));
        assert_eq!(sup_distance(&g, &PLAut::identity()), r(1, 2));
        let skew = PLAut::from_pairs(vec![(p(0, 1), p(1, 4)), (p(1, 2), p(1, 10))]).unwrap();
        // the lift difference 1/4 + 7t/10 crosses 1/2 at t = 5/14, inside the first piece
        let fine = (0..2000).map(|k| pointwise_distance(&skew, &PLAut::identity(), &p(k, 2000)));
        let sampled = fine.max().unwrap();
        let exact = sup_distance(&skew, &PLAut::identity());
        assert!(exact > sampled);
        assert_eq!(exact, r(1, 2));
    }
}
