use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::aut::PLAut;
use crate::kernel::{between, cut_compare, Interval, RatPoint};

/// `Move(g) = {x : g(x) != x}` as a finite union of open arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveSet {
    /// No fixed point at all.
    Everywhere,
    /// Exactly one fixed point.
    AllBut(RatPoint),
    /// Disjoint open arcs between fixed components; empty for the identity.
    Arcs(Vec<Interval>),
}

impl MoveSet {
    pub fn contains(&self, x: &RatPoint) -> bool {
        match self {
            MoveSet::Everywhere => true,
            MoveSet::AllBut(p) => p != x,
            MoveSet::Arcs(arcs) => arcs.iter().any(|a| a.contains(x)),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, MoveSet::Arcs(a) if a.is_empty())
    }

    /// Whether the move set lies inside the open arc `(c, d)`.
    pub fn is_within(&self, c: &RatPoint, d: &RatPoint) -> bool {
        let arcs = match self {
            MoveSet::Arcs(arcs) => arcs,
            _ => return false,
        };
        let inside = |x: &RatPoint| x == c || x == d || between(c, x, d);
        arcs.iter().all(|a| {
            inside(&a.left)
                && inside(&a.right)
                && a.left != *d
                && a.right != *c
                && cut_compare(c, &a.left, &a.right).is_lt()
        })
    }
}

/// Exact `Move(g)`, from the fixed points of each affine piece of the lift.
pub fn move_set(g: &PLAut) -> MoveSet {
    let one = BigRational::one();
    // closed fixed components [l, r] of the lift over [X_0, X_0 + 1]
    let mut comps: Vec<(BigRational, BigRational)> = Vec::new();
    for ((x0, y0), (x1, y1)) in g.pieces() {
        let d0 = y0 - x0;
        let d1 = y1 - x1;
        if d0 == d1 {
            if d0.is_integer() {
                comps.push((x0.clone(), x1.clone()));
            }
            continue;
        }
        let (lo, hi) = if d0 < d1 { (&d0, &d1) } else { (&d1, &d0) };
        let mut m = lo.ceil();
        while &m <= hi {
            let t = x0 + (&m - &d0) * (x1 - x0) / (&d1 - &d0);
            comps.push((t.clone(), t));
            m += &one;
        }
    }
    comps.sort();
    let mut merged: Vec<(BigRational, BigRational)> = Vec::new();
    for (l, r) in comps {
        match merged.last_mut() {
            Some(last) if l <= last.1 => {
                if r > last.1 {
                    last.1 = r;
                }
            }
            _ => merged.push((l, r)),
        }
    }
    if merged.is_empty() {
        return MoveSet::Everywhere;
    }
    let start = g.pieces().next().unwrap().0 .0.clone();
    let end = &start + &one;
    if merged.len() > 1 && merged.last().unwrap().1 == end && merged[0].0 == start {
        let (l, _) = merged.pop().unwrap();
        merged[0].0 = l - &one;
    }
    if merged.len() > 1 && merged.last().unwrap().0 == end {
        // the point X_0 + 1 is X_0 again
        merged.pop();
    }
    if merged.len() == 1 {
        let (l, r) = &merged[0];
        if r - l >= one {
            return MoveSet::Arcs(Vec::new());
        }
        if l == r {
            return MoveSet::AllBut(RatPoint::from_ratio(l));
        }
    }
    let k = merged.len();
    let arcs = (0..k)
        .map(|i| {
            let r = &merged[i].1;
            let l = &merged[(i + 1) % k].0;
            Interval::open(RatPoint::from_ratio(r), RatPoint::from_ratio(l))
        })
        .collect();
    MoveSet::Arcs(arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::extend;

    fn p(n: i64, d: i64) -> RatPoint {
        RatPoint::new(n, d)
    }

    #[test]
    fn identity_moves_nothing() {
        assert!(move_set(&PLAut::identity()).is_empty());
        let verbose = extend(&[(p(1, 5), p(1, 5)), (p(3, 5), p(3, 5))]).unwrap();
        assert!(move_set(&verbose).is_empty());
    }

    #[test]
    fn supported_in_half() {
        let g = extend(&[(p(0, 1), p(0, 1)), (p(1, 4), p(1, 8)), (p(1, 2), p(1, 2))]).unwrap();
        let m = move_set(&g);
        assert_eq!(m, MoveSet::Arcs(vec![Interval::open(p(0, 1), p(1, 2))]));
        assert!(m.is_within(&p(0, 1), &p(1, 2)));
        assert!(!m.is_within(&p(1, 8), &p(1, 2)));
    }

    #[test]
    fn rotation_and_single_fixed_point() {
        let r = PLAut::rotation(&BigRational::new(1.into(), 3.into()));
        assert_eq!(move_set(&r), MoveSet::Everywhere);
        let g = extend(&[(p(0, 1), p(0, 1)), (p(1, 2), p(1, 4))]).unwrap();
        assert_eq!(move_set(&g), MoveSet::AllBut(p(0, 1)));
    }

    #[test]
    fn support_wrapping_zero() {
        let g = extend(&[(p(3, 4), p(3, 4)), (p(0, 1), p(1, 8)), (p(1, 4), p(1, 4))]).unwrap();
        let m = move_set(&g);
        assert_eq!(m, MoveSet::Arcs(vec![Interval::open(p(3, 4), p(1, 4))]));
        assert!(m.contains(&p(0, 1)));
        assert!(!m.contains(&p(1, 2)));
        assert!(m.is_within(&p(3, 4), &p(1, 4)));
        assert!(m.is_within(&p(1, 2), &p(3, 8)));
    }

    #[test]
    fn interior_crossing_fixed_point() {
        // slope 1/2 then 3/2 crossing the diagonal at 0 and at an interior point of the second piece
        let g = extend(&[(p(0, 1), p(1, 10)), (p(1, 2), p(1, 2))]).unwrap();
        let m = move_set(&g);
        for k in 0..100 {
            let x = p(k, 100);
            assert_eq!(m.contains(&x), g.apply(&x) != x, "at {x}");
        }
    }
}
