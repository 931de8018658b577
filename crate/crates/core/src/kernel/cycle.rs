use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::order::between;
use super::point::RatPoint;
use crate::error::{Error, Result};

/// A circularly ordered tuple `[a_1, ..., a_n]` of distinct points, `n >= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Cycle(Vec<RatPoint>);

/// True iff the points, read cyclically, have exactly one descent; that is,
/// some rotation of the list is strictly increasing in `[0, 1)`.
fn winds_once(points: &[RatPoint]) -> bool {
    let n = points.len();
    let descents = (0..n).filter(|&i| points[(i + 1) % n] <= points[i]).count();
    descents == 1
}

/// Whether `points` form a cycle. Lists shorter than three are invalid input.
pub fn is_cycle(points: &[RatPoint]) -> Result<bool> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "a cycle needs at least 3 points, got {}",
            points.len()
        )));
    }
    Ok(winds_once(points))
}

/// Whether `points` (any length) are distinct and circularly ordered in the given order.
/// For fewer than three points this only requires distinctness.
pub fn is_circularly_ordered(points: &[RatPoint]) -> bool {
    match points.len() {
        0 | 1 => true,
        2 => points[0] != points[1],
        _ => winds_once(points),
    }
}

impl Cycle {
    pub fn new(points: Vec<RatPoint>) -> Result<Self> {
        if is_cycle(&points)? {
            Ok(Cycle(points))
        } else {
            Err(Error::NotACycle(format_points(&points)))
        }
    }

    pub fn points(&self) -> &[RatPoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_i` with the index taken modulo `n` (0-based).
    pub fn at(&self, i: isize) -> &RatPoint {
        let n = self.0.len() as isize;
        &self.0[i.rem_euclid(n) as usize]
    }

    /// The open arc `(a_{i-1}, a_{i+1})` around the `i`-th point (0-based).
    pub fn neighbourhood(&self, i: isize) -> Interval {
        Interval::open(self.at(i - 1).clone(), self.at(i + 1).clone())
    }

    /// The cycle `[-a_n, ..., -a_1]` seen through the reflection `x -> -x`.
    pub fn reflect(&self) -> Cycle {
        Cycle(self.0.iter().rev().map(RatPoint::reflect).collect())
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<RatPoint>::deserialize(d)?;
        Cycle::new(points).map_err(serde::de::Error::custom)
    }
}

fn format_points(points: &[RatPoint]) -> String {
    let parts: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringVariant {
    /// Singletons of the cycle points alternating with the open gaps.
    Cov,
    /// Only the open gaps.
    CovStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    Point { at: RatPoint },
    Open { left: RatPoint, right: RatPoint },
}

impl Cell {
    pub fn contains(&self, x: &RatPoint) -> bool {
        match self {
            Cell::Point { at } => at == x,
            Cell::Open { left, right } => between(left, x, right),
        }
    }

    pub fn as_interval(&self) -> Interval {
        match self {
            Cell::Point { at } => Interval::closed(at.clone(), at.clone()),
            Cell::Open { left, right } => Interval::open(left.clone(), right.clone()),
        }
    }
}

/// The disjoint covering of Q/Z (or of Q/Z minus the cycle points) induced by a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Covering {
    pub source: Cycle,
    pub variant: CoveringVariant,
    pub cells: Vec<Cell>,
}

pub fn cov_cells(cycle: &Cycle, variant: CoveringVariant) -> Covering {
    let n = cycle.len() as isize;
    let mut cells = Vec::with_capacity(2 * cycle.len());
    for i in 0..n {
        if variant == CoveringVariant::Cov {
            cells.push(Cell::Point { at: cycle.at(i).clone() });
        }
        cells.push(Cell::Open { left: cycle.at(i).clone(), right: cycle.at(i + 1).clone() });
    }
    Covering { source: cycle.clone(), variant, cells }
}

/// Index of the cell of `cov_cells(cycle, variant)` containing `x`.
pub fn locate(cycle: &Cycle, x: &RatPoint, variant: CoveringVariant) -> Result<usize> {
    let n = cycle.len() as isize;
    let stride = match variant {
        CoveringVariant::Cov => 2,
        CoveringVariant::CovStar => 1,
    };
    for i in 0..n {
        if cycle.at(i) == x {
            return match variant {
                CoveringVariant::Cov => Ok(2 * i as usize),
                CoveringVariant::CovStar => Err(Error::NotCovered(x.to_string())),
            };
        }
        if between(cycle.at(i), x, cycle.at(i + 1)) {
            return Ok(stride * i as usize + stride - 1);
        }
    }
    unreachable!("a cycle covers the circle")
}

impl Covering {
    pub fn locate(&self, x: &RatPoint) -> Result<usize> {
        locate(&self.source, x, self.variant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> RatPoint {
        RatPoint::new(n, d)
    }

    /// Direct reading of the definition: every c-ordered index triple is c-ordered.
    fn is_cycle_by_triples(points: &[RatPoint]) -> bool {
        let n = points.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ordered = (i < j && j < k) || (j < k && k < i) || (k < i && i < j);
                    if ordered && !between(&points[i], &points[j], &points[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn thirds() -> Cycle {
        Cycle::new(vec![p(0, 1), p(1, 3), p(2, 3)]).unwrap()
    }

    #[test]
    fn cycle_examples() {
        assert!(is_cycle(&[p(0, 1), p(1, 4), p(1, 2), p(3, 4)]).unwrap());
        assert!(!is_cycle(&[p(0, 1), p(1, 2), p(1, 4), p(3, 4)]).unwrap());
        assert!(is_cycle(&[p(1, 2), p(3, 4), p(0, 1), p(1, 4)]).unwrap());
        assert!(!is_cycle(&[p(0, 1), p(1, 2), p(0, 1), p(1, 2)]).unwrap());
        assert!(matches!(is_cycle(&[p(0, 1), p(1, 4)]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fast_check_matches_triple_enumeration() {
        // every 4- and 5-tuple over the ninths, exhaustively
        let pts: Vec<RatPoint> = (0..9).map(|i| p(i, 9)).collect();
        let mut idx = vec![0usize; 5];
        for len in [3usize, 4, 5] {
            let total = 9usize.pow(len as u32);
            for code in 0..total {
                let mut c = code;
                for slot in idx.iter_mut().take(len) {
                    *slot = c % 9;
                    c /= 9;
                }
                let tuple: Vec<RatPoint> = idx[..len].iter().map(|&i| pts[i].clone()).collect();
                assert_eq!(is_cycle(&tuple).unwrap(), is_cycle_by_triples(&tuple), "{tuple:?}");
            }
        }
    }

    #[test]
    fn cov_examples() {
        let cov = cov_cells(&thirds(), CoveringVariant::Cov);
        assert_eq!(
            cov.cells,
            vec![
                Cell::Point { at: p(0, 1) },
                Cell::Open { left: p(0, 1), right: p(1, 3) },
                Cell::Point { at: p(1, 3) },
                Cell::Open { left: p(1, 3), right: p(2, 3) },
                Cell::Point { at: p(2, 3) },
                Cell::Open { left: p(2, 3), right: p(0, 1) },
            ]
        );
        let star = cov_cells(&thirds(), CoveringVariant::CovStar);
        assert_eq!(star.cells.len(), 3);
        assert!(star.cells.iter().all(|c| matches!(c, Cell::Open { .. })));
    }

    #[test]
    fn locate_examples() {
        let nu = thirds();
        assert_eq!(locate(&nu, &p(1, 2), CoveringVariant::Cov).unwrap(), 3);
        assert_eq!(locate(&nu, &p(1, 3), CoveringVariant::Cov).unwrap(), 2);
        assert_eq!(locate(&nu, &p(5, 6), CoveringVariant::Cov).unwrap(), 5);
        assert_eq!(locate(&nu, &p(1, 2), CoveringVariant::CovStar).unwrap(), 1);
        assert!(matches!(
            locate(&nu, &p(1, 3), CoveringVariant::CovStar),
            Err(Error::NotCovered(_))
        ));
    }

    #[test]
    fn reflected_cycle_is_a_cycle() {
        let nu = Cycle::new(vec![p(1, 8), p(1, 3), p(2, 3), p(7, 8)]).unwrap();
        let r = nu.reflect();
        assert!(is_cycle(r.points()).unwrap());
        assert_eq!(r.reflect(), nu);
    }
}
