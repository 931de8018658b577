use serde::{Deserialize, Serialize};

use super::aut::PLAut;
use crate::kernel::{between, Cycle, RatPoint};

/// A basic identity neighbourhood of the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NbhdDescriptor {
    /// The pointwise stabilizer `G_{a_1, ..., a_n}`.
    Pointwise(Vec<RatPoint>),
    /// `{g : g(a_i) ∈ (a_{i-1}, a_{i+1}) for all i}`.
    CycleNbhd(Cycle),
}

pub fn in_nbhd(g: &PLAut, descriptor: &NbhdDescriptor) -> bool {
    match descriptor {
        NbhdDescriptor::Pointwise(points) => points.iter().all(|a| &g.apply(a) == a),
        NbhdDescriptor::CycleNbhd(cycle) => {
            let n = cycle.len() as isize;
            (0..n).all(|i| between(cycle.at(i - 1), &g.apply(cycle.at(i)), cycle.at(i + 1)))
        }
    }
}
