//! Piecewise-linear automorphisms of Q/Z with rational breakpoints, the
//! computable dense subgroup standing in for the full automorphism group.

mod aut;
mod metric;
mod moveset;
mod nbhd;
mod random;

pub use aut::{extend, PLAut};
pub use metric::{pointwise_distance, sup_distance};
pub use moveset::{move_set, MoveSet};
pub use nbhd::{in_nbhd, NbhdDescriptor};
pub use random::{random_aut, random_aut_fixing, random_point, sample_aut, seeded, SeededRng};
