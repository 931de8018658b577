//! Q/Z, its circular order, arcs, cycles and the coverings they induce.

mod cycle;
mod interval;
mod order;
mod point;

pub use cycle::{cov_cells, is_circularly_ordered, is_cycle, locate, Cell, Covering, CoveringVariant, Cycle};
pub use interval::{Interval, IntervalKind};
pub use order::{between, ccw_length, circle_distance, cut_compare};
pub use point::{format_ratio, frac, is_canonical, parse_ratio, RatPoint};
