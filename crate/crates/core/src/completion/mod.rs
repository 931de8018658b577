//! Points of the compactification of Q/Z under its automorphism group, the
//! group action on them, and limit automorphisms built from nested intervals.

mod lazy;
mod point;
mod quad;
mod stream;

pub use lazy::{transport, LazyAut, ModeRecipe, TransportMode, TransportRecipe};
pub use point::{act, act_lazy, c_between_completion, orbit_of, CompletionPoint, IrrRecipe, OrbitLabel};
pub use stream::{dyadic, normalize, IntervalStream, StreamInterval, StreamRecipe, REFINEMENT_CAP};

/// `frac((p + √D) / q)` as a normalized interval stream.
pub fn quad_irrational(d: u64, p: i64, q: u64) -> crate::Result<IntervalStream> {
    IntervalStream::quad(d, p, q)
}
