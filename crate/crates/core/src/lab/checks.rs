use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::completion::LazyAut;
use crate::error::{Error, Result};
use crate::kernel::RatPoint;
use crate::pl::{sample_aut, seeded, PLAut};

const SAMPLE_BUDGET: usize = 6;
const SAMPLE_BOUND: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "direction", rename_all = "snake_case")]
pub enum ConjugationFailure {
    /// `h ∈ G_a` but `g h g⁻¹ ∉ G_{g(a)}`.
    Forward { h: PLAut },
    /// `h ∈ G_{g(a)}` but `g⁻¹ h g ∉ G_a`.
    Reverse { h: PLAut },
    /// Membership of a free `h` in `G_a` disagrees with that of its conjugate in `G_{g(a)}`.
    Adversarial { h: PLAut },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub samples: usize,
    pub failures: Vec<ConjugationFailure>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples `h` fixing `a`, `h` fixing `g(a)` and unconstrained `h`, and checks
/// `g G_a g⁻¹ = G_{g(a)}` on each.
pub fn conjugation_check(g: &PLAut, a: &RatPoint, samples: usize, seed: u64) -> Result<ConjugationReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    let mut rng = seeded(seed);
    let g_inv = g.inverse();
    let ga = g.apply(a);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let h = sample_aut(&mut rng, SAMPLE_BUDGET, SAMPLE_BOUND, Some(a));
        if g.compose(&h).compose(&g_inv).apply(&ga) != ga {
            failures.push(ConjugationFailure::Forward { h });
        }
        let h = sample_aut(&mut rng, SAMPLE_BUDGET, SAMPLE_BOUND, Some(&ga));
        if g_inv.compose(&h).compose(g).apply(a) != *a {
            failures.push(ConjugationFailure::Reverse { h });
        }
        // a quarter of the free draws fix `a`, so both outcomes are exercised
        let fixed = rng.gen_ratio(1, 4).then_some(a);
        let h = sample_aut(&mut rng, SAMPLE_BUDGET, SAMPLE_BOUND, fixed);
        let before = h.apply(a) == *a;
        let after = g.compose(&h).compose(&g_inv).apply(&ga) == ga;
        if before != after {
            failures.push(ConjugationFailure::Adversarial { h });
        }
    }
    Ok(ConjugationReport { samples, failures })
}

/// Number of stages compared past the exclusion index.
pub const STABILIZATION_LOOKAHEAD: usize = 5;

/// The least `n` with `x` outside every level-`n` domain interval, after
/// checking that stages `n..=n+5` agree at `x`.
pub fn stabilization_index(g: &LazyAut, x: &RatPoint) -> Result<usize> {
    let n = g.first_exclusion(x)?;
    let y = g.stage(n)?.apply(x);
    for m in n + 1..=n + STABILIZATION_LOOKAHEAD {
        if g.stage(m)?.apply(x) != y {
            return Err(Error::InvalidInput(format!("stages {n} and {m} disagree at {x}")));
        }
    }
    Ok(n)
}
