use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{between, cut_compare, Cycle, RatPoint};
use crate::pl::{extend, in_nbhd, move_set, random_point, seeded, NbhdDescriptor, PLAut};

/// What a factor of a witness word is claimed to belong to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorTag {
    Nbhd(NbhdDescriptor),
    /// An element taken from outside any named neighbourhood.
    Free,
}

impl FactorTag {
    fn holds(&self, g: &PLAut) -> bool {
        match self {
            FactorTag::Nbhd(d) => in_nbhd(g, d),
            FactorTag::Free => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFactor {
    pub map: PLAut,
    pub tag: FactorTag,
}

/// Evidence that `claimed_product = factors[0] ∘ factors[1] ∘ ...` with every
/// factor inside its tagged neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordWitness {
    pub factors: Vec<WordFactor>,
    pub claimed_product: PLAut,
    pub verification: bool,
}

pub const VERIFICATION_SAMPLES: usize = 1000;

impl WordWitness {
    pub fn new(factors: Vec<(PLAut, FactorTag)>, claimed_product: PLAut) -> Self {
        let factors = factors.into_iter().map(|(map, tag)| WordFactor { map, tag }).collect();
        let mut w = WordWitness { factors, claimed_product, verification: false };
        w.verification = w.verify();
        w
    }

    pub fn product(&self) -> PLAut {
        self.factors
            .iter()
            .fold(PLAut::identity(), |acc, f| acc.compose(&f.map))
    }

    /// Recomputes the certificate: tag memberships, exact equality of the
    /// canonical forms, and agreement at sampled points.
    pub fn verify(&self) -> bool {
        if !self.factors.iter().all(|f| f.tag.holds(&f.map)) {
            return false;
        }
        if self.product() != self.claimed_product.canonical() {
            return false;
        }
        let mut rng = seeded(0x5eed);
        (0..VERIFICATION_SAMPLES).all(|_| {
            let x = random_point(&mut rng, 1000);
            let word = self.factors.iter().rev().fold(x.clone(), |y, f| f.map.apply(&y));
            word == self.claimed_product.apply(&x)
        })
    }

    fn reflect(&self) -> WordWitness {
        let tag = |t: &FactorTag| match t {
            FactorTag::Nbhd(NbhdDescriptor::Pointwise(ps)) => {
                FactorTag::Nbhd(NbhdDescriptor::Pointwise(ps.iter().map(RatPoint::reflect).collect()))
            }
            FactorTag::Nbhd(NbhdDescriptor::CycleNbhd(c)) => FactorTag::Nbhd(NbhdDescriptor::CycleNbhd(c.reflect())),
            FactorTag::Free => FactorTag::Free,
        };
        WordWitness::new(
            self.factors.iter().map(|f| (f.map.reflect(), tag(&f.tag))).collect(),
            self.claimed_product.reflect(),
        )
    }
}

/// Output of [`witness_u1`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct U1Witness {
    /// Fixes every cycle point and is the identity outside `(s, t)`.
    pub phi: PLAut,
    /// `g` after the normalization `g(a_k) ∈ (a_{k-1}, a_k)`.
    pub g: PLAut,
    pub s: RatPoint,
    pub t: RatPoint,
    pub witness: WordWitness,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// Decomposes `f ∈ M_k` as `g · φ⁻¹ · g⁻¹ · p` with `g^{±1}` in the cycle
/// neighbourhood of `ν` and `φ, p ∈ G_ν`. `k` is 1-based.
///
/// `g` must satisfy `g^{±1}(a_i) ∈ (a_{i-1}, a_{i+1})` for all `i` and keep
/// `f(a_k)` on its side of `a_k`: `g^{±1}(f(a_k)) ∈ (a_k, a_{k+1})` when
/// `f(a_k) ∈ (a_k, a_{k+1})`, mirrored otherwise. It must move `a_k`.
pub fn witness_u1(cycle: &Cycle, k: usize, f: &PLAut, g: &PLAut) -> Result<U1Witness> {
    let n = cycle.len();
    if k == 0 || k > n {
        return Err(reject(format!("k must lie in 1..={n}")));
    }
    let i = k as isize - 1;
    let (prev, ak, next) = (cycle.at(i - 1), cycle.at(i), cycle.at(i + 1));
    if !move_set(f).is_within(prev, next) {
        return Err(reject("f must fix every point outside (a_{k-1}, a_{k+1})"));
    }
    let fak = f.apply(ak);
    if &fak == ak {
        let pointwise = FactorTag::Nbhd(NbhdDescriptor::Pointwise(cycle.points().to_vec()));
        return Ok(U1Witness {
            phi: PLAut::identity(),
            g: g.clone(),
            s: ak.clone(),
            t: ak.clone(),
            witness: WordWitness::new(vec![(f.clone(), pointwise)], f.clone()),
        });
    }
    if between(prev, &fak, ak) {
        // mirror image of the forward case under x -> -x
        let w = forward_u1(&cycle.reflect(), n + 1 - k, &f.reflect(), &g.reflect())?;
        return Ok(U1Witness {
            phi: w.phi.reflect(),
            g: w.g.reflect(),
            s: w.t.reflect(),
            t: w.s.reflect(),
            witness: w.witness.reflect(),
        });
    }
    forward_u1(cycle, k, f, g)
}

/// The branch `f(a_k) ∈ (a_k, a_{k+1})`.
fn forward_u1(cycle: &Cycle, k: usize, f: &PLAut, g: &PLAut) -> Result<U1Witness> {
    let i = k as isize - 1;
    let a = |j: isize| cycle.at(i + j);
    let fak = f.apply(a(0));
    let nbhd = NbhdDescriptor::CycleNbhd(cycle.clone());
    let mut g = g.clone();
    let mut g_inv = g.inverse();
    if !in_nbhd(&g, &nbhd) || !in_nbhd(&g_inv, &nbhd) {
        return Err(reject("g and its inverse must satisfy g(a_i) ∈ (a_{i-1}, a_{i+1}) for all i"));
    }
    if !between(a(0), &g.apply(&fak), a(1)) || !between(a(0), &g_inv.apply(&fak), a(1)) {
        return Err(reject("g and its inverse must keep f(a_k) inside (a_k, a_{k+1})"));
    }
    let gak = g.apply(a(0));
    if &gak == a(0) {
        return Err(reject("g must move a_k"));
    }
    if between(a(0), &gak, a(1)) {
        std::mem::swap(&mut g, &mut g_inv);
    }

    // s: the later of g⁻¹(a_{k-1}) and a_{k-1} in the cut order at a_{k-2}
    let back = g_inv.apply(a(-1));
    let s = if cut_compare(a(-2), &back, a(-1)).is_gt() { back } else { a(-1).clone() };
    // t: the earlier of g⁻¹(a_{k+1}) and a_{k+1} in the cut order at g⁻¹(f(a_k))
    let moved = g_inv.apply(&fak);
    let forth = g_inv.apply(a(1));
    let t = if cut_compare(&moved, &forth, a(1)).is_lt() { forth } else { a(1).clone() };

    let mut pairs: Vec<(RatPoint, RatPoint)> = cycle.points().iter().map(|p| (p.clone(), p.clone())).collect();
    pairs.push((moved.clone(), g_inv.apply(a(0))));
    for e in [&s, &t] {
        if !pairs.iter().any(|(x, _)| x == e) {
            pairs.push((e.clone(), e.clone()));
        }
    }
    let phi = extend(&pairs).map_err(|e| reject(format!("φ does not exist: {e}")))?;

    let fixed = g.compose(&phi).compose(&g_inv).compose(f);
    let pointwise = FactorTag::Nbhd(NbhdDescriptor::Pointwise(cycle.points().to_vec()));
    let witness = WordWitness::new(
        vec![
            (g.clone(), FactorTag::Nbhd(nbhd.clone())),
            (phi.inverse(), pointwise.clone()),
            (g_inv, FactorTag::Nbhd(nbhd)),
            (fixed, pointwise),
        ],
        f.clone(),
    );
    Ok(U1Witness { phi, g, s, t, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalityCase {
    /// `f(a) = a`.
    Trivial,
    /// `g(a) = f(a)`.
    Equal,
    /// `[a, g(a), f(a)]`.
    GFirst,
    /// `[a, f(a), g(a)]`.
    FFirst,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityWitness {
    pub case: MaximalityCase,
    pub phi: PLAut,
    pub h: PLAut,
    pub witness: WordWitness,
}

/// Writes `f` as a word in `G_a` and `g^{±1}`, for any `g` moving `a`:
/// `f = g h` when `g(a) = f(a)`, `f = φ⁻¹ g h` otherwise, with `φ, h ∈ G_a`.
pub fn maximality_witness(a: &RatPoint, f: &PLAut, g: &PLAut) -> Result<MaximalityWitness> {
    let ga = g.apply(a);
    if &ga == a {
        return Err(reject("g ∉ G_a required"));
    }
    let stab = FactorTag::Nbhd(NbhdDescriptor::Pointwise(vec![a.clone()]));
    let fa = f.apply(a);
    if &fa == a {
        return Ok(MaximalityWitness {
            case: MaximalityCase::Trivial,
            phi: PLAut::identity(),
            h: f.clone(),
            witness: WordWitness::new(vec![(f.clone(), stab)], f.clone()),
        });
    }
    let g_inv = g.inverse();
    if fa == ga {
        let h = g_inv.compose(f);
        let witness = WordWitness::new(vec![(g.clone(), FactorTag::Free), (h.clone(), stab)], f.clone());
        return Ok(MaximalityWitness { case: MaximalityCase::Equal, phi: PLAut::identity(), h, witness });
    }
    let case = if between(a, &ga, &fa) { MaximalityCase::GFirst } else { MaximalityCase::FFirst };
    let phi = extend(&[(a.clone(), a.clone()), (fa, ga)])?;
    let h = g_inv.compose(&phi).compose(f);
    let witness = WordWitness::new(
        vec![(phi.inverse(), stab.clone()), (g.clone(), FactorTag::Free), (h.clone(), stab)],
        f.clone(),
    );
    Ok(MaximalityWitness { case, phi, h, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> RatPoint {
        RatPoint::new(n, d)
    }

    fn quarters() -> Cycle {
        Cycle::new(vec![p(0, 1), p(1, 4), p(1, 2), p(3, 4)]).unwrap()
    }

    fn f_example() -> PLAut {
        extend(&[(p(0, 1), p(0, 1)), (p(1, 4), p(3, 8)), (p(1, 2), p(1, 2)), (p(3, 4), p(3, 4))]).unwrap()
    }

    /// Moves each quarter point a little backwards and keeps 3/8 inside (1/4, 1/2).
    fn g_example() -> PLAut {
        extend(&[(p(0, 1), p(-1, 32)), (p(1, 4), p(7, 32)), (p(3, 8), p(11, 32)), (p(1, 2), p(15, 32)), (p(3, 4), p(23, 32))])
            .unwrap()
    }

    #[test]
    fn u1_example() {
        let nu = quarters();
        let g = g_example();
        assert!(between(&p(0, 1), &g.apply(&p(1, 4)), &p(1, 4)));
        let w = witness_u1(&nu, 2, &f_example(), &g).unwrap();
        assert!(w.witness.verification);
        assert!(in_nbhd(&w.phi, &NbhdDescriptor::Pointwise(nu.points().to_vec())));
        assert!(move_set(&w.phi).is_within(&w.s, &w.t));
        let fixed = &w.witness.factors[3].map;
        for a in nu.points() {
            assert_eq!(&fixed.apply(a), a);
        }
        // the inverse of g moves a_k forwards; normalization brings it back
        let w2 = witness_u1(&nu, 2, &f_example(), &g.inverse()).unwrap();
        assert!(w2.witness.verification);
        assert_eq!(w2.g, g);
    }

    #[test]
    fn u1_mirrored_branch() {
        let nu = quarters();
        let f = extend(&[(p(0, 1), p(0, 1)), (p(1, 4), p(1, 8)), (p(1, 2), p(1, 2))]).unwrap();
        let g = extend(&[(p(0, 1), p(1, 32)), (p(1, 8), p(5, 32)), (p(1, 4), p(9, 32)), (p(1, 2), p(17, 32)), (p(3, 4), p(25, 32))])
            .unwrap();
        let w = witness_u1(&nu, 2, &f, &g).unwrap();
        assert!(w.witness.verification);
        assert!(in_nbhd(&w.phi, &NbhdDescriptor::Pointwise(nu.points().to_vec())));
    }

    #[test]
    fn u1_degenerate_and_rejections() {
        let nu = quarters();
        let fixing = extend(&[(p(0, 1), p(0, 1)), (p(1, 4), p(1, 4)), (p(3, 8), p(7, 16)), (p(1, 2), p(1, 2))]).unwrap();
        let w = witness_u1(&nu, 2, &fixing, &g_example()).unwrap();
        assert!(w.phi.is_identity());
        assert!(w.witness.verification);

        let stuck = extend(&[(p(0, 1), p(1, 32)), (p(1, 4), p(1, 4)), (p(1, 2), p(15, 32)), (p(3, 4), p(23, 32))]).unwrap();
        let err = witness_u1(&nu, 2, &f_example(), &stuck).unwrap_err();
        assert_eq!(err, Error::Precondition("g must move a_k".into()));

        let wide = extend(&[(p(0, 1), p(1, 8)), (p(1, 2), p(1, 2))]).unwrap();
        assert!(witness_u1(&nu, 2, &wide, &g_example()).is_err());
        assert!(witness_u1(&nu, 5, &f_example(), &g_example()).is_err());
    }

    #[test]
    fn maximality_cases() {
        let a = p(0, 1);
        let g = extend(&[(p(0, 1), p(1, 4)), (p(1, 2), p(2, 3))]).unwrap();
        let same = extend(&[(p(0, 1), p(1, 4)), (p(1, 3), p(1, 2))]).unwrap();
        let w = maximality_witness(&a, &same, &g).unwrap();
        assert_eq!(w.case, MaximalityCase::Equal);
        assert!(w.phi.is_identity());
        assert_eq!(w.h.apply(&a), a);
        assert!(w.witness.verification);

        let other = extend(&[(p(0, 1), p(1, 3)), (p(1, 2), p(3, 4))]).unwrap();
        let w = maximality_witness(&a, &other, &g).unwrap();
        assert_eq!(w.case, MaximalityCase::GFirst);
        assert_eq!(w.phi.apply(&p(1, 3)), p(1, 4));
        assert_eq!(w.phi.apply(&a), a);
        assert!(w.witness.verification);
        let rebuilt = w.phi.inverse().compose(&g).compose(&w.h);
        assert_eq!(rebuilt, other.canonical());

        let early = extend(&[(p(0, 1), p(1, 8)), (p(1, 2), p(3, 4))]).unwrap();
        assert_eq!(maximality_witness(&a, &early, &g).unwrap().case, MaximalityCase::FFirst);

        let fixed = extend(&[(p(0, 1), p(0, 1)), (p(1, 2), p(1, 3))]).unwrap();
        let w = maximality_witness(&a, &fixed, &g).unwrap();
        assert_eq!(w.case, MaximalityCase::Trivial);
        assert!(w.witness.verification);

        assert!(maximality_witness(&a, &other, &fixed).is_err());
    }

    #[test]
    fn tampered_witness_fails() {
        let w = maximality_witness(&p(0, 1), &extend(&[(p(0, 1), p(1, 3))]).unwrap(), &extend(&[(p(0, 1), p(1, 4))]).unwrap())
            .unwrap();
        let mut bad = w.witness.clone();
        bad.claimed_product = PLAut::identity();
        assert!(!bad.verify());
        let mut bad = w.witness;
        bad.factors[0].tag = FactorTag::Nbhd(NbhdDescriptor::Pointwise(vec![p(1, 2)]));
        assert!(!bad.verify());
    }
}
