use qcircle::completion::{transport, IntervalStream, TransportMode};
use qcircle::kernel::RatPoint;
use qcircle::lab::{
    conjugation_check, maximality_instance, maximality_witness, stabilization_index, u1_instance, witness_u1, Branch,
    MaximalityCase, WordWitness,
};
use qcircle::pl::{in_nbhd, move_set, random_aut, random_point, seeded, NbhdDescriptor};

#[test]
fn u1_witnesses_on_random_instances() {
    for seed in 0..30 {
        for branch in [Branch::Forward, Branch::Mirrored] {
            let inst = u1_instance(seed, branch);
            let w = witness_u1(&inst.cycle, inst.k, &inst.f, &inst.g).unwrap();
            assert!(w.witness.verification, "seed {seed} {branch:?}");
            let points = inst.cycle.points();
            assert!(in_nbhd(&w.phi, &NbhdDescriptor::Pointwise(points.to_vec())));
            // g φ g⁻¹ f fixes the cycle
            let p = w.g.compose(&w.phi).compose(&w.g.inverse()).compose(&inst.f);
            assert!(points.iter().all(|a| &p.apply(a) == a));
            assert!(move_set(&w.phi).is_within(&w.s, &w.t));
        }
    }
}

#[test]
fn maximality_witnesses_on_random_instances() {
    let cases = [MaximalityCase::Equal, MaximalityCase::GFirst, MaximalityCase::FFirst];
    let mut rng = seeded(3);
    for seed in 0..20 {
        for case in cases {
            let inst = maximality_instance(seed, case);
            let w = maximality_witness(&inst.a, &inst.f, &inst.g).unwrap();
            assert_eq!(w.case, case);
            assert_eq!(w.h.apply(&inst.a), inst.a);
            assert_eq!(w.phi.apply(&inst.a), inst.a);
            let rebuilt = w.phi.inverse().compose(&inst.g).compose(&w.h);
            for _ in 0..100 {
                let x = random_point(&mut rng, 1000);
                assert_eq!(rebuilt.apply(&x), inst.f.apply(&x));
            }
        }
        let inst = maximality_instance(seed, MaximalityCase::Trivial);
        let w = maximality_witness(&inst.a, &inst.f, &inst.g).unwrap();
        assert!(w.phi.is_identity() && w.witness.factors.len() == 1 && w.witness.verification);
    }
}

#[test]
fn witnesses_serialize_with_their_factors() {
    let inst = u1_instance(7, Branch::Forward);
    let w = witness_u1(&inst.cycle, inst.k, &inst.f, &inst.g).unwrap().witness;
    let text = serde_json::to_string(&w).unwrap();
    let back: WordWitness = serde_json::from_str(&text).unwrap();
    assert_eq!(back, w);
    assert_eq!(back.factors.len(), 4);
    assert!(back.verify());
}

#[test]
fn conjugation_has_no_failures() {
    for seed in 0..20 {
        let g = random_aut(6, 80, seed);
        let a = random_point(&mut seeded(seed + 100), 80);
        let report = conjugation_check(&g, &a, 25, seed).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }
}

#[test]
fn stabilization_index_is_monotone() {
    let u = IntervalStream::quad(2, 0, 1).unwrap();
    let v = IntervalStream::quad(7, 0, 1).unwrap();
    let g = transport(&u, &v, TransportMode::Plain).unwrap();
    for k in 0..60 {
        let x = RatPoint::new(k, 60);
        let idx = stabilization_index(&g, &x).unwrap();
        for n in 1..=idx + 3 {
            let outside = g.domain_intervals(n).unwrap().iter().all(|iv| !iv.contains_open(&x));
            assert_eq!(outside, n >= idx);
        }
    }
}
