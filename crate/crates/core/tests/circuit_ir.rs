use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcirc::circuit::{
    apply_permutation, deserialize, orbit_sizes_by_enumeration, orbit_stats, serialize, verify_symmetry, OrbitMode, Perm,
};
use symcirc::rational::{q, qf};
use symcirc::synth::{synth_hom, synth_sub_moebius};
use symcirc::{BipartitePattern, CircuitBuilder, Group, WeightedHost};

fn k2() -> BipartitePattern {
    BipartitePattern::complete(1, 1)
}

#[test]
fn evaluation_and_size_examples() {
    let host = WeightedHost::from_rows(vec![vec![q(2), q(5)], vec![q(1), q(3)]]).unwrap();
    let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
    let x = b.input(0, 1);
    let single = b.finish(x);
    assert_eq!(single.evaluate(&host).unwrap(), q(5));
    assert_eq!(single.size(), 1);

    let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
    let c = b.constant(qf(3, 7));
    assert_eq!(b.finish(c).evaluate(&host).unwrap(), qf(3, 7));

    let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
    let x = b.input(0, 0);
    let sq = b.mul([(x, 2)]);
    let square = b.finish(sq);
    assert_eq!(square.evaluate(&host).unwrap(), q(4));
    assert_eq!(square.size(), 4);

    let rep = synth_hom(&k2(), None, 2, 2).unwrap();
    assert_eq!(rep.within_bound, Some(true));
}

#[test]
fn symmetry_examples() {
    let c = synth_hom(&k2(), None, 2, 2).unwrap().circuit;
    let id = apply_permutation(&c, &Perm::identity(2, 2)).unwrap();
    assert_eq!(id, (0..c.gate_count()).collect::<Vec<_>>());
    apply_permutation(&c, &Perm { rows: vec![1, 0], cols: vec![0, 1] }).unwrap();
    verify_symmetry(&c).unwrap();

    let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
    let x = b.input(0, 0);
    let lone = b.finish(x);
    assert!(apply_permutation(&lone, &Perm { rows: vec![1, 0], cols: vec![0, 1] }).is_err());
    assert!(verify_symmetry(&lone).is_err());
}

#[test]
fn orbit_examples() {
    let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
    let xs: Vec<_> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    let ids: Vec<_> = xs.into_iter().map(|(i, j)| b.input(i, j)).collect();
    let s = b.sum(ids.clone());
    let c = b.finish(s);
    let sizes = orbit_sizes_by_enumeration(&c).unwrap();
    assert!(ids.iter().all(|&g| sizes[g] == 4));
    assert_eq!(sizes[c.output()], 1);

    let c4 = synth_hom(&BipartitePattern::cycle(2), None, 3, 3).unwrap().circuit;
    let stats = orbit_stats(&c4, OrbitMode::Exact).unwrap();
    assert!(stats.max_orbit.unwrap() <= 36);
    assert!(stats.max_orbit.unwrap() as u128 <= stats.orbit_bound);
    assert_eq!(orbit_sizes_by_enumeration(&c4).unwrap()[c4.output()], 1);
}

#[test]
fn evaluation_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = BipartitePattern::new(2, 2, &[(0, 0, 2), (0, 1, 1), (1, 1, 1)]).unwrap();
    let circuits = [
        synth_hom(&f, None, 3, 2).unwrap().circuit,
        synth_sub_moebius(&BipartitePattern::path(3), 3, 2).unwrap().circuit,
    ];
    for c in &circuits {
        for _ in 0..10 {
            let g = WeightedHost::random(&mut rng, 3, 2, 9, 4);
            let mut pi: Vec<usize> = (0..3).collect();
            let mut sigma: Vec<usize> = (0..2).collect();
            pi.shuffle(&mut rng);
            sigma.shuffle(&mut rng);
            assert_eq!(c.evaluate(&g).unwrap(), c.evaluate(&g.permuted(&pi, &sigma)).unwrap());
        }
    }
}

#[test]
fn text_round_trip_and_rejections() {
    for c in [
        synth_hom(&BipartitePattern::cycle(2), None, 2, 3).unwrap().circuit,
        synth_sub_moebius(&BipartitePattern::path(3), 2, 2).unwrap().circuit,
    ] {
        assert_eq!(deserialize(&serialize(&c)).unwrap(), c);
    }
    assert!(deserialize("c circuit n=1 m=1 group=symnm out=1\ng 0 ADD 1*1\ng 1 ADD 0*1\n").is_err());
    assert!(deserialize("c circuit n=1 m=1 group=symnm out=2\ng 0 IN 0 0\ng 1 IN 0 0\ng 2 ADD 0*1 99*1\n").is_err());
}
