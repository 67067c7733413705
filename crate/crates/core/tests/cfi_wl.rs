use num::bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcirc::cfi::*;
use symcirc::graph::Side;
use symcirc::rational::q;

fn twists(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

fn c4() -> SimpleGraph {
    let g = SimpleGraph::cycle(4).unwrap();
    let s = g.two_colouring().unwrap();
    g.with_sides(s).unwrap()
}

#[test]
fn cfi_sizes() {
    let k2 = SimpleGraph::complete(2);
    let inst = cfi(&k2, &[false, false]).unwrap();
    assert_eq!((inst.graph.vertex_count(), inst.graph.edge_count()), (2, 1));
    for u in twists(4) {
        let inst = cfi(&c4(), &u).unwrap();
        assert_eq!(inst.graph.vertex_count(), 8);
        assert_eq!(inst.graph.vertex_count(), CfiInstance::expected_size(&c4()));
        for (x, y) in inst.graph.edges() {
            assert!(c4().has_edge(inst.rho[x], inst.rho[y]));
        }
    }
    let disconnected = SimpleGraph::new(3, &[(0, 1)]).unwrap();
    assert!(cfi(&disconnected, &[false; 3]).is_err());
}

#[test]
fn c4_twists_by_brute_isomorphism() {
    let g0 = cfi(&c4(), &[false; 4]).unwrap();
    for u in twists(4) {
        let gu = cfi(&c4(), &u).unwrap();
        let even = u.iter().filter(|&&b| b).count() % 2 == 0;
        let iso = find_isomorphism(&g0.graph, &gu.graph).unwrap();
        assert_eq!(iso.is_some(), even, "twist {u:?}");
        assert_eq!(cfi_twist_isomorphism(&g0, &gu).is_some(), even);
        let same = cfi_hom_count(&c4(), &g0).unwrap() == cfi_hom_count(&c4(), &gu).unwrap();
        assert_eq!(same, even);
    }
}

#[test]
fn hom_counters_agree() {
    let (g0, g1) = cfi_even_odd(&c4()).unwrap();
    let k1 = SimpleGraph::new(1, &[]).unwrap();
    let k2 = SimpleGraph::complete(2);
    assert_eq!(hom_count(&k1, &g0.graph).unwrap(), BigInt::from(8));
    assert_eq!(hom_count(&k2, &g0.graph).unwrap(), BigInt::from(2 * g0.graph.edge_count()));
    let plain = SimpleGraph::cycle(4).unwrap();
    let (h0, h1) = (brute_hom_count(&plain, &g0.graph).unwrap(), brute_hom_count(&plain, &g1.graph).unwrap());
    assert!(h0 > h1);
    for f in symcirc::cfi::all_graphs(4, false).unwrap() {
        for g in [&g0, &g1] {
            let b = brute_hom_count(&f, &g.graph).unwrap();
            assert_eq!(dp_hom_count(&f, &g.graph).unwrap(), q(0) + num::BigRational::from_integer(b.clone()));
            assert_eq!(cfi_hom_count(&f, g).unwrap(), b);
        }
    }
    let w = SimpleGraph::complete(3).with_weights([((0, 1), q(2)), ((1, 2), q(3))]).unwrap();
    assert_eq!(weighted_hom_count(&k2, &w).unwrap(), q(2 * (2 + 3 + 1)));
    assert_eq!(dp_hom_count(&SimpleGraph::path(3), &w).unwrap(), weighted_hom_count(&SimpleGraph::path(3), &w).unwrap());
}

#[test]
fn wl_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (g0, g1) = cfi_even_odd(&SimpleGraph::complete_bipartite(3, 3)).unwrap();
    assert!(ck_equivalent(&g0.graph, &g1.graph, 3).equivalent);
    for k in 1..=2 {
        let mut p: Vec<usize> = (0..g0.graph.vertex_count()).collect();
        p.shuffle(&mut rng);
        assert!(k_wl_equivalent(&g0.graph, &g0.graph.relabel(&p), k).equivalent);
    }
    let star = SimpleGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let tri = SimpleGraph::new(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(!k_wl_equivalent(&star, &tri, 1).equivalent);
    let c6 = SimpleGraph::cycle(6).unwrap();
    let two_triangles = SimpleGraph::complete(3).disjoint_union(&SimpleGraph::complete(3)).unwrap();
    assert!(k_wl_equivalent(&c6, &two_triangles, 1).equivalent);
    assert!(!k_wl_equivalent(&c6, &two_triangles, 2).equivalent);
}

#[test]
fn oddomorphism_examples() {
    let c4 = SimpleGraph::cycle(4).unwrap();
    let w = exists_weak_oddomorphism(&c4, &c4).unwrap().unwrap();
    assert_eq!(w.phi.len(), 4);
    assert!(exists_weak_oddomorphism(&SimpleGraph::new(1, &[]).unwrap(), &SimpleGraph::complete(2)).unwrap().is_none());
    let (g0, g1) = cfi_even_odd(&c4).unwrap();
    for n in 1..=4 {
        for f in all_graphs(n, false).unwrap() {
            let (a, b) = (cfi_hom_count(&f, &g0).unwrap(), cfi_hom_count(&f, &g1).unwrap());
            assert!(a >= b);
            assert_eq!(a > b, exists_weak_oddomorphism(&f, &c4).unwrap().is_some());
        }
    }
}

#[test]
fn double_cover_examples() {
    let k2 = SimpleGraph::complete(2);
    let cover = bipartite_double_cover(&k2).unwrap();
    assert_eq!((cover.vertex_count(), cover.edge_count()), (4, 2));
    let f = SimpleGraph::complete_bipartite(1, 1);
    assert_eq!(hom_count(&f, &cover).unwrap(), BigInt::from(2));
    assert_eq!(hom_count(&SimpleGraph::complete(2), &k2).unwrap(), BigInt::from(2));
    let c6 = SimpleGraph::cycle(6).unwrap();
    let tri_cover = bipartite_double_cover(&SimpleGraph::complete(3)).unwrap();
    let plain = SimpleGraph::new(6, &tri_cover.edges().collect::<Vec<_>>()).unwrap();
    assert!(find_isomorphism(&plain, &c6).unwrap().is_some());
    let g = SimpleGraph::grid(2, 3);
    let plain_g = SimpleGraph::new(6, &g.edges().collect::<Vec<_>>()).unwrap();
    let h = bipartite_double_cover(&plain_g).unwrap();
    let swapped_sides: Vec<Side> = h.sides().unwrap().iter().map(|s| if *s == Side::Left { Side::Right } else { Side::Left }).collect();
    let h_swapped = h.clone().with_sides(swapped_sides).unwrap();
    for f in [SimpleGraph::complete_bipartite(1, 2), SimpleGraph::grid(2, 2), SimpleGraph::complete_bipartite(2, 3)] {
        let plain_f = SimpleGraph::new(f.vertex_count(), &f.edges().collect::<Vec<_>>()).unwrap();
        let direct = hom_count(&plain_f, &plain_g).unwrap();
        assert_eq!(hom_count(&f, &h).unwrap(), direct);
        assert_eq!(hom_count(&f, &h_swapped).unwrap(), direct);
    }
}

#[test]
fn matchings() {
    let k33 = SimpleGraph::complete_bipartite(3, 3);
    assert_eq!(perfect_matching_count(&k33).unwrap(), BigInt::from(6));
    assert_eq!(matching_counts(&k33, 1).unwrap(), BigInt::from(9));
    assert_eq!(matching_counts(&SimpleGraph::cycle(5).unwrap(), 3).unwrap(), BigInt::from(0));
}

#[test]
fn width_pairs_and_experiment() {
    let pairs = generate_ck_pairs(2, 8, 1).unwrap();
    assert_eq!(pairs.len(), 8);
    let constant = counting_width_experiment(&|_| Ok(q(7)), &pairs, 2).unwrap();
    assert!(constant.gaps.is_empty());
    let edges = counting_width_experiment(&|g| Ok(g.entries().iter().sum()), &pairs, 2).unwrap();
    assert!(edges.gaps.is_empty());
}
