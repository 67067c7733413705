use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcirc::hompoly::{all_tuples, random_expr, ProductCaps};
use symcirc::oracle::{brute_expr, brute_hom, direct_restricted_product, direct_restricted_sum};
use symcirc::rational::q;
use symcirc::{BipartitePattern, HomPolyExpr, LabelledPattern, WeightedHost};

fn host(rng: &mut ChaCha8Rng, n: usize, m: usize) -> WeightedHost {
    WeightedHost::random(rng, n, m, 4, 3)
}

fn labelled_edge(n: usize, m: usize) -> HomPolyExpr {
    HomPolyExpr::from_pattern(LabelledPattern::new(BipartitePattern::complete(1, 1), vec![0], vec![0]).unwrap(), n, m).unwrap()
}

#[test]
fn swap_matches_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (l, r) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let phi = random_expr(&mut rng, n, m, l, r, 3).unwrap();
        let g = host(&mut rng, n, m);
        let s = phi.swap();
        s.check_certificates().unwrap();
        assert_eq!(s.swap().arity(), phi.arity());
        for (v, w) in all_tuples(n, l, m, r) {
            assert_eq!(s.eval(&w, &v, &g.transpose()).unwrap(), brute_expr(&phi, &v, &w, &g));
        }
    }
    let e = labelled_edge(3, 2);
    let g = WeightedHost::from_fn(3, 2, |i, j| q((5 * i + j) as i64));
    assert_eq!(e.swap().eval(&[1], &[2], &g.transpose()).unwrap(), q(11));
}

#[test]
fn unlabel_and_restricted_sum_match_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (l, r) = (rng.gen_range(1..=3), rng.gen_range(0..=1));
        let phi = random_expr(&mut rng, n, m, l, r, 3).unwrap();
        let g = host(&mut rng, n, m);
        let i = rng.gen_range(0..l);
        let j: Vec<usize> = (0..l).filter(|&x| x != i && rng.gen_bool(0.5)).collect();
        let out = phi.restricted_sum(i, &j).unwrap();
        out.check_certificates().unwrap();
        if !j.is_empty() {
            assert!(out.k().unwrap() >= l + r);
        }
        for (v, w) in all_tuples(n, l - 1, m, r) {
            assert_eq!(out.eval(&v, &w, &g).unwrap(), direct_restricted_sum(&phi, i, &j, &v, &w, &g));
        }
    }
    assert!(HomPolyExpr::ones(2, 0, 3, 3).restricted_sum(0, &[0]).is_err());
    assert!(HomPolyExpr::ones(2, 0, 3, 3).unlabel(2).is_err());
}

#[test]
fn full_unlabelling_is_hom() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let f = BipartitePattern::random(&mut rng, 2, 2, 4);
        let lp = LabelledPattern::new(f.clone(), vec![0, 1], vec![0, 1]).unwrap();
        let e = HomPolyExpr::from_pattern(lp, 3, 2).unwrap();
        let closed = e.unlabel(1).unwrap().unlabel(0).unwrap().swap().unlabel(1).unwrap().unlabel(0).unwrap();
        let g = host(&mut rng, 3, 2);
        assert_eq!(closed.eval(&[], &[], &g.transpose()).unwrap(), brute_hom(&f, &g).unwrap());
    }
}

#[test]
fn tensor_and_glue_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (l, r) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let (l2, r2) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let phi = random_expr(&mut rng, n, m, l, r, 3).unwrap();
        let psi = random_expr(&mut rng, n, m, l, r, 3).unwrap();
        let chi = random_expr(&mut rng, n, m, l2, r2, 2).unwrap();
        let g = host(&mut rng, n, m);
        let glued = phi.glue(&psi).unwrap();
        glued.check_certificates().unwrap();
        assert_eq!(glued.k(), Some(phi.k().unwrap().max(psi.k().unwrap())));
        for (v, w) in all_tuples(n, l, m, r) {
            assert_eq!(glued.eval(&v, &w, &g).unwrap(), brute_expr(&phi, &v, &w, &g) * brute_expr(&psi, &v, &w, &g));
        }
        let t = phi.tensor(&chi).unwrap();
        t.check_certificates().unwrap();
        for (v, w) in all_tuples(n, l + l2, m, r + r2) {
            let direct = brute_expr(&phi, &v[..l], &w[..r], &g) * brute_expr(&chi, &v[l..], &w[r..], &g);
            assert_eq!(t.eval(&v, &w, &g).unwrap(), direct);
        }
    }
    let e = labelled_edge(2, 3);
    let g = WeightedHost::from_fn(2, 3, |i, j| q((i + j + 2) as i64));
    assert_eq!(e.glue(&e).unwrap().eval(&[1], &[2], &g).unwrap(), q(25));
    assert_eq!(e.tensor(&e).unwrap().eval(&[0, 1], &[2, 0], &g).unwrap(), q(4 * 3));
    assert_eq!(HomPolyExpr::ones(1, 1, 2, 3).glue(&e).unwrap().eval(&[0], &[1], &g).unwrap(), q(3));
    assert!(e.glue(&HomPolyExpr::ones(1, 0, 2, 3)).is_err());
    assert!(e.tensor(&HomPolyExpr::ones(1, 0, 3, 3)).is_err());
}

#[test]
fn product_matches_direct_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..12 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let (l, r) = (rng.gen_range(1..=2), rng.gen_range(0..=1));
        let phi = random_expr(&mut rng, n, m, l, r, 2).unwrap();
        let g = host(&mut rng, n, m);
        let i = rng.gen_range(0..l);
        let out = phi.product(i, ProductCaps::default()).unwrap();
        out.check_certificates().unwrap();
        for (v, w) in all_tuples(n, l - 1, m, r) {
            assert_eq!(out.eval(&v, &w, &g).unwrap(), direct_restricted_product(&phi, i, &[], &v, &w, &g));
        }
    }
    let big = HomPolyExpr::ones(1, 0, 6, 2);
    assert!(big.product(0, ProductCaps::default()).is_err());
}

#[test]
fn restricted_product_matches_direct_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..8 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let phi = random_expr(&mut rng, n, m, 2, 0, 1).unwrap();
        let g = host(&mut rng, n, m);
        let out = phi.restricted_product(0, &[1], ProductCaps::default()).unwrap();
        out.check_certificates().unwrap();
        for (v, w) in all_tuples(n, 1, m, 0) {
            assert_eq!(out.eval(&v, &w, &g).unwrap(), direct_restricted_product(&phi, 0, &[1], &v, &w, &g));
        }
    }
    let one = HomPolyExpr::ones(2, 0, 3, 3).restricted_product(0, &[1], ProductCaps::default()).unwrap();
    let g = WeightedHost::constant(3, 3, q(7));
    for v in 0..3 {
        assert_eq!(one.eval(&[v], &[], &g).unwrap(), q(1));
    }
}
