use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcirc::partition::{bell, check_moebius_inversion, enumerate_partitions, moebius, moebius_recursive};
use symcirc::rational::{q, random_q};
use symcirc::SetPartition;

#[test]
fn enumeration_and_examples() {
    for (n, b) in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
        assert_eq!(enumerate_partitions(n).unwrap().len(), b);
        assert_eq!(bell(n) as usize, b);
    }
    assert_eq!(moebius(&SetPartition::discrete(4)), q(1));
    assert_eq!(moebius(&SetPartition::indiscrete(2)), q(-1));
    assert_eq!(moebius(&SetPartition::indiscrete(3)), q(2));
}

#[test]
fn recursive_moebius_agrees() {
    for n in 0..=6 {
        for p in enumerate_partitions(n).unwrap() {
            assert_eq!(moebius(&p), moebius_recursive(&p), "{p:?}");
        }
    }
}

fn maps(a: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..a {
        out = out.into_iter().flat_map(|h| (0..i).map(move |x| [h.clone(), vec![x]].concat())).collect();
    }
    out
}

#[test]
fn inversion_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (a, i) in [(1, 1), (1, 3), (2, 2), (3, 3), (3, 4), (4, 2)] {
        let constant: HashMap<Vec<usize>, _> = maps(a, i).into_iter().map(|h| (h, q(1))).collect();
        assert!(check_moebius_inversion(&constant, a, i).unwrap().holds());
        let random: HashMap<Vec<usize>, _> = maps(a, i).into_iter().map(|h| (h, random_q(&mut rng, 9, 5))).collect();
        assert!(check_moebius_inversion(&random, a, i).unwrap().holds());
    }
    let mut partial: HashMap<Vec<usize>, _> = maps(2, 2).into_iter().map(|h| (h, q(1))).collect();
    partial.remove(&vec![1, 0]);
    assert!(check_moebius_inversion(&partial, 2, 2).is_err());
}

#[test]
fn injection_counts_by_inclusion_exclusion() {
    for a in 0..=5usize {
        let parts = enumerate_partitions(a).unwrap();
        for i in 0..=5usize {
            let total: symcirc::Q = parts.iter().map(|p| moebius(p) * q((i as i64).pow(p.block_count() as u32))).sum();
            let falling: i64 = (0..a as i64).map(|t| i as i64 - t).product();
            assert_eq!(total, q(falling.max(0)), "a={a} i={i}");
        }
    }
}
