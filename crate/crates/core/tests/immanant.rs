use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcirc::circuit::verify_symmetry;
use symcirc::immanant::*;
use symcirc::oracle::{circuits_equal, ExpandCaps};
use symcirc::rational::{q, random_q};
use symcirc::synth::extract_coefficient;
use symcirc::WeightedHost;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> WeightedHost {
    WeightedHost::from_fn(n, n, |_, _| random_q(rng, 6, 5))
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=6 {
        let c = synth_symmetric_determinant(n).unwrap();
        if n <= 4 {
            verify_symmetry(&c).unwrap();
        }
        for _ in 0..3 {
            let m = random_matrix(&mut rng, n);
            assert_eq!(c.evaluate(&m).unwrap(), cofactor_determinant(&m).unwrap());
        }
    }
}

#[test]
fn imm_fi_matches_its_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (n, idx) in [(3, vec![1]), (3, vec![0, 1]), (3, vec![2]), (4, vec![1, 1]), (4, vec![0, 0, 1]), (4, vec![0, 2])] {
        let c = synth_imm_fi(&idx, n).unwrap();
        for _ in 0..3 {
            let m = random_matrix(&mut rng, n);
            let want = brute_class_sum(&m, |p| f_i_value(&idx, p)).unwrap();
            assert_eq!(c.evaluate(&m).unwrap(), want, "I = {idx:?}, n = {n}");
        }
    }
}

#[test]
fn grid_interpolation_agrees_with_generic_extraction() {
    for (n, idx) in [(3usize, vec![1usize]), (3, vec![0, 1]), (3, vec![2])] {
        let s = synth_sum_of_determinants(n, &idx).unwrap();
        let slots: Vec<usize> = idx.iter().enumerate().flat_map(|(l, &e)| std::iter::repeat_n(l + 1, e)).collect();
        let vars: Vec<u32> = (0..slots.len() as u32).collect();
        let generic = extract_coefficient(&s, &vars, &slots, &slots).unwrap();
        let direct = synth_imm_fi(&idx, n).unwrap();
        assert!(!circuits_equal(&generic, &direct, 4, 9, Some(ExpandCaps::default())).unwrap().is_different());
    }
}

#[test]
fn immanants_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let caps = ImmanantCaps { max_b: 4, max_n: 6 };
    for n in 1..=4 {
        for lambda in IntegerPartition::all(n) {
            let s = synth_immanant(&lambda, caps, 17).unwrap();
            if n <= 3 {
                verify_symmetry(&s.circuit).unwrap();
            }
            for _ in 0..4 {
                let m = random_matrix(&mut rng, n);
                assert_eq!(s.circuit.evaluate(&m).unwrap(), brute_force_immanant(&lambda, &m).unwrap(), "λ = {lambda}");
            }
        }
    }
    let perm = synth_immanant(&IntegerPartition::new(vec![3]).unwrap(), caps, 1).unwrap();
    assert_eq!(perm.circuit.evaluate(&WeightedHost::constant(3, 3, q(1))).unwrap(), q(6));
    let det = synth_immanant(&IntegerPartition::new(vec![1, 1, 1]).unwrap(), caps, 1).unwrap();
    assert_eq!(det.circuit.evaluate(&WeightedHost::identity(3)).unwrap(), q(1));
}

#[test]
fn caps_are_enforced() {
    let l = IntegerPartition::new(vec![5]).unwrap();
    assert!(matches!(synth_immanant(&l, ImmanantCaps::default(), 1), Err(symcirc::Error::CapExceeded { .. })));
    assert!(IntegerPartition::new(vec![2, 0]).is_err());
    assert_eq!(IntegerPartition::parse("1,3,1").unwrap().parts(), &[3, 1, 1]);
}
