//! Randomized invariants over the public API. Each case derives its data
//! from a seeded generator so failures replay exactly.

use kroots::space::{Rat, SpaceParams};
use kroots::{
    act_on_kroot, act_on_vector, apply_rule, differential, enumerate_lattice_words, from_label,
    monomial_decompose, parse_expr, parse_kroot, random_positive_root, rep_matrix, Decomposer,
    Error, KRoot, Permutation, Sign, SparseVector,
};
use num_traits::One;
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn params_strategy(max_n: u32) -> impl Strategy<Value = SpaceParams> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n / 2))
        .prop_map(|(n, k)| SpaceParams::new(n, k).unwrap())
}

fn seeded_root(p: &SpaceParams, seed: u64) -> (KRoot, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = random_positive_root(p, &mut rng);
    (root, rng)
}

/// Reassembles the expansion from basis coordinates.
fn reconstruct(p: SpaceParams, d: &kroots::Decomposition) -> SparseVector {
    let mut v = SparseVector::zero(p);
    for (l, c) in d.iter() {
        v.add_assign_scaled(&from_label(l, p).unwrap().expand(), c);
    }
    v
}

fn random_vector(p: SpaceParams, rng: &mut ChaCha8Rng) -> SparseVector {
    let mut v = SparseVector::zero(p);
    for m in kroots::enumerate_monomials(&p) {
        if rng.random::<bool>() {
            let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
            v.add_term(m.clone(), kroots::space::rat_int(c));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_is_nonnegative_integral_and_reconstructs(
        p in params_strategy(6), seed in any::<u64>()
    ) {
        let (root, _) = seeded_root(&p, seed);
        let mut dec = Decomposer::new();
        let d = dec.decompose(&root);
        prop_assert!(d.all_integer());
        prop_assert!(d.all_nonnegative());
        prop_assert_eq!(reconstruct(p, &d), root.expand());
        let neg = dec.decompose(&root.negated());
        prop_assert_eq!(neg, d.scale(&-Rat::one()));
    }

    #[test]
    fn action_commutes_with_expansion(p in params_strategy(6), seed in any::<u64>()) {
        let (root, mut rng) = seeded_root(&p, seed);
        let perm = Permutation::random(p.n(), &mut rng);
        prop_assert_eq!(
            act_on_kroot(&perm, &root).expand(),
            act_on_vector(&perm, &root.expand())
        );
    }

    #[test]
    fn differential_commutes_with_the_action(p in params_strategy(6), seed in any::<u64>()) {
        let (root, mut rng) = seeded_root(&p, seed);
        let perm = Permutation::random(p.n(), &mut rng);
        let v = root.expand();
        prop_assert_eq!(
            differential(&act_on_vector(&perm, &v)).unwrap(),
            act_on_vector(&perm, &differential(&v).unwrap())
        );
    }

    #[test]
    fn display_then_parse_is_the_identity(
        p in params_strategy(7), seed in any::<u64>(), negate in any::<bool>()
    ) {
        let (mut root, _) = seeded_root(&p, seed);
        if negate {
            root = root.negated();
        }
        prop_assert_eq!(parse_kroot(&root.to_string(), &p).unwrap(), root);
    }

    #[test]
    fn scrambled_factor_text_normalizes_back(
        p in params_strategy(7), seed in any::<u64>()
    ) {
        let (root, mut rng) = seeded_root(&p, seed);
        let mut flips = 0u32;
        let mut pieces: Vec<String> = root
            .factors()
            .iter()
            .map(|f| {
                let (i, j) = (f.i(), f.j());
                let op = if f.is_symmetric() { '+' } else { '-' };
                match rng.random_range(0..3u8) {
                    // as written
                    0 => format!("(x{i}{op}x{j})"),
                    // operands listed low-side last, same value
                    1 => {
                        if f.is_symmetric() {
                            format!("(x{j}+x{i})")
                        } else {
                            format!("(-x{j}+x{i})")
                        }
                    }
                    // negated factor
                    _ => {
                        flips += 1;
                        if f.is_symmetric() {
                            format!("(-x{i}-x{j})")
                        } else {
                            format!("(x{j}-x{i})")
                        }
                    }
                }
            })
            .collect();
        for idx in (1..pieces.len()).rev() {
            let other = rng.random_range(0..=idx);
            pieces.swap(idx, other);
        }
        let mut text = pieces.concat();
        if rng.random::<bool>() {
            flips += 1;
            text.insert(0, '-');
        }
        let expected = if flips.is_multiple_of(2) { root.clone() } else { root.negated() };
        prop_assert_eq!(parse_kroot(&text, &p).unwrap(), expected);
    }

    #[test]
    fn lattice_word_labels_round_trip(p in params_strategy(8), pick in any::<u64>()) {
        let words = enumerate_lattice_words(&p);
        let word = &words[(pick % words.len() as u64) as usize];
        let root = from_label(word, p).unwrap();
        prop_assert!(root.find_defect().is_none());
        prop_assert_eq!(root.label().unwrap(), word.clone());
        prop_assert_eq!(root.height(), word.height(p.k()));
    }

    #[test]
    fn rewrite_steps_strictly_descend(p in params_strategy(6), seed in any::<u64>()) {
        let (root, _) = seeded_root(&p, seed);
        prop_assume!(root.find_defect().is_some());
        let defect = root.find_defect().unwrap();
        let before = root.expand();
        let summands = apply_rule(&root, &defect).unwrap();
        prop_assert!(!summands.is_empty());
        for s in &summands {
            prop_assert_eq!(s.expand().order_cmp(&before), Ordering::Less);
            prop_assert_eq!(s.sign(), Sign::Plus);
        }
    }

    #[test]
    fn monomial_coordinates_reconstruct_the_monomial(
        p in params_strategy(6), pick in any::<u64>()
    ) {
        let monomials = kroots::enumerate_monomials(&p);
        let m = &monomials[(pick % monomials.len() as u64) as usize];
        let d = monomial_decompose(&p, m);
        let mut unit = SparseVector::zero(p);
        unit.add_term(m.clone(), Rat::one());
        prop_assert_eq!(reconstruct(p, &d), unit);
    }

    #[test]
    fn vector_order_is_antisymmetric_and_scale_invariant(
        seed in any::<u64>()
    ) {
        let p = SpaceParams::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vector(p, &mut rng);
        let v = random_vector(p, &mut rng);
        prop_assert_eq!(u.order_cmp(&u), Ordering::Equal);
        prop_assert_eq!(u.order_cmp(&v), v.order_cmp(&u).reverse());
        let c = kroots::space::rat(7, 3);
        prop_assert_eq!(u.scale(&c).order_cmp(&v.scale(&c)), u.order_cmp(&v));
    }

    #[test]
    fn parser_errors_point_inside_the_input(text in "[x0-9+()* -]{0,14}") {
        match parse_expr(&text) {
            Ok(_) => {}
            Err(Error::Parse { offset, .. }) => prop_assert!(offset <= text.len()),
            Err(e) => prop_assert!(false, "unexpected error kind: {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn representation_is_a_homomorphism(seed in any::<u64>()) {
        let p = SpaceParams::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Permutation::random(5, &mut rng);
        let b = Permutation::random(5, &mut rng);
        let mut dec = Decomposer::new();
        let ra = rep_matrix(&p, &a, &mut dec);
        let rb = rep_matrix(&p, &b, &mut dec);
        let rab = rep_matrix(&p, &a.compose(&b), &mut dec);
        prop_assert_eq!(ra.matrix().mul(rb.matrix()), rab.matrix().clone());
    }
}
