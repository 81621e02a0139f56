use num_bigint::BigUint;
use permsub_core::constructions::{odda_double, two_run_permutation};
use permsub_core::pattern::{self, has_monotone_3ap, naive, pattern_holds_big};
use permsub_core::transforms::{
    divisor_lift, extract_divisor_subperm, extract_power_subperm, pow2_lift, pow2_lift_fixed,
};
use permsub_core::{
    count_hits, find_hit, pattern_holds, Anchor, Flavor, PatternSpec, Permutation, ValueSequence,
};
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};

fn any_flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![
        Just(Flavor::Additive),
        Just(Flavor::Multiplicative),
        Just(Flavor::InverseAdditive),
    ]
}

fn any_spec() -> impl Strategy<Value = PatternSpec> {
    (3usize..=5, 2u32..=4, any_flavor(), any::<bool>())
        .prop_map(|(k, ell, fl, mono)| PatternSpec::new(k, ell, fl, mono).unwrap())
}

fn perm_of_len(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

/// Distinct values; about half the time the last term is forced to close a relation.
fn additive_candidates() -> impl Strategy<Value = (Vec<u64>, u32)> {
    (3usize..=6, 2u32..=5, any::<bool>(), any::<bool>()).prop_flat_map(|(k, ell, force, mirror)| {
        proptest::collection::btree_set(1u64..=10_000, k).prop_map(move |set| {
            let mut v: Vec<u64> = set.into_iter().collect();
            v.reverse();
            if force {
                let s: u64 = v[..v.len() - 1].iter().sum();
                if s % (ell as u64 - 1) == 0 {
                    let a = s / (ell as u64 - 1);
                    if !v[..v.len() - 1].contains(&a) {
                        let last = v.len() - 1;
                        v[last] = a;
                    }
                }
            }
            if mirror {
                v.reverse();
            }
            (v, ell)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn additive_reduced_form((v, ell) in additive_candidates()) {
        let k = v.len();
        let spec = PatternSpec::additive(k, ell);
        let m = ell as u64 - 1;
        let head: u64 = v[..k - 1].iter().sum();
        let tail: u64 = v[1..].iter().sum();
        let expected = if head == m * v[k - 1] {
            Some(Anchor::Last)
        } else if tail == m * v[0] {
            Some(Anchor::First)
        } else {
            None
        };
        let seq = ValueSequence::new(v).unwrap();
        prop_assert_eq!(pattern_holds(&seq, &spec).unwrap(), expected);
    }

    #[test]
    fn hits_are_reversal_invariant(p in perm_of_len(11), spec in any_spec()) {
        let r = p.reversed();
        prop_assert_eq!(count_hits(&p, &spec).unwrap(), count_hits(&r, &spec).unwrap());
        prop_assert_eq!(
            find_hit(&p, &spec).unwrap().is_some(),
            find_hit(&r, &spec).unwrap().is_some()
        );
    }

    #[test]
    fn hits_satisfy_their_anchor(p in perm_of_len(11), spec in any_spec()) {
        for hit in pattern::all_hits(&p, &spec).unwrap() {
            prop_assert!(hit.positions.windows(2).all(|w| w[0] < w[1]));
            for (&pos, &val) in hit.positions.iter().zip(&hit.values) {
                prop_assert_eq!(u64::from(p.at(pos - 1)), val);
            }
            let seq = ValueSequence::new(hit.values.clone()).unwrap();
            prop_assert_eq!(pattern_holds(&seq, &spec).unwrap(), Some(hit.anchor));
            // the mirrored sequence holds with the mirrored anchor only
            let rev: Vec<u64> = hit.values.iter().rev().copied().collect();
            let rev = ValueSequence::new(rev).unwrap();
            prop_assert_eq!(pattern_holds(&rev, &spec).unwrap(), Some(hit.anchor.mirrored()));
        }
    }

    #[test]
    fn monotone_count_at_most_plain(p in perm_of_len(12), spec in any_spec()) {
        let plain = spec.with_monotone(false);
        let mono = spec.with_monotone(true);
        prop_assert!(count_hits(&p, &mono).unwrap() <= count_hits(&p, &plain).unwrap());
    }

    #[test]
    fn optimized_matches_naive(p in perm_of_len(14), spec in any_spec()) {
        prop_assert_eq!(count_hits(&p, &spec).unwrap(), naive::count_hits(&p, &spec));
        prop_assert_eq!(find_hit(&p, &spec).unwrap(), naive::first_hit(&p, &spec));
        prop_assert_eq!(has_monotone_3ap(&p), naive::has_monotone_3ap(&p));
    }

    #[test]
    fn pow2_lift_is_anchor_preserving(
        v in proptest::collection::btree_set(1u64..=62, 3..=6),
        ell in 2u32..=3,
        seed in any::<u64>(),
    ) {
        let mut v: Vec<u64> = v.into_iter().collect();
        v.shuffle(&mut StdRng::seed_from_u64(seed));
        let seq = ValueSequence::new(v).unwrap();
        let add = PatternSpec::additive(seq.len(), ell);
        let mul = add.with_flavor(Flavor::Multiplicative);
        let a = pattern_holds(&seq, &add).unwrap();
        prop_assert_eq!(pattern_holds_big(&pow2_lift(&seq), &mul).unwrap(), a);
        // the u128 evaluator may refuse large products, but never answers wrongly
        match pattern_holds(&pow2_lift_fixed(&seq).unwrap(), &mul) {
            Ok(b) => prop_assert_eq!(b, a),
            Err(e) => prop_assert!(matches!(e, permsub_core::Error::Overflow(_))),
        }
    }

    #[test]
    fn divisor_lift_is_anchor_preserving(
        (n, picks) in (5u64..=20).prop_flat_map(|n| (Just(n), subsequence((1..=n).collect::<Vec<_>>(), 3..=5))),
        ell in 2u32..=4,
        seed in any::<u64>(),
    ) {
        let mut v = picks;
        v.shuffle(&mut StdRng::seed_from_u64(seed));
        let seq = ValueSequence::new(v).unwrap();
        let add = PatternSpec::additive(seq.len(), ell);
        let inv = add.with_flavor(Flavor::InverseAdditive);
        let lifted = divisor_lift(&seq, n).unwrap();
        prop_assert_eq!(
            pattern_holds_big(&lifted, &inv).unwrap(),
            pattern_holds(&seq, &add).unwrap()
        );
    }

    #[test]
    fn power_extraction_round_trips(p in perm_of_len(4), seed in any::<u64>()) {
        let n = p.len();
        let size = 1usize << n;
        let mut rng = StdRng::seed_from_u64(seed);
        // random host with the powers of two at random positions, in p's order
        let mut others: Vec<u32> = (1..=size as u32).filter(|x| !x.is_power_of_two() || *x == 1).collect();
        others.shuffle(&mut rng);
        let mut slots: Vec<usize> = (0..size).collect();
        slots.shuffle(&mut rng);
        let mut chosen = slots[..n].to_vec();
        chosen.sort_unstable();
        let mut host = vec![0u32; size];
        for (slot, &v) in chosen.iter().zip(p.values()) {
            host[*slot] = 1 << v;
        }
        let mut rest = others.into_iter();
        for x in host.iter_mut().filter(|x| **x == 0) {
            *x = rest.next().unwrap();
        }
        let q = Permutation::new(host).unwrap();
        prop_assert_eq!(extract_power_subperm(&q, n).unwrap(), p);
    }

    #[test]
    fn extracted_hits_lift_to_host_hits(v in Just((1..=16u32).collect::<Vec<_>>()).prop_shuffle()) {
        let q = Permutation::new(v).unwrap();
        let p = extract_power_subperm(&q, 4).unwrap();
        let add = PatternSpec::additive(3, 2);
        if let Some(hit) = find_hit(&p, &add).unwrap() {
            let lifted: Vec<BigUint> = pow2_lift(&ValueSequence::new(hit.values.clone()).unwrap());
            let positions: Vec<usize> = lifted
                .iter()
                .map(|x| q.position_of(x.try_into().unwrap()).unwrap())
                .collect();
            prop_assert!(positions.windows(2).all(|w| w[0] < w[1]));
            let mul = add.with_flavor(Flavor::Multiplicative);
            prop_assert_eq!(pattern_holds_big(&lifted, &mul).unwrap(), Some(hit.anchor));
        }
    }

    #[test]
    fn divisor_extraction_follows_left_sets(n in 2usize..=6, seed in any::<u64>()) {
        let l: u32 = (1..=n as u32).fold(1, |acc, x| num_integer::lcm(acc, x));
        let mut v: Vec<u32> = (1..=l).collect();
        v.shuffle(&mut StdRng::seed_from_u64(seed));
        let q = Permutation::new(v).unwrap();
        let p = extract_divisor_subperm(&q, n).unwrap();
        for a in 1..=n as u64 {
            for b in 1..=n as u64 {
                let left_p = p.position_of(a) < p.position_of(b);
                let left_q = q.position_of(l as u64 / a) < q.position_of(l as u64 / b);
                prop_assert_eq!(left_p, left_q);
            }
        }
    }
}

#[test]
fn odda_preserves_3ap_freeness() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut seeds = 0;
    while seeds < 200 {
        let n = rand::Rng::gen_range(&mut rng, 1..=16usize);
        let mut v: Vec<u32> = (1..=n as u32).collect();
        v.shuffle(&mut rng);
        let p = Permutation::new(v).unwrap();
        if has_monotone_3ap(&p) {
            continue;
        }
        seeds += 1;
        let d = odda_double(&p);
        assert_eq!(d.len(), 2 * n);
        assert!(!naive::has_monotone_3ap(&d), "{p} doubles to {d}");
    }
}

#[test]
fn two_run_has_no_increasing_triple() {
    for n in 3..=40usize {
        for a in 2..=n.div_ceil(2) {
            let p = two_run_permutation(n, a).unwrap();
            let v = p.values();
            // smallest value seen so far, and whether an increasing pair ends below the current value
            let mut min_so_far = u32::MAX;
            let mut best_pair_end = u32::MAX;
            for &x in v {
                assert!(x <= best_pair_end, "n={n} a={a}: increasing triple in {p}");
                if x > min_so_far {
                    best_pair_end = best_pair_end.min(x);
                }
                min_so_far = min_so_far.min(x);
            }
        }
    }
}
