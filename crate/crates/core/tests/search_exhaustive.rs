use itertools::Itertools;
use permsub_core::pattern::naive;
use permsub_core::search::{
    exists_avoider, threshold, Budget, SearchConfig, SearchStatus, ThresholdOutcome,
};
use permsub_core::{count_hits, Flavor, PatternSpec, Permutation};

fn battery() -> Vec<PatternSpec> {
    let mut out = Vec::new();
    for (k, ell) in [(3, 2), (4, 3), (3, 4), (4, 4)] {
        for mono in [false, true] {
            out.push(PatternSpec::additive(k, ell).with_monotone(mono));
        }
    }
    out
}

fn all_perms(n: usize) -> impl Iterator<Item = Permutation> {
    (1..=n as u32)
        .permutations(n)
        .map(|v| Permutation::new(v).unwrap())
}

#[test]
fn optimized_count_matches_naive_on_all_small_perms() {
    let specs = [
        PatternSpec::additive(3, 2),
        PatternSpec::additive(4, 3),
        PatternSpec::additive(3, 4),
        PatternSpec::additive(3, 2).with_flavor(Flavor::Multiplicative),
        PatternSpec::additive(3, 2).with_flavor(Flavor::InverseAdditive),
    ];
    for n in 1..=8 {
        for p in all_perms(n) {
            for spec in specs {
                for spec in [spec, spec.with_monotone(true)] {
                    assert_eq!(
                        count_hits(&p, &spec).unwrap(),
                        naive::count_hits(&p, &spec),
                        "{p} {spec}"
                    );
                }
            }
        }
    }
}

#[test]
fn search_agrees_with_literal_enumeration() {
    for spec in battery() {
        for n in 1..=7 {
            let literal = all_perms(n).any(|p| naive::is_avoider(&p, &spec));
            let o = exists_avoider(n, &spec, &SearchConfig::default()).unwrap();
            let expected = if literal {
                SearchStatus::AvoiderFound
            } else {
                SearchStatus::Exhausted
            };
            assert_eq!(o.status, expected, "n={n} {spec}");
            match o.witness {
                Some(w) => assert_eq!(naive::count_hits(&w, &spec), 0),
                None => assert_eq!(o.status, SearchStatus::Exhausted),
            }
        }
    }
}

#[test]
fn reductions_do_not_change_statuses() {
    let configs = [
        SearchConfig::default(),
        SearchConfig {
            symmetry_breaking: false,
            ..SearchConfig::default()
        },
        SearchConfig {
            forward_checking: false,
            ..SearchConfig::default()
        },
        SearchConfig {
            symmetry_breaking: false,
            forward_checking: false,
            ..SearchConfig::default()
        },
    ];
    let mut specs = battery();
    specs.push(PatternSpec::additive(3, 2).with_flavor(Flavor::Multiplicative));
    specs.push(PatternSpec::additive(3, 2).with_flavor(Flavor::InverseAdditive));
    for spec in specs {
        for n in 1..=7 {
            let statuses: Vec<_> = configs
                .iter()
                .map(|c| exists_avoider(n, &spec, c).unwrap().status)
                .collect();
            assert!(statuses.iter().all_equal(), "n={n} {spec}: {statuses:?}");
        }
    }
}

#[test]
fn larger_thresholds_agree_without_pruning_aids() {
    let bare = SearchConfig {
        symmetry_breaking: false,
        forward_checking: false,
        ..SearchConfig::default()
    };
    let g = PatternSpec::additive(3, 2).with_monotone(true);
    for (spec, n) in [(g, 17), (g, 18), (PatternSpec::additive(3, 4), 12), (PatternSpec::additive(3, 4), 13)] {
        let fast = exists_avoider(n, &spec, &SearchConfig::default()).unwrap();
        let slow = exists_avoider(n, &spec, &bare).unwrap();
        assert_eq!(fast.status, slow.status, "n={n} {spec}");
    }
}

#[test]
fn sequential_runs_are_reproducible() {
    let spec = PatternSpec::additive(3, 2).with_monotone(true);
    for budget in [Budget::unlimited(), Budget::nodes(60)] {
        let cfg = SearchConfig::default().with_budget(budget);
        let a = exists_avoider(18, &spec, &cfg).unwrap();
        let b = exists_avoider(18, &spec, &cfg).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.witness, b.witness);
    }
    let a = exists_avoider(17, &spec, &SearchConfig::default()).unwrap();
    let b = exists_avoider(17, &spec, &SearchConfig::default()).unwrap();
    assert_eq!((a.nodes_explored, a.witness), (b.nodes_explored, b.witness));
}

#[test]
fn parallel_witness_matches_sequential() {
    let cases = [
        (PatternSpec::additive(3, 2).with_monotone(true), 17),
        (PatternSpec::additive(3, 4), 12),
        (PatternSpec::additive(4, 4), 30),
        (PatternSpec::additive(3, 2).with_flavor(Flavor::Multiplicative), 20),
    ];
    for (spec, n) in cases {
        let seq = exists_avoider(n, &spec, &SearchConfig::default()).unwrap();
        let par = exists_avoider(n, &spec, &SearchConfig::default().with_threads(4)).unwrap();
        assert_eq!(seq.status, par.status);
        assert_eq!(seq.witness, par.witness, "n={n} {spec}");
        assert!(par.parallel && !seq.parallel);
    }
}

#[test]
fn budget_never_reports_exhausted() {
    let spec = PatternSpec::additive(3, 2).with_monotone(true);
    for nodes in [1, 5, 50] {
        let cfg = SearchConfig::default().with_budget(Budget::nodes(nodes));
        let o = exists_avoider(18, &spec, &cfg).unwrap();
        assert_eq!(o.status, SearchStatus::Inconclusive);
        assert!(o.nodes_explored <= nodes);
    }
    // the clock is read every 1024 nodes; this run needs several thousand
    let cfg = SearchConfig {
        forward_checking: false,
        symmetry_breaking: false,
        ..SearchConfig::default()
    }
    .with_budget(Budget::time(std::time::Duration::ZERO));
    let o = exists_avoider(18, &spec, &cfg).unwrap();
    assert_eq!(o.status, SearchStatus::Inconclusive);
    assert!(o.reason.unwrap().contains("time budget"));
}

#[test]
fn threshold_statuses_are_monotone() {
    for spec in [
        PatternSpec::additive(3, 2),
        PatternSpec::additive(4, 3),
        PatternSpec::additive(3, 4),
        PatternSpec::additive(3, 2).with_monotone(true),
    ] {
        let o = threshold(&spec, None, 30, &SearchConfig::default()).unwrap();
        let ThresholdOutcome::Resolved(r) = o else {
            panic!("{spec} unresolved")
        };
        for s in &r.per_n {
            let expected = if s.n < r.threshold {
                SearchStatus::AvoiderFound
            } else {
                SearchStatus::Exhausted
            };
            assert_eq!(s.status, expected);
        }
        assert_eq!(r.largest_avoider.len(), r.threshold - 1);
        assert_eq!(naive::count_hits(&r.largest_avoider, &spec), 0);
        // one past the threshold is exhausted as well
        let next = exists_avoider(r.threshold + 1, &spec, &SearchConfig::default()).unwrap();
        assert_eq!(next.status, SearchStatus::Exhausted);
    }
}

#[test]
fn identity_keeps_k_equals_ell_unresolved() {
    for k in 3..=5 {
        let spec = PatternSpec::additive(k, k as u32);
        let o = threshold(&spec, None, 16, &SearchConfig::default()).unwrap();
        assert!(matches!(o, ThresholdOutcome::Unresolved { .. }), "{spec}");
    }
}
