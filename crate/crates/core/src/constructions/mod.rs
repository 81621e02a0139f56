//! Explicit permutation families and the built-in witness corpus.

mod corpus;

pub use corpus::{builtin_corpus, parse_corpus, write_corpus, Claim, WitnessRecord, BUILTIN_CORPUS};

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// `(1, 2, .., n)`.
pub fn identity(n: usize) -> Permutation {
    Permutation::identity(n)
}

/// `(1, .., k−2, m−1, m−2, .., k−1)` with `m = (k−1)(3k−4)/2`, a permutation of
/// `S_{m−1}` with no 2-additive subsequence of length `k`.
pub fn staircase_avoider(k: usize) -> Result<Permutation> {
    if k < 3 {
        return Err(Error::InvalidSpec(format!("k must be at least 3, got {k}")));
    }
    let m = (k - 1) * (3 * k - 4) / 2;
    let values = (1..=k - 2).chain((k - 1..m).rev()).map(|x| x as u32).collect();
    Permutation::new(values)
}

/// `(2p_1, .., 2p_n, 2p_1 − 1, .., 2p_n − 1)`.
///
/// Preserves the absence of monotone 3-term arithmetic progressions.
pub fn odda_double(p: &Permutation) -> Permutation {
    let evens = p.values().iter().map(|&x| 2 * x);
    let odds = p.values().iter().map(|&x| 2 * x - 1);
    Permutation::new(evens.chain(odds).collect()).expect("doubling a permutation")
}

/// `(⌈n/a⌉, .., 1, n, .., ⌈n/a⌉ + 1)`: two decreasing runs.
pub fn two_run_permutation(n: usize, a: usize) -> Result<Permutation> {
    let max_a = n.div_ceil(2);
    if a < 2 || a > max_a {
        return Err(Error::OutOfRange {
            what: "a",
            value: a as u64,
            limit: format!("2 <= a <= ceil(n/2) = {max_a}"),
        });
    }
    let c = n.div_ceil(a);
    let values = (1..=c).rev().chain((c + 1..=n).rev()).map(|x| x as u32).collect();
    Permutation::new(values)
}

/// A record of the built-in corpus by id.
pub fn known_witness(id: &str) -> Result<WitnessRecord> {
    builtin_corpus()?
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownWitness(id.to_string()))
}
