//! Maps carrying additive patterns to multiplicative and inverse-additive ones.
//!
//! `x ↦ 2^x` turns `Σ x_i = ℓ·x_a` into `Π 2^{x_i} = (2^{x_a})^ℓ`, and `x ↦ L_n/x` with
//! `L_n = lcm(1..n)` turns it into `Σ 1/y_i = ℓ/y_a`. Both keep the anchor.

mod rational;

pub use rational::ExactRational;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::permutation::{Permutation, ValueSequence};

/// `lcm(1, 2, .., n)`; `1` for `n = 0`.
pub fn lcm_upto(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, x| acc.lcm(&BigUint::from(x)))
}

/// Elementwise `2^x`.
pub fn pow2_lift(seq: &ValueSequence) -> Vec<BigUint> {
    seq.values()
        .iter()
        .map(|&x| BigUint::one() << x)
        .collect()
}

/// Largest exponent accepted by [`pow2_lift_fixed`].
pub const POW2_FIXED_MAX: u64 = 62;

/// [`pow2_lift`] in `u64`, for values up to [`POW2_FIXED_MAX`].
pub fn pow2_lift_fixed(seq: &ValueSequence) -> Result<ValueSequence> {
    let lifted = seq
        .values()
        .iter()
        .map(|&x| {
            if x > POW2_FIXED_MAX {
                Err(Error::Overflow("2^x exceeds the fixed-width range"))
            } else {
                Ok(1u64 << x)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ValueSequence::new(lifted)
}

/// Elementwise `L_n / x`; every value must lie in `1..=n`.
pub fn divisor_lift(seq: &ValueSequence, n: u64) -> Result<Vec<BigUint>> {
    let l = lcm_upto(n);
    seq.values()
        .iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(Error::ValueOutOfRange {
                    value: x as i64,
                    max: n as usize,
                })
            } else {
                Ok(&l / x)
            }
        })
        .collect()
}

/// Relabels `q` restricted to `targets` (`targets[a − 1]` stands for `a`) as a
/// permutation of `1..=targets.len()` ordered by position in `q`.
fn relabel_by_position(q: &Permutation, targets: &[u64]) -> Result<Permutation> {
    let mut placed = targets
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            q.position_of(t)
                .map(|pos| (pos, i as u32 + 1))
                .ok_or(Error::MissingValue(t))
        })
        .collect::<Result<Vec<_>>>()?;
    placed.sort_unstable();
    Permutation::new(placed.into_iter().map(|(_, a)| a).collect())
}

/// The permutation `p` of `1..=n` with `p_i = log₂ q'_i`, where `q'` is the
/// subpermutation of `q` on `{2^1, .., 2^n}`.
///
/// `q` only needs to contain those values.
pub fn extract_power_subperm(q: &Permutation, n: usize) -> Result<Permutation> {
    let targets = (1..=n as u32)
        .map(|i| 2u64.checked_pow(i).ok_or(Error::Overflow("2^n")))
        .collect::<Result<Vec<_>>>()?;
    relabel_by_position(q, &targets)
}

/// The permutation `p` of `1..=n` with `a` left of `b` iff `L_n/a` is left of `L_n/b`
/// in `q`.
///
/// `q` only needs to contain the values `L_n/1, .., L_n/n`.
pub fn extract_divisor_subperm(q: &Permutation, n: usize) -> Result<Permutation> {
    let l = lcm_upto(n as u64);
    let targets = (1..=n as u64)
        .map(|a| {
            (&l / a)
                .to_u64()
                .ok_or(Error::Overflow("L_n/a exceeds u64"))
        })
        .collect::<Result<Vec<_>>>()?;
    relabel_by_position(q, &targets)
}
