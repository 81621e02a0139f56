//! Arithmetic-patterned subsequences (additive, multiplicative, inverse-additive;
//! optionally monotone) in permutations of `{1, .., n}`.
//!
//! * [`permutation`]: the permutation model, left/right sets and subpermutations.
//! * [`pattern`]: pattern specs, predicates, hit detection and counting.
//! * [`search`]: exhaustive avoider search, thresholds and minimum hit counts.
//! * [`constructions`]: explicit permutation families and the witness corpus.
//! * [`bounds`]: the sum-set profile machinery and closed-form bounds.
//! * [`transforms`]: maps between the additive, multiplicative and inverse-additive settings.

pub mod bounds;
pub mod constructions;
pub mod error;
mod kv;
pub mod pattern;
pub mod permutation;
pub mod search;
pub mod transforms;

pub use error::{Error, Result};
pub use pattern::{count_hits, find_hit, pattern_holds, Anchor, Flavor, Hit, PatternSpec};
pub use permutation::{Permutation, ValueSequence};
