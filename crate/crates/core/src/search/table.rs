//! Precomputed value sets that can form a hit, grouped by their largest member.
//!
//! The search inserts the values `1, 2, .., n` one at a time into a growing relative
//! order. When `v` is inserted every other value of a tuple with maximum `v` is already
//! placed, so whether that tuple becomes a hit depends only on the gap `v` lands in.

use crate::error::{Error, Result};
use crate::pattern::{relation_anchor, PatternSpec};

/// Largest `n` the slot bitmasks can represent.
pub const MAX_SEARCH_N: usize = 127;
/// Largest `k` handled by the search engine.
pub const MAX_SEARCH_K: usize = 9;

pub(crate) type SlotMask = u128;

#[derive(Debug, Clone)]
pub(crate) struct Tuple {
    /// The non-maximal members, ascending.
    pub others: Box<[u8]>,
    /// The member the relation binds to.
    pub anchor: u8,
}

impl Tuple {
    fn second_largest(&self) -> u8 {
        *self.others.last().expect("k >= 3")
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ConstraintTable {
    monotone: bool,
    /// `by_max[v]`: tuples whose largest value is `v`, sorted by second-largest value.
    by_max: Vec<Vec<Tuple>>,
}

impl ConstraintTable {
    pub fn build(n: usize, spec: &PatternSpec) -> Result<Self> {
        if n > MAX_SEARCH_N {
            return Err(Error::OutOfRange {
                what: "n",
                value: n as u64,
                limit: format!("search supports n <= {MAX_SEARCH_N}"),
            });
        }
        let k = spec.k();
        if k > MAX_SEARCH_K {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as u64,
                limit: format!("search supports k <= {MAX_SEARCH_K}"),
            });
        }
        let mut by_max = vec![Vec::new(); n + 1];
        let mut members: Vec<u64> = Vec::with_capacity(k);
        for (v, bucket) in by_max.iter_mut().enumerate().skip(k) {
            let mut others: Vec<u8> = (1..k as u8).collect();
            loop {
                members.clear();
                members.extend(others.iter().map(|&x| x as u64));
                members.push(v as u64);
                if let Some(a) = relation_anchor(&members, spec.flavor(), spec.ell())? {
                    bucket.push(Tuple {
                        others: others.clone().into_boxed_slice(),
                        anchor: a as u8,
                    });
                }
                if !next_combination(&mut others, v as u8 - 1) {
                    break;
                }
            }
            bucket.sort_by_key(Tuple::second_largest);
        }
        Ok(ConstraintTable {
            monotone: spec.monotone(),
            by_max,
        })
    }

    pub fn tuples_with_max(&self, v: usize) -> &[Tuple] {
        &self.by_max[v]
    }

    /// Tuples with maximum `w` whose other members are all `<= placed`.
    pub fn placed_tuples(&self, w: usize, placed: usize) -> &[Tuple] {
        let all = &self.by_max[w];
        let end = all.partition_point(|t| (t.second_largest() as usize) <= placed);
        &all[..end]
    }

    #[cfg(test)]
    pub fn tuple_count(&self) -> usize {
        self.by_max.iter().map(Vec::len).sum()
    }

    /// Slots (gaps `0..=len` of the current order) where inserting `max` would turn
    /// `t` into a hit. `pos[x]` is the 0-based position of placed value `x`.
    pub fn hit_slots(&self, t: &Tuple, max: u8, pos: &[u8], len: usize) -> SlotMask {
        let km1 = t.others.len();
        let mut placed = [(0u8, 0u8); MAX_SEARCH_K];
        for (slot, &x) in placed.iter_mut().zip(t.others.iter()) {
            *slot = (pos[x as usize], x);
        }
        let placed = &mut placed[..km1];
        placed.sort_unstable_by_key(|&(p, _)| p);

        // ranks r in 0..=km1: r others precede the new maximum
        let mut hit_ranks: u32 = 0;
        if t.anchor == max {
            hit_ranks |= 1 | (1 << km1);
        } else {
            let ai = placed.iter().position(|&(_, x)| x == t.anchor).expect("anchor");
            if ai == 0 {
                hit_ranks |= ((1 << (km1 + 1)) - 1) & !1;
            }
            if ai == km1 - 1 {
                hit_ranks |= (1 << km1) - 1;
            }
        }
        if self.monotone {
            let inc = placed.windows(2).all(|w| w[0].1 < w[1].1);
            let dec = placed.windows(2).all(|w| w[0].1 > w[1].1);
            let mut mono_ranks = 0u32;
            if inc {
                mono_ranks |= 1 << km1;
            }
            if dec {
                mono_ranks |= 1;
            }
            hit_ranks &= mono_ranks;
        }

        let mut mask: SlotMask = 0;
        while hit_ranks != 0 {
            let r = hit_ranks.trailing_zeros() as usize;
            hit_ranks &= hit_ranks - 1;
            let lo = if r == 0 { 0 } else { placed[r - 1].0 as usize + 1 };
            let hi = if r == km1 { len } else { placed[r].0 as usize };
            mask |= slot_range(lo, hi);
        }
        mask
    }
}

/// Bits `lo..=hi`.
pub(crate) fn slot_range(lo: usize, hi: usize) -> SlotMask {
    debug_assert!(lo <= hi && hi < 128);
    let upper = if hi == 127 {
        SlotMask::MAX
    } else {
        (1 << (hi + 1)) - 1
    };
    upper & !((1 << lo) - 1)
}

/// Advances `c` (strictly increasing, values in `1..=max`) to the next combination.
fn next_combination(c: &mut [u8], max: u8) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        let limit = max - (k - 1 - i) as u8;
        if c[i] < limit {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Flavor;

    #[test]
    fn schur_triples_by_max() {
        let t = ConstraintTable::build(6, &PatternSpec::additive(3, 2)).unwrap();
        let six: Vec<_> = t.tuples_with_max(6).iter().map(|t| t.others.to_vec()).collect();
        assert_eq!(six, vec![vec![2, 4], vec![1, 5]]);
        assert!(t.tuples_with_max(6).iter().all(|t| t.anchor == 6));
        // x + y = z, x < y, z <= 6
        assert_eq!(t.tuple_count(), 6);
    }

    #[test]
    fn slot_ranges() {
        assert_eq!(slot_range(0, 0), 1);
        assert_eq!(slot_range(1, 3), 0b1110);
        assert_eq!(slot_range(0, 127), u128::MAX);
    }

    #[test]
    fn hit_slots_for_schur_triple() {
        // order (1, 2): inserting 3 is a hit unless it lands between 1 and 2
        let t = ConstraintTable::build(3, &PatternSpec::additive(3, 2)).unwrap();
        let tuple = &t.tuples_with_max(3)[0];
        let mut pos = [0u8; 4];
        pos[1] = 0;
        pos[2] = 1;
        assert_eq!(t.hit_slots(tuple, 3, &pos, 2), 0b101);
    }

    #[test]
    fn monotone_hit_slots() {
        // order (1, 2): only (1, 2, 3) is monotone with 3 at an end
        let spec = PatternSpec::additive(3, 2).with_monotone(true);
        let t = ConstraintTable::build(3, &spec).unwrap();
        let tuple = &t.tuples_with_max(3)[0];
        let mut pos = [0u8; 4];
        pos[2] = 1;
        assert_eq!(t.hit_slots(tuple, 3, &pos, 2), 0b100);
    }

    #[test]
    fn rejects_oversized_inputs() {
        assert!(ConstraintTable::build(200, &PatternSpec::additive(3, 2)).is_err());
        let wide = PatternSpec::new(12, 2, Flavor::Additive, false).unwrap();
        assert!(ConstraintTable::build(20, &wide).is_err());
    }
}
