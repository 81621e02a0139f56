//! Exact `min_{p ∈ S_n}` of the hit count by branch and bound.
//!
//! Uses the same insertion order as the avoider search. When `v` is inserted, the hits
//! it completes are exactly the tuples with maximum `v` whose hit slots contain the
//! chosen gap. For a value `w` not yet inserted, the tuples with maximum `w` whose other
//! members are already placed will contribute at least the minimum, over the current
//! gaps, of how many of them hit there: later insertions only split gaps and do not
//! change which of those tuples hit. These tuple sets are disjoint for distinct `w`, so
//! the sum of the minima plus the hits so far is a lower bound for every completion.

use serde::{Deserialize, Serialize};

use super::engine::Order;
use super::table::{ConstraintTable, SlotMask};
use crate::error::{Error, Result};
use crate::pattern::{count_hits, PatternSpec};
use crate::permutation::Permutation;

/// Largest `n` accepted by [`min_count`].
pub const MAX_MIN_COUNT_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCountResult {
    pub n: usize,
    pub spec: PatternSpec,
    pub minimum: u64,
    pub argmin: Permutation,
    pub nodes: u64,
}

struct Bnb<'a> {
    n: usize,
    table: &'a ConstraintTable,
    best: u64,
    best_seq: Vec<u8>,
    nodes: u64,
}

fn add_mask(counts: &mut [u64], mut mask: SlotMask) {
    while mask != 0 {
        counts[mask.trailing_zeros() as usize] += 1;
        mask &= mask - 1;
    }
}

impl Bnb<'_> {
    /// Hits that inserting `v` at each gap would complete right now.
    fn slot_costs(&self, order: &Order, v: usize) -> Vec<u64> {
        let len = order.len();
        let mut counts = vec![0u64; len + 1];
        for t in self.table.tuples_with_max(v) {
            add_mask(&mut counts, self.table.hit_slots(t, v as u8, &order.pos, len));
        }
        counts
    }

    fn future_bound(&self, order: &Order) -> u64 {
        let placed = order.len();
        let mut counts = vec![0u64; placed + 1];
        (placed + 1..=self.n)
            .map(|w| {
                counts.iter_mut().for_each(|c| *c = 0);
                for t in self.table.placed_tuples(w, placed) {
                    add_mask(&mut counts, self.table.hit_slots(t, w as u8, &order.pos, placed));
                }
                counts.iter().copied().min().unwrap_or(0)
            })
            .sum()
    }

    fn search(&mut self, order: &mut Order, hits: u64) {
        let v = order.len() + 1;
        if v > self.n {
            if hits < self.best {
                self.best = hits;
                self.best_seq = order.seq.clone();
            }
            return;
        }
        let costs = self.slot_costs(order, v);
        let mut slots: Vec<usize> = if v == 2 {
            // reversal maps hits to hits, so 1 may be kept before 2
            vec![order.pos[1] as usize + 1]
        } else {
            (0..=order.len()).collect()
        };
        slots.sort_by_key(|&s| (costs[s], s));
        for s in slots {
            let h = hits + costs[s];
            if h >= self.best {
                break;
            }
            self.nodes += 1;
            order.insert(s, v as u8);
            if h + self.future_bound(order) < self.best {
                self.search(order, h);
            }
            order.remove(s);
            if self.best == 0 {
                return;
            }
        }
    }
}

/// Exact minimum number of hits over `S_n`, with a permutation attaining it.
///
/// Refuses `n > MAX_MIN_COUNT_N`.
pub fn min_count(n: usize, spec: &PatternSpec) -> Result<MinCountResult> {
    if n == 0 || n > MAX_MIN_COUNT_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            limit: format!("min_count is certified for 1 <= n <= {MAX_MIN_COUNT_N}"),
        });
    }
    let table = ConstraintTable::build(n, spec)?;
    let mut bnb = Bnb {
        n,
        table: &table,
        best: u64::MAX,
        best_seq: Vec::new(),
        nodes: 0,
    };
    let mut order = Order::new(n);
    order.insert(0, 1);
    bnb.search(&mut order, 0);

    let argmin = Permutation::new(bnb.best_seq.iter().map(|&x| u32::from(x)).collect())?;
    let recount = count_hits(&argmin, spec)?;
    if recount != bnb.best {
        return Err(Error::ClaimFailed {
            id: format!("min_count argmin {argmin}"),
            detail: format!("search reported {} hits, recount gives {recount}", bnb.best),
        });
    }
    Ok(MinCountResult {
        n,
        spec: *spec,
        minimum: bnb.best,
        argmin,
        nodes: bnb.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::naive;
    use itertools::Itertools;

    fn brute_min(n: usize, spec: &PatternSpec) -> u64 {
        (1..=n as u32)
            .permutations(n)
            .map(|v| naive::count_hits(&Permutation::new(v).unwrap(), spec))
            .min()
            .unwrap()
    }

    #[test]
    fn matches_brute_force() {
        for spec in [
            PatternSpec::additive(3, 2),
            PatternSpec::additive(3, 2).with_monotone(true),
            PatternSpec::additive(4, 3),
            PatternSpec::additive(3, 3),
        ] {
            for n in 1..=7 {
                let r = min_count(n, &spec).unwrap();
                assert_eq!(r.minimum, brute_min(n, &spec), "n={n} {spec}");
                assert_eq!(r.argmin.len(), n);
            }
        }
    }

    #[test]
    fn f32_small_values() {
        let spec = PatternSpec::additive(3, 2);
        assert_eq!(min_count(4, &spec).unwrap().minimum, 0);
        assert!(min_count(5, &spec).unwrap().minimum >= 1);
    }

    #[test]
    fn refuses_large_n() {
        let err = min_count(18, &PatternSpec::additive(3, 2)).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { what: "n", .. }));
    }
}
