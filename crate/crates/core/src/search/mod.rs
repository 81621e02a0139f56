//! Exhaustive avoider search, thresholds `f(k, ℓ)` / `g(k, ℓ)`, and exact minimum hit
//! counts over `S_n`.
//!
//! Partial permutations are grown by inserting `1, 2, .., n` in increasing value order;
//! each insertion gap is a branch. A gap is pruned as soon as it completes a hit among
//! the values placed so far, and (with forward checking) when some value still to be
//! inserted would have no admissible gap left. Reversal symmetry is broken by placing
//! `1` before `2`; the complement map `x ↦ n+1−x` does not preserve the patterns and is
//! not used.

mod checkpoint;
mod engine;
mod min_count;
mod table;
mod threshold;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use checkpoint::{Checkpoint, Current};
pub use engine::Frontier;
pub use min_count::{min_count, MinCountResult, MAX_MIN_COUNT_N};
pub use table::{MAX_SEARCH_K, MAX_SEARCH_N};
pub use threshold::{threshold, threshold_resumable, NStat, ThresholdOutcome, ThresholdResult};

use crate::error::{Error, Result};
use crate::pattern::{find_hit, PatternSpec};
use crate::permutation::Permutation;
use engine::{run_frontier, Control, Engine, Tally};

/// Node and wall-clock limits; whichever is hit first ends the run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max: u64) -> Self {
        Budget {
            max_nodes: Some(max),
            max_time: None,
        }
    }

    pub fn time(max: Duration) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(max),
        }
    }

    /// What is left after spending `nodes` over `elapsed`.
    fn remaining(&self, nodes: u64, elapsed: Duration) -> Budget {
        Budget {
            max_nodes: self.max_nodes.map(|m| m.saturating_sub(nodes)),
            max_time: self.max_time.map(|t| t.saturating_sub(elapsed)),
        }
    }

    fn is_spent(&self) -> bool {
        self.max_nodes == Some(0) || self.max_time == Some(Duration::ZERO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: Budget,
    /// 1 runs sequentially and deterministically.
    pub threads: usize,
    pub symmetry_breaking: bool,
    pub forward_checking: bool,
    /// Depth at which the tree is cut into independent subtrees; `None` picks one.
    pub split_depth: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: Budget::unlimited(),
            threads: 1,
            symmetry_breaking: true,
            forward_checking: true,
            split_depth: None,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    fn split_for(&self, n: usize) -> usize {
        self.split_depth.unwrap_or(8).clamp(1, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    AvoiderFound,
    /// No permutation of `S_n` avoids the pattern.
    Exhausted,
    /// The budget ran out first; nothing is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub status: SearchStatus,
    pub witness: Option<Permutation>,
    pub nodes_explored: u64,
    /// Node counts of multi-threaded runs depend on scheduling.
    pub parallel: bool,
    pub elapsed: Duration,
    /// Why the run was inconclusive.
    pub reason: Option<String>,
}

/// Decides whether some permutation of `S_n` avoids `spec`.
pub fn exists_avoider(n: usize, spec: &PatternSpec, config: &SearchConfig) -> Result<SearchOutcome> {
    exists_avoider_from(n, spec, None, config).map(|(outcome, _)| outcome)
}

/// Like [`exists_avoider`], optionally restricted to the subtrees in `frontier`.
///
/// Also returns the subtrees that were not finished, which is empty unless the outcome
/// is [`SearchStatus::Inconclusive`].
pub fn exists_avoider_from(
    n: usize,
    spec: &PatternSpec,
    frontier: Option<Vec<Frontier>>,
    config: &SearchConfig,
) -> Result<(SearchOutcome, Vec<Frontier>)> {
    let engine = Engine::new(n, spec, config)?;
    let ctl = Control::new(config.budget);
    let threads = config.threads.max(1);

    let items = match frontier {
        Some(items) => {
            if let Some(bad) = items.iter().find(|f| !engine.validate_frontier(f)) {
                return Err(Error::InvalidSpec(format!(
                    "frontier entry {bad:?} is not a reachable search state for n = {n}"
                )));
            }
            Ok(items)
        }
        None => {
            let mut tally = Tally::new(&ctl);
            engine.expand(config.split_for(n), &mut tally)
        }
    };

    let (witness, pending) = match items {
        Ok(items) => {
            let run = run_frontier(&engine, &items, threads, &ctl)?;
            (run.witness, run.pending)
        }
        // the budget ran out while the frontier was being built
        Err(rest) => (None, rest),
    };

    let elapsed = ctl.started().elapsed();
    let (status, witness, reason, pending) = match witness {
        Some(w) => {
            let p = Permutation::new(w.into_iter().map(u32::from).collect())?;
            if let Some(hit) = find_hit(&p, spec)? {
                return Err(Error::ClaimFailed {
                    id: format!("search witness {p}"),
                    detail: format!("contains hit {:?}", hit.values),
                });
            }
            (SearchStatus::AvoiderFound, Some(p), None, Vec::new())
        }
        None if !pending.is_empty() => {
            (SearchStatus::Inconclusive, None, ctl.budget_reason(), pending)
        }
        None => (SearchStatus::Exhausted, None, None, Vec::new()),
    };
    Ok((
        SearchOutcome {
            n,
            status,
            witness,
            nodes_explored: ctl.nodes(),
            parallel: threads > 1,
            elapsed,
            reason,
        },
        pending,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{count_hits, Flavor};

    fn search(n: usize, spec: PatternSpec) -> SearchOutcome {
        exists_avoider(n, &spec, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn f32_boundary() {
        let spec = PatternSpec::additive(3, 2);
        let four = search(4, spec);
        assert_eq!(four.status, SearchStatus::AvoiderFound);
        let w = four.witness.unwrap();
        assert_eq!(count_hits(&w, &spec).unwrap(), 0);
        assert_eq!(search(5, spec).status, SearchStatus::Exhausted);
    }

    #[test]
    fn f43_seven_has_avoider() {
        let o = search(7, PatternSpec::additive(4, 3));
        assert_eq!(o.status, SearchStatus::AvoiderFound);
        assert!(o.witness.is_some());
    }

    #[test]
    fn tiny_n_is_trivially_avoidable() {
        let spec = PatternSpec::additive(3, 2);
        for n in 1..=2 {
            let o = search(n, spec);
            assert_eq!(o.status, SearchStatus::AvoiderFound);
            assert_eq!(o.witness.unwrap().len(), n);
        }
    }

    #[test]
    fn node_budget_is_inconclusive_not_exhausted() {
        let spec = PatternSpec::additive(3, 2).with_monotone(true);
        let cfg = SearchConfig::default().with_budget(Budget::nodes(20));
        let (o, pending) = exists_avoider_from(18, &spec, None, &cfg).unwrap();
        assert_eq!(o.status, SearchStatus::Inconclusive);
        assert!(o.witness.is_none());
        assert!(o.reason.unwrap().contains("node budget"));
        assert_eq!(o.nodes_explored, 20);
        assert!(!pending.is_empty());

        // finishing the pending subtrees settles the question
        let (rest, left) =
            exists_avoider_from(18, &spec, Some(pending), &SearchConfig::default()).unwrap();
        assert_eq!(rest.status, SearchStatus::Exhausted);
        assert!(left.is_empty());
    }

    #[test]
    fn multiplicative_search_runs() {
        let spec = PatternSpec::additive(3, 2).with_flavor(Flavor::Multiplicative);
        let o = search(12, spec);
        assert_eq!(o.status, SearchStatus::AvoiderFound);
    }

    #[test]
    fn rejects_bad_frontier() {
        let spec = PatternSpec::additive(3, 2);
        // 1, 2, 3 in a row already contains 1 + 2 = 3 with 3 last
        let err = exists_avoider_from(5, &spec, Some(vec![vec![1, 2, 3]]), &SearchConfig::default());
        assert!(err.is_err());
        assert!(exists_avoider_from(5, &spec, Some(vec![vec![1, 1]]), &SearchConfig::default())
            .is_err());
    }
}
