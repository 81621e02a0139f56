use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::checkpoint::{Checkpoint, Current};
use super::{exists_avoider_from, SearchConfig, SearchStatus};
use crate::error::{Error, Result};
use crate::pattern::PatternSpec;
use crate::permutation::Permutation;

/// One size examined while looking for the threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NStat {
    pub n: usize,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub witness: Option<Permutation>,
}

/// The least `n` for which every permutation of `S_n` contains the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub spec: PatternSpec,
    pub threshold: usize,
    /// An avoider of length `threshold - 1`.
    pub largest_avoider: Permutation,
    pub per_n: Vec<NStat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThresholdOutcome {
    Resolved(ThresholdResult),
    Unresolved {
        spec: PatternSpec,
        reason: String,
        per_n: Vec<NStat>,
    },
}

impl ThresholdOutcome {
    pub fn per_n(&self) -> &[NStat] {
        match self {
            ThresholdOutcome::Resolved(r) => &r.per_n,
            ThresholdOutcome::Unresolved { per_n, .. } => per_n,
        }
    }

    pub fn threshold(&self) -> Option<usize> {
        match self {
            ThresholdOutcome::Resolved(r) => Some(r.threshold),
            ThresholdOutcome::Unresolved { .. } => None,
        }
    }
}

/// Searches `n = n_start, n_start + 1, ..` until some `S_n` has no avoider.
///
/// Avoidance is hereditary (deleting the largest value of an avoider leaves an
/// avoider), so the first exhausted `n` is the threshold once an avoider of length
/// `n - 1` is known. `n_start` defaults to `k`. The budget in `config` covers the whole
/// run.
pub fn threshold(
    spec: &PatternSpec,
    n_start: Option<usize>,
    n_max: usize,
    config: &SearchConfig,
) -> Result<ThresholdOutcome> {
    threshold_resumable(spec, n_start, n_max, config, None).map(|(o, _)| o)
}

/// Like [`threshold`], resuming from and producing [`Checkpoint`]s.
///
/// A checkpoint is returned whenever the budget ran out before the threshold was
/// settled.
pub fn threshold_resumable(
    spec: &PatternSpec,
    n_start: Option<usize>,
    n_max: usize,
    config: &SearchConfig,
    resume: Option<Checkpoint>,
) -> Result<(ThresholdOutcome, Option<Checkpoint>)> {
    let n_start = n_start.unwrap_or(spec.k()).max(1);
    if n_max < n_start {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: n_max as u64,
            limit: format!("n_max >= n_start = {n_start}"),
        });
    }

    let (mut per_n, mut current) = match resume {
        Some(cp) => {
            if cp.spec != *spec || cp.n_start != n_start || cp.n_max != n_max {
                return Err(Error::InvalidSpec(format!(
                    "checkpoint is for {} over n = {}..={}, not {} over n = {}..={}",
                    cp.spec, cp.n_start, cp.n_max, spec, n_start, n_max
                )));
            }
            (cp.done, cp.current)
        }
        None => (Vec::new(), None),
    };

    let started = Instant::now();
    let mut spent_nodes = 0u64;

    // sizes still to try, in order: n_start upwards, then n_start - 1 if needed
    loop {
        if let Some(outcome) = settle(spec, n_start, &per_n) {
            return Ok((outcome, None));
        }
        let (n, frontier) = match current.take() {
            Some(Current { n, pending }) => (n, Some(pending)),
            None => match next_n(n_start, n_max, &per_n) {
                Some(n) => (n, None),
                None => {
                    let reason = format!("every n in {n_start}..={n_max} has an avoider");
                    return Ok((unresolved(spec, reason, per_n), None));
                }
            },
        };

        let budget = config.budget.remaining(spent_nodes, started.elapsed());
        let cfg = SearchConfig { budget, ..*config };
        if budget.is_spent() {
            let pending = frontier.unwrap_or_else(|| vec![vec![1]]);
            return Ok(stop(spec, n_start, n_max, per_n, n, pending, "budget exhausted".into()));
        }
        let (outcome, pending) = exists_avoider_from(n, spec, frontier, &cfg)?;
        spent_nodes += outcome.nodes_explored;
        if outcome.status == SearchStatus::Inconclusive {
            let reason = outcome
                .reason
                .unwrap_or_else(|| "budget exhausted".into());
            return Ok(stop(spec, n_start, n_max, per_n, n, pending, reason));
        }
        per_n.push(NStat {
            n,
            status: outcome.status,
            nodes_explored: outcome.nodes_explored,
            elapsed: outcome.elapsed,
            witness: outcome.witness,
        });
    }
}

fn stat(per_n: &[NStat], n: usize) -> Option<&NStat> {
    per_n.iter().find(|s| s.n == n)
}

/// The next size to search, given what is already known.
fn next_n(n_start: usize, n_max: usize, per_n: &[NStat]) -> Option<usize> {
    let mut n = n_start;
    while let Some(s) = stat(per_n, n) {
        if s.status == SearchStatus::Exhausted {
            // only reached when n == n_start and n_start - 1 is still unknown
            return (n > 1).then_some(n - 1);
        }
        n += 1;
    }
    (n <= n_max).then_some(n)
}

fn settle(spec: &PatternSpec, n_start: usize, per_n: &[NStat]) -> Option<ThresholdOutcome> {
    let first_exhausted = per_n
        .iter()
        .filter(|s| s.status == SearchStatus::Exhausted && s.n >= n_start)
        .map(|s| s.n)
        .min()?;
    if first_exhausted == 1 {
        // never happens for k >= 3, kept for completeness
        return None;
    }
    let below = stat(per_n, first_exhausted - 1)?;
    match below.status {
        SearchStatus::AvoiderFound => {
            let mut per_n = per_n.to_vec();
            per_n.sort_by_key(|s| s.n);
            Some(ThresholdOutcome::Resolved(ThresholdResult {
                spec: *spec,
                threshold: first_exhausted,
                largest_avoider: below.witness.clone().expect("avoider has witness"),
                per_n,
            }))
        }
        SearchStatus::Exhausted => Some(unresolved(
            spec,
            format!("S_{} already has no avoider; the threshold is below n_start", below.n),
            per_n.to_vec(),
        )),
        SearchStatus::Inconclusive => None,
    }
}

fn unresolved(spec: &PatternSpec, reason: String, mut per_n: Vec<NStat>) -> ThresholdOutcome {
    per_n.sort_by_key(|s| s.n);
    ThresholdOutcome::Unresolved {
        spec: *spec,
        reason,
        per_n,
    }
}

fn stop(
    spec: &PatternSpec,
    n_start: usize,
    n_max: usize,
    per_n: Vec<NStat>,
    n: usize,
    pending: Vec<super::Frontier>,
    reason: String,
) -> (ThresholdOutcome, Option<Checkpoint>) {
    let checkpoint = Checkpoint {
        spec: *spec,
        n_start,
        n_max,
        done: per_n.clone(),
        current: Some(Current { n, pending }),
    };
    let reason = format!("search at n = {n} stopped: {reason}");
    (unresolved(spec, reason, per_n), Some(checkpoint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Budget;

    #[test]
    fn f32_is_five() {
        let spec = PatternSpec::additive(3, 2);
        let o = threshold(&spec, None, 10, &SearchConfig::default()).unwrap();
        let ThresholdOutcome::Resolved(r) = o else {
            panic!("unresolved: {o:?}")
        };
        assert_eq!(r.threshold, 5);
        assert_eq!(r.largest_avoider.len(), 4);
        let ns: Vec<_> = r.per_n.iter().map(|s| s.n).collect();
        assert_eq!(ns, vec![3, 4, 5]);
    }

    #[test]
    fn start_above_threshold_checks_below() {
        let spec = PatternSpec::additive(3, 2);
        let o = threshold(&spec, Some(5), 10, &SearchConfig::default()).unwrap();
        assert_eq!(o.threshold(), Some(5));
        let o = threshold(&spec, Some(7), 10, &SearchConfig::default()).unwrap();
        assert!(matches!(o, ThresholdOutcome::Unresolved { .. }));
    }

    #[test]
    fn range_too_small() {
        let spec = PatternSpec::additive(3, 4);
        let o = threshold(&spec, None, 6, &SearchConfig::default()).unwrap();
        match o {
            ThresholdOutcome::Unresolved { reason, per_n, .. } => {
                assert!(reason.contains("has an avoider"));
                assert_eq!(per_n.len(), 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn resume_matches_uninterrupted() {
        let spec = PatternSpec::additive(4, 3);
        let full = threshold(&spec, None, 12, &SearchConfig::default()).unwrap();
        assert_eq!(full.threshold(), Some(8));

        let cfg = SearchConfig::default().with_budget(Budget::nodes(40));
        let mut cp = None;
        let mut rounds = 0;
        let resolved = loop {
            let (o, next) = threshold_resumable(&spec, None, 12, &cfg, cp).unwrap();
            match next {
                Some(c) => {
                    let text = c.to_string();
                    cp = Some(text.parse().unwrap());
                }
                None => break o,
            }
            rounds += 1;
            assert!(rounds < 10_000);
        };
        assert!(rounds > 1);
        assert_eq!(resolved.threshold(), Some(8));
    }
}
