//! Plain-text snapshot of an interrupted threshold run.
//!
//! ```text
//! permsub-checkpoint v1
//! spec k=4 ell=3 flavor=add monotone=false
//! range start=4 max=12
//! done n=4 status=avoider_found nodes=3 elapsed_ns=2100 witness=1,2,4,3
//! current n=8
//! pending 1,3,2,4
//! ```
//!
//! `pending` lines list the unexplored subtrees of the current size in search order.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use super::engine::Frontier;
use super::threshold::NStat;
use super::SearchStatus;
use crate::error::{Error, Result};
use crate::kv::{join, parse_list, Record};
use crate::pattern::{Flavor, PatternSpec};
use crate::permutation::Permutation;

const HEADER: &str = "permsub-checkpoint v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub spec: PatternSpec,
    pub n_start: usize,
    pub n_max: usize,
    pub done: Vec<NStat>,
    pub current: Option<Current>,
}

/// The size being searched when the run stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Current {
    pub n: usize,
    pub pending: Vec<Frontier>,
}

fn status_name(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::AvoiderFound => "avoider_found",
        SearchStatus::Exhausted => "exhausted",
        SearchStatus::Inconclusive => "inconclusive",
    }
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER}")?;
        let s = &self.spec;
        writeln!(
            f,
            "spec k={} ell={} flavor={} monotone={}",
            s.k(),
            s.ell(),
            s.flavor(),
            s.monotone()
        )?;
        writeln!(f, "range start={} max={}", self.n_start, self.n_max)?;
        for d in &self.done {
            write!(
                f,
                "done n={} status={} nodes={} elapsed_ns={}",
                d.n,
                status_name(d.status),
                d.nodes_explored,
                d.elapsed.as_nanos()
            )?;
            if let Some(w) = &d.witness {
                write!(f, " witness={}", join(w.values()))?;
            }
            writeln!(f)?;
        }
        if let Some(c) = &self.current {
            writeln!(f, "current n={}", c.n)?;
            for p in &c.pending {
                writeln!(f, "pending {}", join(p))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Checkpoint {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("checkpoint ends before the {what} line"),
            })
        };

        let (ln, header) = next("header")?;
        if header != HEADER {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected `{HEADER}`"),
            });
        }
        let (ln, line) = next("spec")?;
        let rec = record(ln, line, "spec")?;
        rec.only(&["k", "ell", "flavor", "monotone"])?;
        let spec = PatternSpec::new(
            rec.get("k")?,
            rec.get("ell")?,
            rec.get::<Flavor>("flavor")?,
            rec.get("monotone")?,
        )
        .map_err(|e| rec.err(e.to_string()))?;
        let (ln, line) = next("range")?;
        let rec = record(ln, line, "range")?;
        rec.only(&["start", "max"])?;
        let (n_start, n_max) = (rec.get("start")?, rec.get("max")?);

        let mut done = Vec::new();
        let mut current: Option<Current> = None;
        for (ln, line) in lines {
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "done" if current.is_none() => {
                    let rec = Record::parse(ln, rest)?;
                    rec.only(&["n", "status", "nodes", "elapsed_ns", "witness"])?;
                    let status = match rec.raw("status")? {
                        "avoider_found" => SearchStatus::AvoiderFound,
                        "exhausted" => SearchStatus::Exhausted,
                        other => return Err(rec.err(format!("bad status `{other}`"))),
                    };
                    let n: usize = rec.get("n")?;
                    let witness = match rec.opt("witness") {
                        Some(w) => {
                            let p = Permutation::new(parse_list(ln, w)?)
                                .map_err(|e| rec.err(e.to_string()))?;
                            if p.len() != n {
                                return Err(rec.err("witness length differs from n"));
                            }
                            Some(p)
                        }
                        None => None,
                    };
                    if (status == SearchStatus::AvoiderFound) != witness.is_some() {
                        return Err(rec.err("avoider_found entries carry exactly one witness"));
                    }
                    done.push(NStat {
                        n,
                        status,
                        nodes_explored: rec.get("nodes")?,
                        elapsed: Duration::from_nanos(rec.get("elapsed_ns")?),
                        witness,
                    });
                }
                "current" if current.is_none() => {
                    let rec = Record::parse(ln, rest)?;
                    rec.only(&["n"])?;
                    current = Some(Current {
                        n: rec.get("n")?,
                        pending: Vec::new(),
                    });
                }
                "pending" => match current.as_mut() {
                    Some(c) => c.pending.push(parse_list(ln, rest)?),
                    None => {
                        return Err(Error::Parse {
                            line: ln,
                            msg: "`pending` before `current`".into(),
                        })
                    }
                },
                other => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("unexpected `{other}` line"),
                    })
                }
            }
        }
        Ok(Checkpoint {
            spec,
            n_start,
            n_max,
            done,
            current,
        })
    }
}

fn record<'a>(ln: usize, line: &'a str, tag: &str) -> Result<Record<'a>> {
    match line.split_once(' ') {
        Some((t, rest)) if t == tag => Record::parse(ln, rest),
        _ => Err(Error::Parse {
            line: ln,
            msg: format!("expected a `{tag}` line"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            spec: PatternSpec::additive(3, 2).with_monotone(true),
            n_start: 3,
            n_max: 20,
            done: vec![NStat {
                n: 3,
                status: SearchStatus::AvoiderFound,
                nodes_explored: 4,
                elapsed: Duration::from_nanos(1234),
                witness: Some(Permutation::new(vec![1, 3, 2]).unwrap()),
            }],
            current: Some(Current {
                n: 4,
                pending: vec![vec![1, 2], vec![2, 1, 3]],
            }),
        }
    }

    #[test]
    fn round_trip() {
        let cp = sample();
        let text = cp.to_string();
        assert!(text.starts_with(HEADER));
        assert_eq!(text.parse::<Checkpoint>().unwrap(), cp);
    }

    #[test]
    fn rejects_garbage() {
        assert!("nope".parse::<Checkpoint>().is_err());
        let text = sample().to_string().replace("flavor=add", "flavor=div");
        assert!(text.parse::<Checkpoint>().is_err());
        let text = sample().to_string().replace("current n=4\n", "");
        assert!(text.parse::<Checkpoint>().is_err());
    }
}
