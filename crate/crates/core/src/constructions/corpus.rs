//! One-record-per-line witness corpus.
//!
//! ```text
//! id=s7_f43 n=7 k=4 ell=3 flavor=add monotone=false claim=avoider perm=2,4,6,7,5,3,1 cite=...
//! ```
//!
//! `cite` must come last and runs to the end of the line. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kv::{join, parse_list, Record};
use crate::pattern::{find_hit, Flavor, PatternSpec};
use crate::permutation::Permutation;

/// The corpus shipped with the library.
pub const BUILTIN_CORPUS: &str = include_str!("../../data/witnesses.corpus");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// The permutation has no hit under the spec.
    Avoider,
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "avoider" => Ok(Claim::Avoider),
            other => Err(Error::InvalidSpec(format!("unknown claim `{other}`"))),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Avoider => f.write_str("avoider"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub id: String,
    pub n: usize,
    pub spec: PatternSpec,
    pub permutation: Permutation,
    pub claim: Claim,
    pub citation: String,
}

impl WitnessRecord {
    /// Re-checks the claim from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |detail: String| Error::ClaimFailed {
            id: self.id.clone(),
            detail,
        };
        if self.permutation.len() != self.n {
            return Err(fail(format!(
                "n = {} but the permutation has length {}",
                self.n,
                self.permutation.len()
            )));
        }
        match self.claim {
            Claim::Avoider => match find_hit(&self.permutation, &self.spec)? {
                None => Ok(()),
                Some(hit) => Err(fail(format!(
                    "hit {:?} at positions {:?}",
                    hit.values, hit.positions
                ))),
            },
        }
    }
}

impl fmt::Display for WitnessRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        write!(
            f,
            "id={} n={} k={} ell={} flavor={} monotone={} claim={} perm={} cite={}",
            self.id,
            self.n,
            s.k(),
            s.ell(),
            s.flavor(),
            s.monotone(),
            self.claim,
            join(self.permutation.values()),
            self.citation
        )
    }
}

fn parse_record(line: usize, text: &str) -> Result<WitnessRecord> {
    let (fields, citation) = match text.split_once(" cite=") {
        Some((head, cite)) => (head, cite.trim()),
        None => (text, ""),
    };
    let rec = Record::parse(line, fields)?;
    rec.only(&["id", "n", "k", "ell", "flavor", "monotone", "claim", "perm"])?;
    let spec = PatternSpec::new(
        rec.get("k")?,
        rec.get("ell")?,
        rec.get::<Flavor>("flavor")?,
        rec.get("monotone")?,
    )
    .map_err(|e| rec.err(e.to_string()))?;
    let permutation = Permutation::new(parse_list(line, rec.raw("perm")?)?)
        .map_err(|e| rec.err(e.to_string()))?;
    Ok(WitnessRecord {
        id: rec.raw("id")?.to_string(),
        n: rec.get("n")?,
        spec,
        permutation,
        claim: rec.get("claim")?,
        citation: citation.to_string(),
    })
}

/// Parses a corpus without checking the claims.
pub fn parse_corpus(text: &str) -> Result<Vec<WitnessRecord>> {
    let mut out: Vec<WitnessRecord> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rec = parse_record(i + 1, line)?;
        if out.iter().any(|r| r.id == rec.id) {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("duplicate id `{}`", rec.id),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_corpus(records: &[WitnessRecord]) -> String {
    let mut s = String::from("# permsub witness corpus v1\n");
    for r in records {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

/// The built-in corpus, every claim re-verified.
pub fn builtin_corpus() -> Result<Vec<WitnessRecord>> {
    let records = parse_corpus(BUILTIN_CORPUS)?;
    for r in &records {
        r.verify()?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_five_verified_records() {
        let ids: Vec<_> = builtin_corpus().unwrap().into_iter().map(|r| r.id).collect();
        assert_eq!(ids, ["s7_f43", "s12_f34", "s17_g32", "s31_mult2", "s59_inv2"]);
    }

    #[test]
    fn s59_is_block_then_increasing() {
        let block = [
            27, 21, 14, 56, 45, 24, 18, 42, 15, 6, 10, 2, 7, 8, 40, 5, 4, 20, 3, 16, 12, 30, 9,
            36, 48, 28, 35, 54,
        ];
        let r = builtin_corpus()
            .unwrap()
            .into_iter()
            .find(|r| r.id == "s59_inv2")
            .unwrap();
        let v = r.permutation.values();
        assert_eq!(&v[..28], &block);
        assert!(v[28..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn round_trip() {
        let records = parse_corpus(BUILTIN_CORPUS).unwrap();
        assert_eq!(parse_corpus(&write_corpus(&records)).unwrap(), records);
    }

    #[test]
    fn broken_claim_is_reported() {
        let text = "id=bad n=5 k=3 ell=2 flavor=add monotone=false claim=avoider perm=1,4,3,5,2 cite=x";
        let recs = parse_corpus(text).unwrap();
        assert!(matches!(recs[0].verify(), Err(Error::ClaimFailed { .. })));
        assert!(parse_corpus("id=x n=3").is_err());
    }
}
