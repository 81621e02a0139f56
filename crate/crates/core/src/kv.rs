//! `key=value` line records shared by the checkpoint and witness corpus formats.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) struct Record<'a> {
    line: usize,
    fields: BTreeMap<&'a str, &'a str>,
}

impl<'a> Record<'a> {
    /// Splits whitespace-separated `key=value` tokens; `line` is 1-based, for errors.
    pub fn parse(line: usize, text: &'a str) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for tok in text.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected key=value, found `{tok}`"),
            })?;
            if fields.insert(k, v).is_some() {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate key `{k}`"),
                });
            }
        }
        Ok(Record { line, fields })
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    pub fn raw(&self, key: &str) -> Result<&'a str> {
        self.fields
            .get(key)
            .copied()
            .ok_or_else(|| self.err(format!("missing `{key}`")))
    }

    pub fn opt(&self, key: &str) -> Option<&'a str> {
        self.fields.get(key).copied()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|e| self.err(format!("bad `{key}` value `{raw}`: {e}")))
    }

    /// Rejects keys outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.fields.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(self.err(format!("unexpected key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Comma-separated unsigned integers, no spaces.
pub(crate) fn parse_list<T: FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad list entry `{t}`"),
            })
        })
        .collect()
}

pub(crate) fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
