//! Permutations in one-line notation and the value sequences cut out of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1, .., n}` in one-line notation, with a value → position index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    values: Vec<u32>,
    // index[v] is the 0-based position of value v; index[0] is unused.
    index: Vec<u32>,
}

impl Permutation {
    /// Validates `values` as a permutation of `{1, .., values.len()}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut index = vec![u32::MAX; n + 1];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 {
                return Err(Error::NonPositive(0));
            }
            let slot = index
                .get_mut(v as usize)
                .ok_or(Error::ValueOutOfRange { value: v as i64, max: n })?;
            if *slot != u32::MAX {
                return Err(Error::DuplicateValue(v as i64));
            }
            *slot = i as u32;
        }
        Ok(Permutation { values, index })
    }

    /// Builds a permutation from signed input, rejecting non-positive entries by value.
    pub fn from_signed(values: &[i64]) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in values {
            if v <= 0 {
                return Err(Error::NonPositive(v));
            }
            if v as u64 > n as u64 {
                return Err(Error::ValueOutOfRange { value: v, max: n });
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::DuplicateValue(v));
            }
        }
        Self::new(values.iter().map(|&v| v as u32).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::new((1..=n as u32).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// Value at 0-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i]
    }

    /// 1-based position of `value`, if it belongs to `{1, .., n}`.
    pub fn position_of(&self, value: u64) -> Option<usize> {
        self.index0(value).map(|i| i + 1)
    }

    /// 0-based position of `value`.
    pub(crate) fn index0(&self, value: u64) -> Option<usize> {
        if value == 0 || value > self.len() as u64 {
            return None;
        }
        Some(self.index[value as usize] as usize)
    }

    fn check_value(&self, s: u64) -> Result<usize> {
        self.index0(s).ok_or(Error::ValueOutOfRange {
            value: s as i64,
            max: self.len(),
        })
    }

    /// Values strictly to the left of `s`.
    pub fn left_set(&self, s: u64) -> Result<BTreeSet<u32>> {
        let i = self.check_value(s)?;
        Ok(self.values[..i].iter().copied().collect())
    }

    /// Values strictly to the right of `s`.
    pub fn right_set(&self, s: u64) -> Result<BTreeSet<u32>> {
        let i = self.check_value(s)?;
        Ok(self.values[i + 1..].iter().copied().collect())
    }

    /// Terms of `self` that lie in `keep`, in their original order and with their original labels.
    pub fn subpermutation<I>(&self, keep: I) -> Result<ValueSequence>
    where
        I: IntoIterator<Item = u64>,
    {
        let mut wanted = vec![false; self.len() + 1];
        for v in keep {
            self.check_value(v)?;
            wanted[v as usize] = true;
        }
        Ok(ValueSequence(
            self.values
                .iter()
                .filter(|&&v| wanted[v as usize])
                .map(|&v| v as u64)
                .collect(),
        ))
    }

    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self::new(values).expect("reversal preserves validity")
    }

    pub fn to_sequence(&self) -> ValueSequence {
        ValueSequence(self.values.iter().map(|&v| v as u64).collect())
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.values
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comma_list(f, self.values.iter())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses a comma list such as `5,1,4,3,2` (surrounding parentheses and spaces allowed).
    fn from_str(s: &str) -> Result<Self> {
        Self::from_signed(&parse_comma_list(s)?)
    }
}

/// A finite sequence of distinct positive integers. Unlike a [`Permutation`] the
/// values need not be `{1, .., m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueSequence(Vec<u64>);

impl ValueSequence {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in &values {
            if v == 0 {
                return Err(Error::NonPositive(0));
            }
            if !seen.insert(v) {
                return Err(Error::DuplicateValue(v as i64));
            }
        }
        Ok(ValueSequence(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_values(self) -> Vec<u64> {
        self.0
    }
}

impl fmt::Display for ValueSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comma_list(f, self.0.iter())
    }
}

fn write_comma_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    for (i, v) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

pub(crate) fn parse_comma_list(s: &str) -> Result<Vec<i64>> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<i64>().map_err(|e| Error::Parse {
                line: 0,
                msg: format!("bad integer `{tok}`: {e}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn accepts_valid_permutations() {
        let p = perm(&[5, 1, 4, 3, 2]);
        assert_eq!(p.len(), 5);
        assert_eq!(p.position_of(4), Some(3));
        assert_eq!(perm(&[1]).len(), 1);
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert_eq!(Permutation::new(vec![1, 1, 2]), Err(Error::DuplicateValue(1)));
        assert_eq!(
            Permutation::new(vec![1, 4, 2]),
            Err(Error::ValueOutOfRange { value: 4, max: 3 })
        );
        assert_eq!(Permutation::from_signed(&[2, -1]), Err(Error::NonPositive(-1)));
        assert_eq!(Permutation::from_signed(&[0, 1]), Err(Error::NonPositive(0)));
        assert_eq!("1,1,2".parse::<Permutation>(), Err(Error::DuplicateValue(1)));
    }

    #[test]
    fn left_and_right_sets() {
        let p = perm(&[5, 1, 4, 3, 2]);
        assert_eq!(p.left_set(4).unwrap(), BTreeSet::from([1, 5]));
        assert_eq!(p.right_set(1).unwrap(), BTreeSet::from([2, 3, 4]));
        assert!(perm(&[1, 2, 3]).left_set(1).unwrap().is_empty());
        assert!(p.left_set(6).is_err());
        assert!(p.left_set(0).is_err());
    }

    #[test]
    fn subpermutations_keep_labels() {
        let p = perm(&[5, 1, 4, 3, 2]);
        assert_eq!(p.subpermutation([1, 3, 5]).unwrap().values(), &[5, 1, 3]);
        assert_eq!(p.subpermutation(1..=5).unwrap().values(), &[5, 1, 4, 3, 2]);
        assert!(p.subpermutation([]).unwrap().is_empty());
        assert!(p.subpermutation([6]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let p: Permutation = "(5, 1, 4, 3, 2)".parse().unwrap();
        assert_eq!(p.to_string(), "5,1,4,3,2");
        assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn value_sequence_validation() {
        assert!(ValueSequence::new(vec![20, 30, 12]).is_ok());
        assert!(ValueSequence::new(vec![3, 0]).is_err());
        assert!(ValueSequence::new(vec![3, 3]).is_err());
    }
}
