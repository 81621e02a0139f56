//! Pattern specifications, the subsequence predicates, and hit detection/counting.
//!
//! A sequence `(a_1, .., a_k)` satisfies a pattern when the relation binds either its
//! first or its last term (the *anchor*):
//!
//! | flavor            | anchored at `a`        |
//! |-------------------|------------------------|
//! | additive          | `Σ a_i   = ℓ·a`        |
//! | multiplicative    | `Π a_i   = a^ℓ`        |
//! | inverse-additive  | `Σ 1/a_i = ℓ/a`        |
//!
//! Equivalently the other `k − 1` terms combine to `(ℓ−1)·a`, `a^(ℓ−1)` or `(ℓ−1)/a`.
//! Detection and counting both work from that reduced form.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::{Permutation, ValueSequence};
use crate::transforms::ExactRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Additive,
    Multiplicative,
    InverseAdditive,
}

impl Flavor {
    pub fn short_name(self) -> &'static str {
        match self {
            Flavor::Additive => "add",
            Flavor::Multiplicative => "mul",
            Flavor::InverseAdditive => "inv",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" | "additive" => Ok(Flavor::Additive),
            "mul" | "multiplicative" => Ok(Flavor::Multiplicative),
            "inv" | "inverse_additive" | "inverse-additive" => Ok(Flavor::InverseAdditive),
            other => Err(Error::InvalidSpec(format!("unknown flavor `{other}`"))),
        }
    }
}

/// Which end of the subsequence the relation binds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    First,
    Last,
}

impl Anchor {
    pub fn mirrored(self) -> Self {
        match self {
            Anchor::First => Anchor::Last,
            Anchor::Last => Anchor::First,
        }
    }
}

/// `(k, ℓ, flavor, monotone)`: the subsequence pattern being looked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PatternSpec {
    k: usize,
    ell: u32,
    flavor: Flavor,
    monotone: bool,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    k: usize,
    ell: u32,
    flavor: Flavor,
    monotone: bool,
}

impl TryFrom<RawSpec> for PatternSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        PatternSpec::new(r.k, r.ell, r.flavor, r.monotone)
    }
}

impl From<PatternSpec> for RawSpec {
    fn from(s: PatternSpec) -> Self {
        RawSpec {
            k: s.k,
            ell: s.ell,
            flavor: s.flavor,
            monotone: s.monotone,
        }
    }
}

impl PatternSpec {
    pub fn new(k: usize, ell: u32, flavor: Flavor, monotone: bool) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidSpec(format!("k must be at least 3, got {k}")));
        }
        if ell < 2 {
            return Err(Error::InvalidSpec(format!("ell must be at least 2, got {ell}")));
        }
        Ok(PatternSpec {
            k,
            ell,
            flavor,
            monotone,
        })
    }

    /// Non-monotone additive pattern; panics on `k < 3` or `ell < 2`.
    pub fn additive(k: usize, ell: u32) -> Self {
        Self::new(k, ell, Flavor::Additive, false).expect("valid additive spec")
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    pub fn with_monotone(mut self, monotone: bool) -> Self {
        self.monotone = monotone;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn monotone(&self) -> bool {
        self.monotone
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(k={}, ell={}, {}{})",
            self.k,
            self.ell,
            self.flavor,
            if self.monotone { ", monotone" } else { "" }
        )
    }
}

/// A qualifying subsequence found in a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hit {
    /// Strictly increasing, 1-based.
    pub positions: Vec<usize>,
    pub values: Vec<u64>,
    pub anchor: Anchor,
}

/// Strictly increasing or strictly decreasing (sequences of length < 2 count as both).
pub fn is_strictly_monotone(values: &[u64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1]) || values.windows(2).all(|w| w[0] > w[1])
}

/// Evaluates the pattern on a length-`k` sequence with fixed-width integers.
///
/// Sums and products are computed in `u128` and fail with [`Error::Overflow`] instead of
/// wrapping; reciprocal sums use exact rationals. See [`pattern_holds_big`] for an
/// arbitrary-precision variant.
pub fn pattern_holds(seq: &ValueSequence, spec: &PatternSpec) -> Result<Option<Anchor>> {
    let v = seq.values();
    if v.len() != spec.k {
        return Err(Error::LengthMismatch {
            expected: spec.k,
            found: v.len(),
        });
    }
    if spec.monotone && !is_strictly_monotone(v) {
        return Ok(None);
    }
    let (first, last) = (v[0], v[v.len() - 1]);
    let ell = spec.ell;
    let anchor = match spec.flavor {
        Flavor::Additive => {
            let sum = v.iter().try_fold(0u128, |acc, &x| acc.checked_add(x as u128));
            let sum = sum.ok_or(Error::Overflow("subsequence sum"))?;
            pick_anchor(sum, first as u128 * ell as u128, last as u128 * ell as u128)
        }
        Flavor::Multiplicative => {
            let prod = v.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128));
            let prod = prod.ok_or(Error::Overflow("subsequence product"))?;
            let pow = |a: u64| (a as u128).checked_pow(ell).ok_or(Error::Overflow("anchor power"));
            pick_anchor(prod, pow(first)?, pow(last)?)
        }
        Flavor::InverseAdditive => {
            let sum = v
                .iter()
                .fold(ExactRational::zero(), |acc, &x| &acc + &ExactRational::recip_of(x));
            let target = |a: u64| ExactRational::new(ell, a).expect("nonzero anchor");
            pick_anchor(sum, target(first), target(last))
        }
    };
    Ok(anchor)
}

/// [`pattern_holds`] over arbitrary-precision values; never overflows.
pub fn pattern_holds_big(values: &[BigUint], spec: &PatternSpec) -> Result<Option<Anchor>> {
    if values.len() != spec.k {
        return Err(Error::LengthMismatch {
            expected: spec.k,
            found: values.len(),
        });
    }
    if values.iter().any(Zero::is_zero) {
        return Err(Error::NonPositive(0));
    }
    if spec.monotone
        && !(values.windows(2).all(|w| w[0] < w[1]) || values.windows(2).all(|w| w[0] > w[1]))
    {
        return Ok(None);
    }
    let first = &values[0];
    let last = &values[values.len() - 1];
    let ell = spec.ell;
    let anchor = match spec.flavor {
        Flavor::Additive => {
            let sum: BigUint = values.iter().sum();
            pick_anchor(sum, first * ell, last * ell)
        }
        Flavor::Multiplicative => {
            let prod: BigUint = values.iter().product();
            pick_anchor(prod, first.pow(ell), last.pow(ell))
        }
        Flavor::InverseAdditive => {
            let sum = values.iter().fold(ExactRational::zero(), |acc, x| {
                &acc + &ExactRational::recip_of(BigInt::from(x.clone()))
            });
            let target = |a: &BigUint| ExactRational::new(ell, BigInt::from(a.clone())).unwrap();
            pick_anchor(sum, target(first), target(last))
        }
    };
    Ok(anchor)
}

fn pick_anchor<T: PartialEq>(value: T, at_first: T, at_last: T) -> Option<Anchor> {
    if value == at_first {
        Some(Anchor::First)
    } else if value == at_last {
        Some(Anchor::Last)
    } else {
        None
    }
}

/// For an unordered set of distinct values, the unique member `a` for which the
/// relation holds with `a` as anchor (`Σ = ℓa`, `Π = a^ℓ`, `Σ 1/x = ℓ/a`).
///
/// Whether a subsequence with these values is a hit then depends only on whether `a`
/// sits at one of its ends (and on monotonicity, for monotone patterns).
pub fn relation_anchor(values: &[u64], flavor: Flavor, ell: u32) -> Result<Option<u64>> {
    let candidate = match flavor {
        Flavor::Additive => {
            let sum = values.iter().try_fold(0u128, |acc, &x| acc.checked_add(x as u128));
            let sum = sum.ok_or(Error::Overflow("subsequence sum"))?;
            (sum % ell as u128 == 0).then(|| sum / ell as u128)
        }
        Flavor::Multiplicative => {
            let prod = values.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x as u128));
            let prod = prod.ok_or(Error::Overflow("subsequence product"))?;
            integer_root(prod, ell)
        }
        Flavor::InverseAdditive => {
            let sum = values
                .iter()
                .fold(ExactRational::zero(), |acc, &x| &acc + &ExactRational::recip_of(x));
            // a = ℓ / sum must be an integer
            let a = &ExactRational::integer(ell) * &sum.recip().expect("nonempty sum");
            a.is_integer().then(|| a.numerator().to_u128()).flatten()
        }
    };
    Ok(candidate
        .and_then(|a| u64::try_from(a).ok())
        .filter(|a| values.contains(a)))
}

/// Exact `e`-th root of `x` if it is a perfect power.
fn integer_root(x: u128, e: u32) -> Option<u128> {
    if e == 1 {
        return Some(x);
    }
    let guess = (x as f64).powf(1.0 / e as f64).round() as u128;
    (guess.saturating_sub(1)..=guess + 1).find(|r| r.checked_pow(e) == Some(x))
}

/// What the non-anchor terms still have to contribute, in fixed-width or exact form.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Residual {
    Int(u128),
    Ratio(ExactRational),
}

/// Reduced-form arithmetic for one `(flavor, ℓ)` pair.
#[derive(Debug, Clone, Copy)]
struct Relation {
    flavor: Flavor,
    ell: u32,
}

impl Relation {
    fn of(spec: &PatternSpec) -> Self {
        Relation {
            flavor: spec.flavor,
            ell: spec.ell,
        }
    }

    /// Contribution the other `k − 1` terms must make when `a` is the anchor.
    fn target(&self, a: u64) -> Result<Residual> {
        let e = self.ell - 1;
        Ok(match self.flavor {
            Flavor::Additive => Residual::Int(a as u128 * e as u128),
            Flavor::Multiplicative => Residual::Int(
                (a as u128)
                    .checked_pow(e)
                    .ok_or(Error::Overflow("anchor power"))?,
            ),
            Flavor::InverseAdditive => Residual::Ratio(ExactRational::new(e, a).unwrap()),
        })
    }

    /// Takes `x` out of the residual; `None` when no completion can exist any more.
    fn consume(&self, r: &Residual, x: u64) -> Option<Residual> {
        let x128 = x as u128;
        match (self.flavor, r) {
            (Flavor::Additive, Residual::Int(t)) => (x128 <= *t).then(|| Residual::Int(t - x128)),
            (Flavor::Multiplicative, Residual::Int(t)) => {
                (t % x128 == 0).then(|| Residual::Int(t / x128))
            }
            (Flavor::InverseAdditive, Residual::Ratio(t)) => {
                let rest = t - &ExactRational::recip_of(x);
                (!rest.is_negative()).then_some(Residual::Ratio(rest))
            }
            _ => unreachable!("residual kind matches flavor"),
        }
    }

    /// The single value that would complete the relation, if it is a positive integer.
    fn closing_value(&self, r: &Residual) -> Option<u64> {
        match (self.flavor, r) {
            (Flavor::Additive, Residual::Int(t)) => u64::try_from(*t).ok().filter(|&t| t > 0),
            (Flavor::Multiplicative, Residual::Int(t)) => u64::try_from(*t).ok(),
            (Flavor::InverseAdditive, Residual::Ratio(t)) => {
                if t.is_zero() {
                    return None;
                }
                let inv = t.recip()?;
                inv.is_integer().then(|| inv.numerator().to_u64()).flatten()
            }
            _ => unreachable!("residual kind matches flavor"),
        }
    }

    fn empty_prefix(&self) -> Residual {
        match self.flavor {
            Flavor::Additive => Residual::Int(0),
            Flavor::Multiplicative => Residual::Int(1),
            Flavor::InverseAdditive => Residual::Ratio(ExactRational::zero()),
        }
    }

    /// Accumulates a non-anchor term into a prefix that will be closed by a last anchor.
    fn extend_prefix(&self, acc: &Residual, x: u64) -> Result<Residual> {
        Ok(match (self.flavor, acc) {
            (Flavor::Additive, Residual::Int(s)) => Residual::Int(
                s.checked_add(x as u128)
                    .ok_or(Error::Overflow("subsequence sum"))?,
            ),
            (Flavor::Multiplicative, Residual::Int(p)) => Residual::Int(
                p.checked_mul(x as u128)
                    .ok_or(Error::Overflow("subsequence product"))?,
            ),
            (Flavor::InverseAdditive, Residual::Ratio(s)) => {
                Residual::Ratio(s + &ExactRational::recip_of(x))
            }
            _ => unreachable!("residual kind matches flavor"),
        })
    }

    /// Whether a prefix has already outgrown every anchor `≤ max_value`.
    fn prefix_exceeds(&self, acc: &Residual, max_value: u64) -> bool {
        match (self.flavor, acc) {
            (Flavor::Additive, Residual::Int(s)) => *s > max_value as u128 * (self.ell - 1) as u128,
            (Flavor::Multiplicative, Residual::Int(p)) => {
                match (max_value as u128).checked_pow(self.ell - 1) {
                    Some(cap) => *p > cap,
                    None => false,
                }
            }
            // reciprocal sums only shrink the anchor; never prune
            (Flavor::InverseAdditive, _) => false,
            _ => unreachable!("residual kind matches flavor"),
        }
    }

    /// The anchor value closing a complete prefix of `k − 1` terms.
    fn anchor_for_prefix(&self, acc: &Residual) -> Option<u64> {
        let e = self.ell - 1;
        let a = match (self.flavor, acc) {
            (Flavor::Additive, Residual::Int(s)) => (s % e as u128 == 0).then(|| s / e as u128)?,
            (Flavor::Multiplicative, Residual::Int(p)) => integer_root(*p, e)?,
            (Flavor::InverseAdditive, Residual::Ratio(s)) => {
                let a = &ExactRational::integer(e) * &s.recip()?;
                return a.is_integer().then(|| a.numerator().to_u64()).flatten();
            }
            _ => unreachable!("residual kind matches flavor"),
        };
        u64::try_from(a).ok()
    }
}

/// Running direction check for monotone patterns.
#[derive(Debug, Clone, Copy, Default)]
struct Mono {
    prev: Option<u64>,
    increasing: Option<bool>,
}

impl Mono {
    fn push(self, x: u64) -> Option<Mono> {
        let Some(prev) = self.prev else {
            return Some(Mono {
                prev: Some(x),
                increasing: None,
            });
        };
        let up = x > prev;
        match self.increasing {
            Some(dir) if dir != up => None,
            _ => Some(Mono {
                prev: Some(x),
                increasing: Some(up),
            }),
        }
    }
}

/// Returns the lexicographically first hit (ordered by the position tuple), if any.
///
/// Prefixes of `k − 1` positions are enumerated in lexicographic order; each prefix has
/// at most two completions, one per anchor, and both are found by value lookup.
pub fn find_hit(p: &Permutation, spec: &PatternSpec) -> Result<Option<Hit>> {
    let k = spec.k;
    if k > p.len() {
        return Ok(None);
    }
    let mut finder = PrefixSearch {
        p,
        spec,
        rel: Relation::of(spec),
        picked: Vec::with_capacity(k),
    };
    finder.descend(0, None, &finder.rel.empty_prefix(), Mono::default())
}

struct PrefixSearch<'a> {
    p: &'a Permutation,
    spec: &'a PatternSpec,
    rel: Relation,
    picked: Vec<usize>,
}

impl PrefixSearch<'_> {
    fn descend(
        &mut self,
        start: usize,
        first_res: Option<&Residual>,
        last_acc: &Residual,
        mono: Mono,
    ) -> Result<Option<Hit>> {
        let n = self.p.len();
        let k = self.spec.k;
        let depth = self.picked.len();
        if depth == k - 1 {
            return self.complete(first_res, last_acc, mono);
        }
        // leave room for the remaining picks plus the closing term
        let end = n - (k - 1 - depth);
        for i in start..end {
            let x = self.p.at(i) as u64;
            let mono_next = if self.spec.monotone {
                match mono.push(x) {
                    Some(m) => m,
                    None => continue,
                }
            } else {
                mono
            };
            let next_first = if depth == 0 {
                Some(self.rel.target(x)?)
            } else {
                first_res.and_then(|r| self.rel.consume(r, x))
            };
            let next_last = self.rel.extend_prefix(last_acc, x)?;
            let last_alive = !self.rel.prefix_exceeds(&next_last, n as u64);
            if next_first.is_none() && !last_alive {
                continue;
            }
            self.picked.push(i);
            let found = self.descend(i + 1, next_first.as_ref(), &next_last, mono_next)?;
            self.picked.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn complete(
        &self,
        first_res: Option<&Residual>,
        last_acc: &Residual,
        mono: Mono,
    ) -> Result<Option<Hit>> {
        let after = *self.picked.last().expect("nonempty prefix");
        let mut best: Option<(usize, Anchor)> = None;
        let candidates = [
            (first_res.and_then(|r| self.rel.closing_value(r)), Anchor::First),
            (self.rel.anchor_for_prefix(last_acc), Anchor::Last),
        ];
        for (value, anchor) in candidates {
            let Some(j) = value.and_then(|v| self.p.index0(v)) else {
                continue;
            };
            if j <= after || (self.spec.monotone && mono.push(self.p.at(j) as u64).is_none()) {
                continue;
            }
            if best.is_none_or(|(b, _)| j < b) {
                best = Some((j, anchor));
            }
        }
        Ok(best.map(|(j, anchor)| {
            let mut idx = self.picked.clone();
            idx.push(j);
            make_hit(self.p, &idx, anchor)
        }))
    }
}

fn make_hit(p: &Permutation, idx: &[usize], anchor: Anchor) -> Hit {
    Hit {
        positions: idx.iter().map(|&i| i + 1).collect(),
        values: idx.iter().map(|&i| p.at(i) as u64).collect(),
        anchor,
    }
}

/// Number of position sets whose induced subsequence matches `spec`.
///
/// For every anchor value `m`, counts the `(k−1)`-subsets of the terms to its left
/// (resp. right) that combine to `m`'s share; the last member of each subset is
/// located by value lookup rather than enumerated.
pub fn count_hits(p: &Permutation, spec: &PatternSpec) -> Result<u64> {
    let mut total = 0u64;
    for_each_anchored(p, spec, |_| {
        total += 1;
        true
    })?;
    Ok(total)
}

/// Every hit of `p`, grouped by anchor position (mostly useful for reports and tests).
pub fn all_hits(p: &Permutation, spec: &PatternSpec) -> Result<Vec<Hit>> {
    let mut hits = Vec::new();
    for_each_anchored(p, spec, |h| {
        hits.push(h);
        true
    })?;
    Ok(hits)
}

fn for_each_anchored<F>(p: &Permutation, spec: &PatternSpec, mut visit: F) -> Result<()>
where
    F: FnMut(Hit) -> bool,
{
    let k = spec.k;
    let n = p.len();
    if k > n {
        return Ok(());
    }
    let rel = Relation::of(spec);
    let mut picked = Vec::with_capacity(k);
    for i in 0..n {
        let m = p.at(i) as u64;
        let target = rel.target(m)?;
        // anchor last: the others all lie left of m
        if i >= k - 1 {
            let ctx = Side {
                p,
                rel,
                spec,
                lo: 0,
                hi: i,
                anchor_at: i,
                anchor: Anchor::Last,
            };
            if !ctx.walk(&mut picked, 0, &target, Mono::default(), &mut visit) {
                return Ok(());
            }
        }
        // anchor first: the others all lie right of m
        if n - i > k - 1 {
            let ctx = Side {
                p,
                rel,
                spec,
                lo: i + 1,
                hi: n,
                anchor_at: i,
                anchor: Anchor::First,
            };
            let mono = Mono::default().push(m).expect("first push");
            if !ctx.walk(&mut picked, i + 1, &target, mono, &mut visit) {
                return Ok(());
            }
        }
    }
    Ok(())
}

struct Side<'a> {
    p: &'a Permutation,
    rel: Relation,
    spec: &'a PatternSpec,
    lo: usize,
    hi: usize,
    anchor_at: usize,
    anchor: Anchor,
}

impl Side<'_> {
    /// Returns false once the visitor asks to stop.
    fn walk<F>(
        &self,
        picked: &mut Vec<usize>,
        start: usize,
        res: &Residual,
        mono: Mono,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(Hit) -> bool,
    {
        let need = self.spec.k - 1 - picked.len();
        let start = start.max(self.lo);
        if need == 1 {
            let Some(j) = self.rel.closing_value(res).and_then(|v| self.p.index0(v)) else {
                return true;
            };
            if j < start || j >= self.hi {
                return true;
            }
            if self.spec.monotone {
                let Some(m) = mono.push(self.p.at(j) as u64) else {
                    return true;
                };
                if self.anchor == Anchor::Last && m.push(self.p.at(self.anchor_at) as u64).is_none()
                {
                    return true;
                }
            }
            picked.push(j);
            let keep_going = visit(self.hit_from(picked));
            picked.pop();
            return keep_going;
        }
        for i in start..self.hi.saturating_sub(need - 1) {
            let x = self.p.at(i) as u64;
            let Some(next) = self.rel.consume(res, x) else {
                continue;
            };
            let mono_next = if self.spec.monotone {
                match mono.push(x) {
                    Some(m) => m,
                    None => continue,
                }
            } else {
                mono
            };
            picked.push(i);
            let keep_going = self.walk(picked, i + 1, &next, mono_next, visit);
            picked.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn hit_from(&self, picked: &[usize]) -> Hit {
        let mut idx = Vec::with_capacity(picked.len() + 1);
        match self.anchor {
            Anchor::First => {
                idx.push(self.anchor_at);
                idx.extend_from_slice(picked);
            }
            Anchor::Last => {
                idx.extend_from_slice(picked);
                idx.push(self.anchor_at);
            }
        }
        make_hit(self.p, &idx, self.anchor)
    }
}

/// Whether `p` has a monotone 3-term arithmetic progression `x, y, z` (in position order).
pub fn has_monotone_3ap(p: &Permutation) -> bool {
    let n = p.len() as i64;
    (0..p.len()).any(|j| {
        let y = p.at(j) as i64;
        p.values()[..j].iter().any(|&x| {
            let z = 2 * y - x as i64;
            (1..=n).contains(&z) && p.index0(z as u64).is_some_and(|pz| pz > j)
        })
    })
}

/// Reference checker that tests every position set with [`pattern_holds_big`].
///
/// Deliberately shares no code path with [`find_hit`] / [`count_hits`]; `C(n, k)` work.
pub mod naive {
    use super::*;

    fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
        if k > n {
            return;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if !f(&idx) {
                return;
            }
            let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
                return;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn holds(p: &Permutation, idx: &[usize], spec: &PatternSpec) -> Option<Anchor> {
        let vals: Vec<BigUint> = idx.iter().map(|&i| BigUint::from(p.at(i))).collect();
        pattern_holds_big(&vals, spec).expect("length matches k")
    }

    pub fn count_hits(p: &Permutation, spec: &PatternSpec) -> u64 {
        let mut count = 0;
        for_each_subset(p.len(), spec.k(), |idx| {
            count += holds(p, idx, spec).is_some() as u64;
            true
        });
        count
    }

    /// Lexicographically first hit by position tuple.
    pub fn first_hit(p: &Permutation, spec: &PatternSpec) -> Option<Hit> {
        let mut found = None;
        for_each_subset(p.len(), spec.k(), |idx| {
            if let Some(anchor) = holds(p, idx, spec) {
                found = Some(make_hit(p, idx, anchor));
                return false;
            }
            true
        });
        found
    }

    pub fn is_avoider(p: &Permutation, spec: &PatternSpec) -> bool {
        first_hit(p, spec).is_none()
    }

    /// `O(n³)` monotone 3-AP check over all triples.
    pub fn has_monotone_3ap(p: &Permutation) -> bool {
        let mut found = false;
        for_each_subset(p.len(), 3, |idx| {
            let (x, y, z) = (p.at(idx[0]), p.at(idx[1]), p.at(idx[2]));
            found = x + z == 2 * y;
            !found
        });
        found
    }
}
